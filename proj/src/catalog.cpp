#include "qperiod/catalog.hpp"

namespace qp {

namespace {

LaurentPolynomial make(int m, std::vector<std::vector<std::int64_t>> exps) {
    std::vector<Term> terms;
    for (auto& e : exps) terms.push_back({std::move(e), Rational(1)});
    return LaurentPolynomial(m, std::move(terms));
}

std::vector<CatalogEntry> build() {
    std::vector<CatalogEntry> entries;

    // P^1: x + 1/x. Conifold at x = 1, T = 2, index 2, Cst(f^{2d}) = C(2d, d).
    entries.push_back({"p1", make(1, {{1}, {-1}}),
                       {"1"}, "2", 2, {{2, "2"}, {4, "6"}, {6, "20"}}});

    // P^2: x + y + 1/(xy). Conifold at (1,1), T = 3, index 3,
    // Cst(f^{3d}) = (3d)!/(d!)^3.
    entries.push_back({"p2", make(2, {{1, 0}, {0, 1}, {-1, -1}}),
                       {"1", "1"}, "3", 3, {{3, "6"}, {6, "90"}, {9, "1680"}}});

    // P^1 x P^1: x + 1/x + y + 1/y. Conifold at (1,1), T = 4, index 2,
    // Cst(f^{2d}) = C(2d, d)^2.
    entries.push_back({"p1xp1", make(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}),
                       {"1", "1"}, "4", 2, {{2, "4"}, {4, "36"}, {6, "400"}}});

    // P^3: x + y + z + 1/(xyz). Conifold at (1,1,1), T = 4, index 4,
    // Cst(f^{4d}) = (4d)!/(d!)^4.
    entries.push_back({"p3", make(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}}),
                       {"1", "1", "1"}, "4", 4, {{4, "24"}, {8, "2520"}, {12, "369600"}}});

    return entries;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = build();
    return entries;
}

const CatalogEntry* find_catalog(const std::string& name) {
    for (const auto& e : catalog())
        if (e.name == name) return &e;
    return nullptr;
}

std::vector<std::string> catalog_names() {
    std::vector<std::string> names;
    for (const auto& e : catalog()) names.push_back(e.name);
    return names;
}

}  // namespace qp
