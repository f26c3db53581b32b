#ifndef QPERIOD_TESTS_TEST_UTIL_HPP
#define QPERIOD_TESTS_TEST_UTIL_HPP

#include <cstdint>
#include <vector>

#include "qperiod/laurent.hpp"
#include "qperiod/numeric.hpp"
#include "qperiod/walk.hpp"

namespace qptest {

using qp::Exponent;
using qp::Integer;
using qp::LaurentPolynomial;
using qp::Rational;
using qp::Real;
using qp::Term;

inline LaurentPolynomial poly(int m, std::vector<std::pair<std::vector<std::int64_t>, Rational>> ts) {
    std::vector<Term> terms;
    for (auto& [e, c] : ts) terms.push_back({e, c});
    return LaurentPolynomial(m, std::move(terms));
}

// Unit-coefficient model from its support.
inline LaurentPolynomial unit_poly(int m, std::vector<std::vector<std::int64_t>> exps) {
    std::vector<Term> terms;
    for (auto& e : exps) terms.push_back({e, Rational(1)});
    return LaurentPolynomial(m, std::move(terms));
}

// Brute-force oracle: Cst(f^n) as the sum over all n-tuples of support
// vectors summing to zero of the product of coefficients. Exponential in n;
// keep f small.
inline Rational brute_force_cst(const LaurentPolynomial& f, int n) {
    if (n == 0) return Rational(1);
    const auto& terms = f.terms();
    const int m = f.num_vars();
    Rational total(0);
    std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
    while (true) {
        std::vector<std::int64_t> sum(m, 0);
        Rational prod(1);
        for (int i = 0; i < n; ++i) {
            const auto& t = terms[pick[static_cast<std::size_t>(i)]];
            for (int j = 0; j < m; ++j) sum[static_cast<std::size_t>(j)] += t.exp[static_cast<std::size_t>(j)];
            prod *= t.coeff;
        }
        bool zero = true;
        for (auto v : sum)
            if (v != 0) { zero = false; break; }
        if (zero) total += prod;

        int pos = n - 1;
        while (pos >= 0) {
            if (++pick[static_cast<std::size_t>(pos)] < terms.size()) break;
            pick[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return total;
}

// Independent combinatorial anchors, straight from GMP.
inline Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.backend().data(), n, k);
    return r;
}

inline Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.backend().data(), n);
    return r;
}

// Random small convenient-ish polynomial: support drawn from a box, always
// includes opposite vectors so powers stay interesting.
inline LaurentPolynomial random_poly(qp::SplitMix64& rng, int m, int max_terms) {
    std::vector<Term> terms;
    auto coord = [&]() { return static_cast<std::int64_t>(rng.next() % 5) - 2; };
    int want = 2 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_terms - 1));
    for (int t = 0; t < want; ++t) {
        Exponent e(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) e[static_cast<std::size_t>(i)] = coord();
        Rational c(static_cast<long>(1 + rng.next() % 9), static_cast<long>(1 + rng.next() % 4));
        bool dup = false;
        for (const auto& existing : terms)
            if (existing.exp == e) dup = true;
        if (!dup) terms.push_back({std::move(e), std::move(c)});
    }
    if (terms.empty()) terms.push_back({Exponent(static_cast<std::size_t>(m), 0), Rational(1)});
    return LaurentPolynomial(m, std::move(terms));
}

inline bool close_rel(const Real& a, const Real& b, const Real& rel) {
    if (b == 0) return abs(a) <= rel;
    return abs(a - b) <= rel * abs(b);
}

}  // namespace qptest

#endif  // QPERIOD_TESTS_TEST_UTIL_HPP
