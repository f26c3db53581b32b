#include "qperiod/laurent.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "qperiod/exact_lp.hpp"

namespace qp {

namespace {

struct ExponentHash {
    std::size_t operator()(const Exponent& e) const {
        std::uint64_t h = 14695981039346656037ull;
        for (std::int64_t v : e) {
            auto u = static_cast<std::uint64_t>(v);
            for (int i = 0; i < 8; ++i) {
                h ^= (u >> (8 * i)) & 0xffu;
                h *= 1099511628211ull;
            }
        }
        return static_cast<std::size_t>(h);
    }
};

Rational rational_pow(Rational base, std::uint64_t e) {
    Rational acc(1);
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

// Rank of a k x m rational matrix by Gaussian elimination.
int rational_rank(std::vector<std::vector<Rational>> m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = row;
        while (piv < rows && m[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[row]);
        for (std::size_t r = row + 1; r < rows; ++r) {
            if (m[r][col] == 0) continue;
            Rational f = m[r][col] / m[row][col];
            for (std::size_t c2 = col; c2 < cols; ++c2) m[r][c2] -= f * m[row][c2];
        }
        ++row;
        ++rank;
    }
    return rank;
}

}  // namespace

LaurentPolynomial::LaurentPolynomial(int num_vars, std::vector<Term> terms) {
    if (num_vars <= 0) throw validation_error("num_vars must be positive");
    num_vars_ = num_vars;
    for (auto& t : terms) {
        if (static_cast<int>(t.exp.size()) != num_vars)
            throw validation_error("exponent arity does not match num_vars");
        if (t.coeff < 0)
            throw validation_error("negative coefficient: model coefficients must be >= 0");
    }
    std::erase_if(terms, [](const Term& t) { return t.coeff == 0; });
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.exp < b.exp; });
    for (std::size_t i = 1; i < terms.size(); ++i)
        if (terms[i].exp == terms[i - 1].exp)
            throw validation_error("duplicate exponent vector in term list");
    terms_ = std::move(terms);
}

LaurentPolynomial LaurentPolynomial::zero(int num_vars) {
    return LaurentPolynomial(num_vars, {});
}

LaurentPolynomial LaurentPolynomial::one(int num_vars) {
    return LaurentPolynomial(num_vars, {{Exponent(num_vars, 0), Rational(1)}});
}

Rational LaurentPolynomial::constant_term() const {
    Exponent zero(num_vars_, 0);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), zero,
                               [](const Term& t, const Exponent& e) { return t.exp < e; });
    if (it != terms_.end() && it->exp == zero) return it->coeff;
    return Rational(0);
}

std::vector<Exponent> LaurentPolynomial::support() const {
    std::vector<Exponent> s;
    s.reserve(terms_.size());
    for (const auto& t : terms_) s.push_back(t.exp);
    return s;
}

bool LaurentPolynomial::operator==(const LaurentPolynomial& other) const {
    if (num_vars_ != other.num_vars_ || terms_.size() != other.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].exp != other.terms_[i].exp || terms_[i].coeff != other.terms_[i].coeff)
            return false;
    return true;
}

std::string LaurentPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        bool monomial = std::any_of(t.exp.begin(), t.exp.end(),
                                    [](std::int64_t e) { return e != 0; });
        if (t.coeff != 1 || !monomial) os << format_rational(t.coeff);
        bool need_star = t.coeff != 1 || !monomial;
        for (int i = 0; i < num_vars_; ++i) {
            if (t.exp[i] == 0) continue;
            if (need_star) os << "*";
            need_star = true;
            os << "x" << (i + 1);
            if (t.exp[i] != 1) os << "^" << t.exp[i];
        }
    }
    return os.str();
}

LaurentPolynomial multiply(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    if (a.num_vars() != b.num_vars())
        throw validation_error("dimension mismatch: operands have different num_vars");
    std::unordered_map<Exponent, Rational, ExponentHash> acc;
    acc.reserve(a.terms().size() * 2 + b.terms().size());
    Exponent e(a.num_vars());
    for (const auto& ta : a.terms()) {
        for (const auto& tb : b.terms()) {
            for (int i = 0; i < a.num_vars(); ++i) e[i] = checked_add(ta.exp[i], tb.exp[i]);
            acc[e] += ta.coeff * tb.coeff;
        }
    }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [exp, coeff] : acc)
        if (coeff != 0) terms.push_back({exp, std::move(coeff)});
    LaurentPolynomial out;
    out.num_vars_ = a.num_vars();
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return x.exp < y.exp; });
    out.terms_ = std::move(terms);
    return out;
}

LaurentPolynomial power(const LaurentPolynomial& f, unsigned n) {
    LaurentPolynomial acc = LaurentPolynomial::one(f.num_vars());
    if (n == 0) return acc;
    LaurentPolynomial base = f;
    while (true) {
        if (n & 1) acc = multiply(acc, base);
        n >>= 1;
        if (!n) break;
        base = multiply(base, base);
    }
    return acc;
}

std::optional<std::vector<Rational>> origin_barycentric(const LaurentPolynomial& f) {
    const auto supp = f.support();
    const std::size_t k = supp.size();
    const int m = f.num_vars();
    if (k == 0 || k > static_cast<std::size_t>(m) + 1) return std::nullopt;

    // Augmented system [v_1 .. v_k ; 1 .. 1 | (0,..,0,1)^T].
    std::vector<std::vector<Rational>> aug(m + 1, std::vector<Rational>(k + 1, Rational(0)));
    for (std::size_t j = 0; j < k; ++j) {
        for (int i = 0; i < m; ++i) aug[i][j] = Rational(supp[j][i]);
        aug[m][j] = 1;
    }
    aug[m][k] = 1;

    std::size_t row = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < k && row < aug.size(); ++col) {
        std::size_t piv = row;
        while (piv < aug.size() && aug[piv][col] == 0) ++piv;
        if (piv == aug.size()) return std::nullopt;  // affinely dependent support
        std::swap(aug[piv], aug[row]);
        for (std::size_t r = 0; r < aug.size(); ++r) {
            if (r == row || aug[r][col] == 0) continue;
            Rational fct = aug[r][col] / aug[row][col];
            for (std::size_t c2 = col; c2 <= k; ++c2) aug[r][c2] -= fct * aug[row][c2];
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (std::size_t r = row; r < aug.size(); ++r)
        if (aug[r][k] != 0) return std::nullopt;  // origin outside the affine hull

    std::vector<Rational> lambda(k, Rational(0));
    for (std::size_t r = 0; r < row; ++r)
        lambda[pivot_col[r]] = aug[r][k] / aug[r][pivot_col[r]];
    return lambda;
}

namespace {

// Groups of terms over pairwise disjoint coordinate sets. A term with zero
// exponent touches no coordinate and forms its own group.
std::vector<std::vector<std::size_t>> independent_term_blocks(const LaurentPolynomial& f) {
    const auto& terms = f.terms();
    const int m = f.num_vars();
    std::vector<int> parent(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) parent[static_cast<std::size_t>(i)] = i;
    std::function<int(int)> find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    };
    auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };
    for (const auto& t : terms) {
        int first = -1;
        for (int i = 0; i < m; ++i) {
            if (t.exp[static_cast<std::size_t>(i)] == 0) continue;
            if (first < 0)
                first = i;
            else
                unite(first, i);
        }
    }
    std::map<int, std::vector<std::size_t>> groups;
    int constant_key = m;  // zero-exponent terms go after the coordinate roots
    for (std::size_t ti = 0; ti < terms.size(); ++ti) {
        int first = -1;
        for (int i = 0; i < m; ++i)
            if (terms[ti].exp[static_cast<std::size_t>(i)] != 0) { first = i; break; }
        groups[first < 0 ? constant_key++ : find(first)].push_back(ti);
    }
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, idxs] : groups) out.push_back(std::move(idxs));
    return out;
}

// h_n = sum_k C(n,k) a_k b_{n-k}: the constant-term sequence of a sum of
// polynomials in disjoint variables.
std::vector<Rational> binomial_convolve(const std::vector<Rational>& a,
                                        const std::vector<Rational>& b) {
    const int n_max = static_cast<int>(a.size()) - 1;
    std::vector<Rational> out(a.size(), Rational(0));
    for (int n = 0; n <= n_max; ++n) {
        Integer binom = 1;
        Rational acc(0);
        for (int k = 0; k <= n; ++k) {
            if (k > 0) {
                binom *= (n - k + 1);
                binom /= k;
            }
            if (a[static_cast<std::size_t>(k)] != 0 &&
                b[static_cast<std::size_t>(n - k)] != 0)
                acc += Rational(binom) * a[static_cast<std::size_t>(k)] *
                       b[static_cast<std::size_t>(n - k)];
        }
        out[static_cast<std::size_t>(n)] = std::move(acc);
    }
    return out;
}

std::vector<Rational> cst_sequence_closed_form(const LaurentPolynomial& f, int n_max,
                                               const std::vector<Rational>& lambda) {
    std::vector<Integer> fact(static_cast<std::size_t>(n_max) + 1);
    fact[0] = 1;
    for (int i = 1; i <= n_max; ++i) fact[i] = fact[i - 1] * i;

    const auto& terms = f.terms();
    std::vector<Rational> out(static_cast<std::size_t>(n_max) + 1, Rational(0));
    out[0] = 1;
    for (int n = 1; n <= n_max; ++n) {
        std::vector<std::uint64_t> comp(terms.size());
        bool ok = true;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            Rational a = lambda[i] * n;
            if (a < 0 || denominator(a) != 1) { ok = false; break; }
            comp[i] = numerator(a).convert_to<std::uint64_t>();
        }
        if (!ok) continue;
        Integer multinom = fact[n];
        Rational value(1);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            multinom /= fact[comp[i]];
            value *= rational_pow(terms[i].coeff, comp[i]);
        }
        out[n] = value * Rational(multinom);
    }
    return out;
}

}  // namespace

std::vector<Rational> cst_sequence(const LaurentPolynomial& f, int n_max, CstMethod method) {
    if (n_max < 0) throw validation_error("n_max must be >= 0");
    if (method == CstMethod::Auto) {
        if (auto lambda = origin_barycentric(f))
            return cst_sequence_closed_form(f, n_max, *lambda);
        // A support split across disjoint coordinate sets turns the power
        // into a binomial convolution of the blocks.
        auto blocks = independent_term_blocks(f);
        if (blocks.size() >= 2) {
            std::vector<Rational> acc;
            for (const auto& idxs : blocks) {
                std::vector<Term> sub;
                for (std::size_t ti : idxs) sub.push_back(f.terms()[ti]);
                LaurentPolynomial part(f.num_vars(), std::move(sub));
                auto cst = cst_sequence(part, n_max, CstMethod::Auto);
                acc = acc.empty() ? std::move(cst) : binomial_convolve(acc, cst);
            }
            return acc;
        }
    }
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    out.push_back(Rational(1));
    LaurentPolynomial p = LaurentPolynomial::one(f.num_vars());
    for (int n = 1; n <= n_max; ++n) {
        p = multiply(p, f);
        out.push_back(p.constant_term());
    }
    return out;
}

NewtonPolytopeInfo newton_info(const LaurentPolynomial& f) {
    if (f.is_zero()) throw validation_error("newton_info: zero polynomial");
    const auto supp = f.support();
    const std::size_t k = supp.size();
    const int m = f.num_vars();

    NewtonPolytopeInfo info;

    {
        std::vector<std::vector<Rational>> mat(k, std::vector<Rational>(m));
        for (std::size_t i = 0; i < k; ++i)
            for (int j = 0; j < m; ++j) mat[i][j] = Rational(supp[i][j]);
        info.support_lattice_rank = rational_rank(std::move(mat));
    }

    // Interior test: the origin lies in the interior of conv(supp) iff the
    // support spans R^m and the origin has a strictly positive convex
    // representation. Positivity is decided by max t s.t.
    //   sum(l) = 1, sum(l_j v_j) = 0, l_j - t - s_j = 0, l,t,s >= 0.
    {
        const std::size_t nvars = 2 * k + 1;  // l_1..l_k, t, s_1..s_k
        const std::size_t nrows = static_cast<std::size_t>(m) + 1 + k;
        std::vector<std::vector<Rational>> a(nrows, std::vector<Rational>(nvars, Rational(0)));
        std::vector<Rational> b(nrows, Rational(0));
        std::vector<Rational> c(nvars, Rational(0));
        for (std::size_t j = 0; j < k; ++j) a[0][j] = 1;
        b[0] = 1;
        for (int i = 0; i < m; ++i)
            for (std::size_t j = 0; j < k; ++j) a[1 + i][j] = Rational(supp[j][i]);
        for (std::size_t j = 0; j < k; ++j) {
            a[1 + m + j][j] = 1;
            a[1 + m + j][k] = -1;
            a[1 + m + j][k + 1 + j] = -1;
        }
        c[k] = 1;
        auto res = lp::maximize_equality_form(a, b, c);
        info.contains_origin_interior = info.support_lattice_rank == m &&
                                        res.status == lp::Status::Optimal &&
                                        res.objective > 0;
    }

    // v is a vertex iff it is not a convex combination of the other points.
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < k; ++i)
            if (i != j) others.push_back(i);
        std::vector<std::vector<Rational>> a(static_cast<std::size_t>(m) + 1,
                                             std::vector<Rational>(others.size(), Rational(0)));
        std::vector<Rational> b(static_cast<std::size_t>(m) + 1, Rational(0));
        for (std::size_t idx = 0; idx < others.size(); ++idx) {
            for (int i = 0; i < m; ++i) a[i][idx] = Rational(supp[others[idx]][i]);
            a[m][idx] = 1;
        }
        for (int i = 0; i < m; ++i) b[i] = Rational(supp[j][i]);
        b[m] = 1;
        if (!lp::is_feasible(a, b)) info.vertices.push_back(supp[j]);
    }
    std::sort(info.vertices.begin(), info.vertices.end());
    return info;
}

bool is_convenient(const LaurentPolynomial& f) {
    if (f.is_zero()) return false;
    return newton_info(f).contains_origin_interior;
}

int detect_index(const std::vector<Rational>& cst) {
    int g = 0;
    for (std::size_t n = 1; n < cst.size(); ++n)
        if (cst[n] != 0) g = std::gcd(g, static_cast<int>(n));
    if (g == 0)
        throw validation_error("index undetectable at this horizon: no nonzero Cst(f^n) with n >= 1");
    for (std::size_t n = 1; n < cst.size(); ++n)
        if (n % static_cast<std::size_t>(g) != 0 && cst[n] != 0)
            throw std::logic_error("index cross-check violation: nonzero Cst at n not divisible by r");
    return g;
}

int detect_index(const LaurentPolynomial& f, int horizon) {
    return detect_index(cst_sequence(f, horizon));
}

LaurentPolynomial model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw io_error("model: top level must be an object");
    if (!j.contains("num_vars") || !j["num_vars"].is_number_integer())
        throw io_error("model: field \"num_vars\" missing or not an integer");
    int m = j["num_vars"].get<int>();
    if (m <= 0) throw validation_error("model: num_vars must be positive");
    if (!j.contains("terms") || !j["terms"].is_array())
        throw io_error("model: field \"terms\" missing or not an array");

    std::vector<Term> terms;
    std::size_t idx = 0;
    for (const auto& jt : j["terms"]) {
        const std::string where = "terms[" + std::to_string(idx++) + "]";
        if (!jt.is_object()) throw io_error("model: " + where + " must be an object");
        if (!jt.contains("exp") || !jt["exp"].is_array())
            throw io_error("model: " + where + ".exp missing or not an array");
        if (jt["exp"].size() != static_cast<std::size_t>(m))
            throw io_error("model: " + where + ".exp must have num_vars entries");
        Exponent e;
        for (const auto& je : jt["exp"]) {
            if (!je.is_number_integer())
                throw io_error("model: " + where + ".exp entries must be integers");
            e.push_back(je.get<std::int64_t>());
        }
        if (!jt.contains("coeff"))
            throw io_error("model: " + where + ".coeff missing");
        Rational c;
        if (jt["coeff"].is_string())
            c = parse_rational(jt["coeff"].get<std::string>());
        else if (jt["coeff"].is_number_integer())
            c = Rational(jt["coeff"].get<std::int64_t>());
        else
            throw io_error("model: " + where + ".coeff must be a rational string");
        terms.push_back({std::move(e), std::move(c)});
    }
    return LaurentPolynomial(m, std::move(terms));
}

LaurentPolynomial load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw io_error("model: invalid JSON in " + path + ": " + e.what());
    }
    return model_from_json(j);
}

nlohmann::json model_to_json(const LaurentPolynomial& f) {
    nlohmann::json j;
    j["num_vars"] = f.num_vars();
    j["terms"] = nlohmann::json::array();
    for (const auto& t : f.terms()) {
        nlohmann::json jt;
        jt["exp"] = t.exp;
        jt["coeff"] = format_rational(t.coeff);
        j["terms"].push_back(jt);
    }
    return j;
}

std::uint64_t model_hash(const LaurentPolynomial& f) {
    return fnv1a64(std::to_string(f.num_vars()) + "|" + f.to_string());
}

}  // namespace qp
