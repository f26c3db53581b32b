#ifndef QPERIOD_LAURENT_HPP
#define QPERIOD_LAURENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qperiod/numeric.hpp"

namespace qp {

// Exponent vector of a Laurent monomial x^e = x_1^{e_1} ... x_m^{e_m}.
// Coordinates are 64-bit with checked addition; degrees up to ~1e18 per
// coordinate, far beyond anything the convolution loop can reach.
using Exponent = std::vector<std::int64_t>;

struct Term {
    Exponent exp;
    Rational coeff;
};

// Exact sparse Laurent polynomial with non-negative rational coefficients.
// Terms are kept sorted lexicographically by exponent with no stored zeros,
// so equal polynomials have identical representations. Immutable after
// construction and safe to share across threads.
class LaurentPolynomial {
public:
    // Validates: consistent arity, coefficients >= 0, no duplicate exponents.
    LaurentPolynomial(int num_vars, std::vector<Term> terms);

    static LaurentPolynomial zero(int num_vars);
    static LaurentPolynomial one(int num_vars);

    int num_vars() const { return num_vars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rational constant_term() const;
    std::vector<Exponent> support() const;

    bool operator==(const LaurentPolynomial& other) const;

    // Canonical one-line form, e.g. "x1 + x1^-1" -- used in hashes and logs.
    std::string to_string() const;

private:
    LaurentPolynomial() = default;
    int num_vars_ = 0;
    std::vector<Term> terms_;

    friend LaurentPolynomial multiply(const LaurentPolynomial&, const LaurentPolynomial&);
};

LaurentPolynomial multiply(const LaurentPolynomial& a, const LaurentPolynomial& b);
LaurentPolynomial power(const LaurentPolynomial& f, unsigned n);

enum class CstMethod {
    Auto,       // closed form when the support is affinely independent, else iterative
    Iterative,  // always the running-power convolution
};

// Constant terms of f^0 .. f^n_max. The iterative method multiplies the
// running power by f so every intermediate constant term falls out of one
// pass. When the support vectors are affinely independent each monomial of
// f^n has a unique composition, so the constant term is a single multinomial
// and the sequence comes out in closed form; Auto takes that path when legal.
std::vector<Rational> cst_sequence(const LaurentPolynomial& f, int n_max,
                                   CstMethod method = CstMethod::Auto);

// Barycentric coordinates of the origin w.r.t. an affinely independent
// support, i.e. the unique lambda with sum(lambda) = 1, sum(lambda_i v_i) = 0.
// nullopt when the support is affinely dependent or the system is
// inconsistent (then Cst(f^n) = 0 for all n >= 1).
std::optional<std::vector<Rational>> origin_barycentric(const LaurentPolynomial& f);

struct NewtonPolytopeInfo {
    std::vector<Exponent> vertices;    // extreme points of conv(support), sorted
    bool contains_origin_interior = false;
    int support_lattice_rank = 0;      // rank of the sublattice generated by the support
};

// Exact rational arithmetic throughout: the interior test is an LP
// feasibility problem, the rank an exact row reduction. Throws on the zero
// polynomial.
NewtonPolytopeInfo newton_info(const LaurentPolynomial& f);

// f is convenient when it is non-zero and its Newton polytope contains the
// origin in its interior (which forces full lattice rank).
bool is_convenient(const LaurentPolynomial& f);

inline constexpr int kDefaultIndexHorizon = 60;

// The index r: gcd of all n >= 1 with cst[n] != 0, cross-checked against
// divisibility over the whole horizon. The gcd detection is empirical; the
// horizon is the caller's evidence window.
int detect_index(const std::vector<Rational>& cst);
int detect_index(const LaurentPolynomial& f, int horizon = kDefaultIndexHorizon);

// Model file format:
//   {"num_vars": m, "terms": [{"exp": [e1,...,em], "coeff": "p/q"}, ...]}
// coeff is a decimal-integer or slash-separated rational string, >= 0.
// Duplicate exponent vectors are rejected.
LaurentPolynomial model_from_json(const nlohmann::json& j);
LaurentPolynomial load_model_file(const std::string& path);
nlohmann::json model_to_json(const LaurentPolynomial& f);
std::uint64_t model_hash(const LaurentPolynomial& f);

}  // namespace qp

#endif  // QPERIOD_LAURENT_HPP
