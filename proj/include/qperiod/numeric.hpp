#ifndef QPERIOD_NUMERIC_HPP
#define QPERIOD_NUMERIC_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace qp {

using Integer  = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Variable-precision binary float. Fresh values pick up the thread default
// precision; copies and arithmetic results keep the precision of their
// operands, so setting the default via ScopedPrecision at an entry point is
// enough to run the whole computation at that precision.
using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecisionBits = 256;

// Domain/validation failures (CLI exit code 2).
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A truncation policy that cannot certify its error bound. Still a
// validation-class failure, never silently ignored.
struct uncertified_error : validation_error {
    using validation_error::validation_error;
};

// File/parse problems (CLI exit code 1).
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Smallest decimal-digit count whose mpfr backing store holds at least
// `bits` bits of mantissa.
unsigned digits10_for_bits(unsigned bits);

// Sets the thread-default Real precision for the lifetime of the guard.
class ScopedPrecision {
public:
    explicit ScopedPrecision(unsigned bits);
    ~ScopedPrecision();
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned saved_digits10_;
};

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("exponent coordinate overflow in 64-bit arithmetic");
    return r;
}

// Parses "p/q" or a plain decimal integer. Throws validation_error on
// malformed input or q == 0.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

// Parses a decimal string at `bits` working precision.
Real real_from_decimal(const std::string& text, unsigned bits);

// Conversion at ambient precision.
Real to_real(const Rational& q);
Real to_real(const Integer& n);

// Fixed-width scientific form; identical input yields identical bytes.
std::string format_real(const Real& x, unsigned digits10 = 30);

std::int64_t floor_to_int64(const Real& x);

// Dense real polynomial in one variable, coefficients at working precision.
// Used for concentration-location polynomials f(x) = c_d x^d + ... + c_0.
class RealPolynomial {
public:
    RealPolynomial() = default;
    explicit RealPolynomial(std::vector<Real> coeffs);  // coeffs[k] multiplies x^k

    static RealPolynomial linear(const Real& slope);          // c * x
    static RealPolynomial monomial(const Real& c, int degree);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Real& leading_coefficient() const;
    const std::vector<Real>& coefficients() const { return coeffs_; }
    Real operator()(const Real& x) const;

private:
    std::vector<Real> coeffs_;  // trailing zeros stripped
};

// 64-bit FNV-1a, used for model hashes in report headers.
std::uint64_t fnv1a64(const std::string& bytes);

inline const char* kToolName    = "qperiod";
inline const char* kToolVersion = "0.1.0";

}  // namespace qp

#endif  // QPERIOD_NUMERIC_HPP
