#include "qperiod/numeric.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace qp {

unsigned digits10_for_bits(unsigned bits) {
    // The mpfr backend maps digits10 -> bits with ceil(d * 1000 / 301) + 1,
    // so d = ceil(bits * 0.302) always lands at or above the request.
    return static_cast<unsigned>((static_cast<std::uint64_t>(bits) * 302 + 999) / 1000) + 1;
}

ScopedPrecision::ScopedPrecision(unsigned bits)
    : saved_digits10_(Real::default_precision()) {
    if (bits < 24) throw validation_error("precision below 24 bits is not supported");
    Real::default_precision(digits10_for_bits(bits));
}

ScopedPrecision::~ScopedPrecision() {
    Real::default_precision(saved_digits10_);
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw validation_error("empty rational literal");
    for (char c : text) {
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' && c != '-' && c != '+')
            throw validation_error("malformed rational literal: \"" + text + "\"");
    }
    auto slash = text.find('/');
    if (slash != std::string::npos && text.find('/', slash + 1) != std::string::npos)
        throw validation_error("malformed rational literal: \"" + text + "\"");
    try {
        Rational q(text);
        return q;
    } catch (const std::exception&) {
        throw validation_error("malformed rational literal: \"" + text + "\"");
    }
}

std::string format_rational(const Rational& q) {
    return q.str();
}

Real real_from_decimal(const std::string& text, unsigned bits) {
    ScopedPrecision guard(bits);
    try {
        return Real(text);
    } catch (const std::exception&) {
        throw validation_error("malformed decimal literal: \"" + text + "\"");
    }
}

Real to_real(const Rational& q) {
    return Real(q);
}

Real to_real(const Integer& n) {
    return Real(n);
}

std::string format_real(const Real& x, unsigned digits10) {
    return x.str(digits10, std::ios_base::scientific);
}

std::int64_t floor_to_int64(const Real& x) {
    Real f = floor(x);
    return f.convert_to<std::int64_t>();
}

RealPolynomial::RealPolynomial(std::vector<Real> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

RealPolynomial RealPolynomial::linear(const Real& slope) {
    return RealPolynomial({Real(0), slope});
}

RealPolynomial RealPolynomial::monomial(const Real& c, int deg) {
    std::vector<Real> v(static_cast<std::size_t>(deg) + 1, Real(0));
    v.back() = c;
    return RealPolynomial(std::move(v));
}

const Real& RealPolynomial::leading_coefficient() const {
    if (coeffs_.empty()) throw validation_error("zero polynomial has no leading coefficient");
    return coeffs_.back();
}

Real RealPolynomial::operator()(const Real& x) const {
    Real acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace qp
