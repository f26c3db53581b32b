#ifndef QPERIOD_SERIES_HPP
#define QPERIOD_SERIES_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qperiod/laurent.hpp"
#include "qperiod/numeric.hpp"

namespace qp {

// Quantum period data: G_n = Cst(f^n) / n!, all exact.
struct PeriodSequence {
    std::vector<Rational> g;            // G_n, n = 0..n_max
    std::vector<Rational> regularized;  // n! G_n = Cst(f^n)
    int index_r = 1;
    int n_max = 0;
    std::string source_model;
};

PeriodSequence quantum_period(const LaurentPolynomial& f, int n_max,
                              CstMethod method = CstMethod::Auto,
                              const std::string& source = "");

// Estimate of T = limsup (n! G_n)^{1/n}, the inverse radius of convergence
// of the regularized series. Two routes: the root-test sequence
// (Cst(f^n))^{1/n} extrapolated against {1, 1/n, log n / n}, and the
// stride-ratio sequence (Cst(f^n)/Cst(f^{n-r}))^{1/r} extrapolated against
// {1, 1/n}. The ratio route converges faster and is the primary value when
// available; the gap between the two is the convergence diagnostic.
struct TaConEstimate {
    Real value;
    Real root_estimate;
    Real ratio_estimate;
    double agreement_gap = 0;  // |root - ratio| / value
    bool near_zero_warning = false;
};

TaConEstimate estimate_t_a_con(const PeriodSequence& seq,
                               unsigned precision_bits = kDefaultPrecisionBits);

// Coefficient oracle: n -> a_n >= 0 at the ambient working precision.
using CoefficientOracle = std::function<Real(std::int64_t)>;

// Lazily cached oracle for G_n of a model; extends its exact Cst cache on
// demand. Not thread-safe; evaluate() and measure() drive it sequentially.
class PeriodOracle {
public:
    PeriodOracle(const LaurentPolynomial& f, unsigned precision_bits,
                 CstMethod method = CstMethod::Auto);
    Real operator()(std::int64_t n) const;
    CoefficientOracle as_oracle() const;

private:
    struct State;
    std::shared_ptr<State> state_;
};

// Summation stops once (a) the running argmax is passed, (b) the last
// nonzero term dropped below 2^-(prec+guard_bits) of the running total, and
// (c) the last `ratio_window` nonzero-term ratios are all below 1/2; the
// omitted tail is then bounded by the geometric series with the worst
// observed window ratio. The certificate presumes the decay hypothesis all
// series in scope satisfy: nonzero-term ratios stay below the observed
// bound once the window qualifies, and support gaps never exceed
// max_zero_run. Failure to qualify within max_terms raises
// uncertified_error, never a silent truncation.
struct TruncationPolicy {
    unsigned guard_bits = 64;
    int ratio_window = 8;
    std::int64_t max_terms = 1000000;
    std::int64_t max_zero_run = 512;
};

class SeriesEvaluation {
public:
    Real x;
    Real total;             // sum over computed terms; true total within truncation_bound
    Real truncation_bound;  // certified bound on the omitted tail
    Real peak_value;        // mu(x) = max_n a_n x^n
    std::int64_t peak_index = 0;  // argmax; ties resolve to the larger index
    std::int64_t terms_summed = 0;

    // Prefix queries never re-sum. head_mass(n) = sum_{k <= n} a_k x^k,
    // tail_mass(n) = sum_{k >= n} (upper estimate including the certified
    // truncation bound).
    Real head_mass(std::int64_t n_bar) const;
    Real tail_mass(std::int64_t n_bar) const;

    std::vector<Real> prefix;  // prefix[n] = head_mass(n)
};

SeriesEvaluation evaluate(const CoefficientOracle& oracle, const Real& x,
                          unsigned precision_bits = kDefaultPrecisionBits,
                          const TruncationPolicy& policy = {});

// Whitelisted subpolynomial weights b_n. Arbitrary callbacks are not
// accepted for hypothesis-bearing inputs; these families satisfy
// b_n / n^p -> 0 for every p > 0 by construction.
struct WeightSequence {
    enum class Kind { Ones, LogPow, Constant };
    Kind kind = Kind::Ones;
    int power = 1;         // LogPow: (log(n + 2))^power
    double constant = 1.0;  // Constant
    Real eval(std::int64_t n) const;
    std::string describe() const;
};

// Whitelisted slowly varying functions g with y g'(y) = o(y^p) for all p:
// constants, (log y)^k, log log y.
struct SlowlyVaryingFn {
    enum class Kind { Constant, LogPow, LogLog };
    Kind kind = Kind::LogPow;
    int power = 1;
    double constant = 1.0;
    Real eval(const Real& y) const;
    std::int64_t min_index() const;  // smallest n with a well-defined, >= 0 value
    std::string describe() const;
};

// Per-x discrepancy |sum a_n b_n g(n) x^n - g(f(x)) sum a_n b_n x^n| / I(x)
// with both sums over n >= g.min_index().
struct SubstitutionRow {
    Real x;
    Real discrepancy;
};
struct SubstitutionCheck {
    std::vector<SubstitutionRow> rows;
    bool decreasing = false;  // strictly decreasing across the grid
};

SubstitutionCheck substitution_check(const CoefficientOracle& oracle,
                                     const WeightSequence& weight,
                                     const SlowlyVaryingFn& g,
                                     const RealPolynomial& location,
                                     const std::vector<Real>& x_grid,
                                     unsigned precision_bits = kDefaultPrecisionBits,
                                     const TruncationPolicy& policy = {});

}  // namespace qp

#endif  // QPERIOD_SERIES_HPP
