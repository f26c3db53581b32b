#ifndef QPERIOD_HYPERGEOM_HPP
#define QPERIOD_HYPERGEOM_HPP

#include <nlohmann/json_fwd.hpp>

#include "qperiod/concentration.hpp"
#include "qperiod/numeric.hpp"
#include "qperiod/series.hpp"

namespace qp {

// Whitelisted coefficient families for the modifier sequence {a_n}: each
// satisfies a_{n+1}/a_n = 1 + O(1/n) by construction.
struct Modifier {
    enum class Kind { Constant, PowerLaw, RationalPoly };
    Kind kind = Kind::Constant;
    Real gamma;                  // PowerLaw: a_n = (n+1)^(-gamma)
    std::vector<Real> num, den;  // RationalPoly: P(n)/Q(n)

    void validate() const;  // RationalPoly: coefficients >= 0, P(0), Q(0) > 0
    Real eval(std::int64_t n) const;
    std::string describe() const;
};

// Gamma-ratio series sum_{n'} a_{n'} prod Gamma(alpha_r n' + a_r) /
// prod Gamma(beta_s n' + b_s) (T x)^(kappa n'), with
// kappa = sum(beta) - sum(alpha) a positive integer and
// C = prod alpha^alpha * prod beta^(-beta).
class HypergeomSpec {
public:
    HypergeomSpec(std::vector<std::pair<Real, Real>> upper,
                  std::vector<std::pair<Real, Real>> lower, Real t, Modifier modifier,
                  unsigned precision_bits = kDefaultPrecisionBits);

    // {"upper": [[alpha, a], ...], "lower": [[beta, b], ...], "T": "...",
    //  "modifier": {"kind": "constant"|"power"|"rational", ...}}
    // Numeric fields may be decimal strings (parsed at working precision) or
    // plain JSON numbers.
    static HypergeomSpec from_json(const nlohmann::json& j,
                                   unsigned precision_bits = kDefaultPrecisionBits);
    static HypergeomSpec load_file(const std::string& path,
                                   unsigned precision_bits = kDefaultPrecisionBits);

    const std::vector<std::pair<Real, Real>>& upper() const { return upper_; }
    const std::vector<std::pair<Real, Real>>& lower() const { return lower_; }
    const Real& t() const { return t_; }
    const Modifier& modifier() const { return modifier_; }
    int kappa() const { return kappa_; }
    const Real& c_constant() const { return c_; }
    Real peak_coefficient() const;  // kappa C^(1/kappa) T
    unsigned precision_bits() const { return precision_bits_; }

private:
    std::vector<std::pair<Real, Real>> upper_, lower_;
    Real t_;
    Modifier modifier_;
    int kappa_ = 0;
    Real c_;
    unsigned precision_bits_;
};

// The x-free coefficient of x^(kappa n'), T^(kappa n') included; evaluated
// through multiprecision log-Gamma.
Real coefficient(const HypergeomSpec& spec, std::int64_t n_prime,
                 unsigned precision_bits = kDefaultPrecisionBits);

// Coefficient oracle in the x variable: zero unless kappa | n.
CoefficientOracle series_oracle(const HypergeomSpec& spec,
                                unsigned precision_bits = kDefaultPrecisionBits);

struct PeakPrediction {
    int kappa = 0;
    Real c;
    Real peak_coefficient;     // kappa C^(1/kappa) T
    RealPolynomial location;   // n ~ peak_coefficient * x
    std::pair<double, double> window_nu_range{0.0, 0.5};
};
PeakPrediction predict_peak(const HypergeomSpec& spec,
                            unsigned precision_bits = kDefaultPrecisionBits);

// Empirical checks of the modifier-sequence hypotheses: sup n |A_{n+1}/A_n - 1|,
// sup |log A_n| / log n, and the smallest M with
// ((m+1)/(n+1))^-M <= A_m/A_n <= ((m+1)/(n+1))^M over sampled pairs.
struct RegularityReport {
    double ratio_deviation_max_times_n = 0;
    double log_bound_constant = 0;
    double m_estimate = 0;
};
RegularityReport check_sequence_regularity(const Modifier& modifier, int n_max,
                                           std::uint64_t seed = 1,
                                           unsigned precision_bits = kDefaultPrecisionBits);

// Gaussian-domination / geometric-tail conditions for the Gamma kernel
// W_n(x) = (Tx)^(kappa n) / Gamma(kappa n + 1) around N(x) = floor(Tx/kappa):
// the largest ratio W_{N+j+1}/W_{N+j} on j >= floor(D N) (expect < 1), and
// per probed c0 the smallest K with
// W_{N +- i} <= K W_N exp(-c0 i^2 / x) over the checked ranges.
struct KernelConditionRow {
    Real x;
    std::int64_t n_peak = 0;
    double q_max = 0;
    std::vector<std::pair<double, double>> k_for_c0;  // (c0, K)
};
std::vector<KernelConditionRow> check_kernel_conditions(
    const HypergeomSpec& spec, const std::vector<Real>& x_list, double d_fraction,
    const std::vector<double>& c0_list, unsigned precision_bits = kDefaultPrecisionBits);

// Builds the series oracle, sets the predicted location and window
// C = (kappa C^(1/kappa) T)^(-nu), and delegates to concentration::measure.
// Requires nu in (0, 1/2).
ConcentrationReport evaluate_and_measure(const HypergeomSpec& spec, double nu,
                                         const std::vector<Real>& x_grid,
                                         unsigned precision_bits = kDefaultPrecisionBits,
                                         const TruncationPolicy& policy = {});

}  // namespace qp

#endif  // QPERIOD_HYPERGEOM_HPP
