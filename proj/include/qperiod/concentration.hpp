#ifndef QPERIOD_CONCENTRATION_HPP
#define QPERIOD_CONCENTRATION_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qperiod/numeric.hpp"
#include "qperiod/series.hpp"

namespace qp {

// Measurement window around n ~ f(x): n_pm(x) = floor(f(x) (1 +- C x^-nu)).
struct ConcentrationConfig {
    RealPolynomial location;  // f, positive leading coefficient, degree >= 1
    Real window_c;
    Real window_nu;
    std::optional<double> claimed_alpha;
    std::optional<double> claimed_beta;

    void validate() const;  // throws validation_error; nu > deg f is warning-level
};

struct ConcentrationRow {
    Real x;
    std::int64_t n_minus = 0;
    std::int64_t n_plus = 0;
    std::int64_t peak_index = 0;
    Real head_ratio;  // (1/I) sum_{n <= n_-} a_n x^n, upper estimate, clamped to [0,1]
    Real tail_ratio;  // (1/I) sum_{n >= n_+} a_n x^n
    Real total;
};

// Fit of -log ratio = alpha x^beta on the qualifying grid points
// (ratio < 1e-2; log(-log r) is unstable near r ~ 1).
struct TailFit {
    double alpha = 0;
    double beta = 0;
    double max_residual = 0;  // in log(-log) space
    int points_used = 0;
};

// Verdicts are trend classifications over a finite grid, never theorem
// certificates.
enum class Verdict {
    ConsistentWithExponential,
    ConsistentWithSuperpolynomialOnly,
    Inconsistent,
    Inconclusive,
};
std::string verdict_name(Verdict v);

struct ConcentrationReport {
    std::vector<ConcentrationRow> rows;
    TailFit head_fit, tail_fit;
    Verdict verdict = Verdict::Inconclusive;
    std::optional<Real> peak_onset_x;  // first grid x from which the peak stays inside the window
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
    std::string to_csv() const;  // x, n_minus, n_plus, head_ratio, tail_ratio + fit footer
};

// Head/tail mass ratios over the grid with certified series evaluation,
// fitted (alpha, beta) per side, and the trend verdict. Throws when the
// window swallows the whole series at every grid point (degenerate), and on
// uncertified evaluations.
ConcentrationReport measure(const CoefficientOracle& oracle, const ConcentrationConfig& config,
                            const std::vector<Real>& x_grid,
                            unsigned precision_bits = kDefaultPrecisionBits,
                            const TruncationPolicy& policy = {});

// Window changes are inherited only toward larger C and smaller nu; the
// reverse direction is flagged not-implied.
struct WindowTransform {
    ConcentrationConfig config;
    bool inherited = false;
};
WindowTransform window_transform(const ConcentrationConfig& config, const Real& new_c,
                                 const Real& new_nu);

// Concentration location is invariant exactly under equal degree and equal
// leading coefficient.
bool location_equivalence(const RealPolynomial& f, const RealPolynomial& g);

// Growth diagnostics: log mu(x)/x^d and log I(x)/x^d against the c_d/d
// limit, and the root-Gamma sequence (a_n Gamma(n/d+1))^(1/n) against
// (c_d/d)^(1/d).
struct GrowthDiagnostics {
    struct Row {
        Real x;
        Real log_peak_over_xd;   // log mu(x) / x^d
        Real log_total_over_xd;  // log I(x) / x^d
    };
    std::vector<Row> rows;
    double log_total_extrapolated = 0;
    double target_cd_over_d = 0;

    std::vector<std::pair<std::int64_t, Real>> root_gamma;  // nonzero indices only
    double root_gamma_tail_max = 0;      // sup over the upper half of the range
    double root_gamma_extrapolated = 0;  // intercept of the {1, 1/n, log n/n} fit
    double root_gamma_target = 0;        // (c_d/d)^(1/d)
};

GrowthDiagnostics growth_diagnostics(const CoefficientOracle& oracle,
                                     const ConcentrationConfig& config,
                                     const std::vector<Real>& x_grid,
                                     std::int64_t n_root_max,
                                     unsigned precision_bits = kDefaultPrecisionBits,
                                     const TruncationPolicy& policy = {});

// Weighted head/tail ratios scaled by x^p: superpolynomial decay shows as a
// decreasing trend for every probed p.
struct WeightedTailTable {
    struct Row {
        Real x;
        Real weighted_head_ratio;
        Real weighted_tail_ratio;
    };
    std::vector<Row> rows;
    std::vector<double> p_list;
    std::vector<bool> head_decreasing;  // per p, over the latter half of the grid
    std::vector<bool> tail_decreasing;
};

WeightedTailTable weighted_tail_check(const CoefficientOracle& oracle,
                                      const WeightSequence& weight,
                                      const ConcentrationConfig& config,
                                      const std::vector<Real>& x_grid,
                                      const std::vector<double>& p_list,
                                      unsigned precision_bits = kDefaultPrecisionBits,
                                      const TruncationPolicy& policy = {});

}  // namespace qp

#endif  // QPERIOD_CONCENTRATION_HPP
