#include "qperiod/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qperiod/linalg.hpp"

namespace qp {

namespace {

constexpr double kQualifyingRatio = 1e-2;   // points usable for the beta fit
constexpr double kExpFitResidualMax = 0.35;  // in log(-log) space

Real clamp01(const Real& v) {
    if (v < 0) return Real(0);
    if (v > 1) return Real(1);
    return v;
}

// Strictly decreasing over the latter half of the sequence; the early grid
// sits before the asymptotic regime for large p.
bool decreasing_tail_trend(const std::vector<Real>& v) {
    if (v.size() < 2) return false;
    std::size_t from = v.size() >= 4 ? v.size() / 2 : 0;
    for (std::size_t i = from + 1; i < v.size(); ++i)
        if (v[i] >= v[i - 1]) return false;
    return true;
}

TailFit fit_exponential_side(const std::vector<Real>& xs, const std::vector<Real>& ratios) {
    TailFit fit;
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ratios[i].convert_to<double>();
        if (r <= 0 || r >= kQualifyingRatio) continue;
        double neg_log = -std::log(r);
        rows.push_back({1.0, std::log(xs[i].convert_to<double>())});
        y.push_back(std::log(neg_log));
    }
    fit.points_used = static_cast<int>(rows.size());
    if (fit.points_used >= 2) {
        LinearFit lf = least_squares(rows, y);
        fit.alpha = std::exp(lf.coef[0]);
        fit.beta = lf.coef[1];
        fit.max_residual = lf.max_abs_residual;
    } else {
        fit.alpha = std::numeric_limits<double>::quiet_NaN();
        fit.beta = std::numeric_limits<double>::quiet_NaN();
        fit.max_residual = std::numeric_limits<double>::quiet_NaN();
    }
    return fit;
}

bool exponential_consistent(const TailFit& fit, const std::vector<Real>& ratios) {
    if (fit.points_used < 4) return false;
    if (!(fit.beta > 0) || !(fit.alpha > 0)) return false;
    if (!(fit.max_residual <= kExpFitResidualMax)) return false;
    // -log ratio must grow along the qualifying part of the grid.
    Real prev = -1;
    for (const Real& r : ratios) {
        if (r <= 0 || r >= Real(kQualifyingRatio)) continue;
        if (prev >= 0 && r >= prev) return false;
        prev = r;
    }
    return true;
}

bool superpolynomial_trend(const std::vector<Real>& xs, const std::vector<Real>& ratios,
                           const std::vector<double>& p_list) {
    for (double p : p_list) {
        std::vector<Real> scaled;
        scaled.reserve(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            scaled.push_back(ratios[i] * pow(xs[i], Real(p)));
        if (!decreasing_tail_trend(scaled)) return false;
    }
    return true;
}

}  // namespace

void ConcentrationConfig::validate() const {
    if (location.degree() < 1)
        throw validation_error("concentration: location polynomial must have degree >= 1");
    if (location.leading_coefficient() <= 0)
        throw validation_error("concentration: location polynomial needs a positive "
                               "leading coefficient");
    if (window_c <= 0 || window_nu <= 0)
        throw validation_error("concentration: window parameters must be positive");
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::ConsistentWithExponential: return "consistent-with-exponential";
        case Verdict::ConsistentWithSuperpolynomialOnly:
            return "consistent-with-superpolynomial-only";
        case Verdict::Inconsistent: return "inconsistent";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

ConcentrationReport measure(const CoefficientOracle& oracle, const ConcentrationConfig& config,
                            const std::vector<Real>& x_grid, unsigned precision_bits,
                            const TruncationPolicy& policy) {
    ScopedPrecision prec(precision_bits);
    config.validate();
    if (x_grid.size() < 2)
        throw validation_error("concentration: grid needs at least 2 increasing points");
    for (std::size_t i = 1; i < x_grid.size(); ++i)
        if (x_grid[i] <= x_grid[i - 1])
            throw validation_error("concentration: grid must be strictly increasing");

    ConcentrationReport report;
    if (Real(config.window_nu) > Real(config.location.degree()))
        report.warnings.push_back("window_nu exceeds deg f; superpolynomial concentration "
                                  "cannot hold in this window");

    bool any_mass_outside = false;
    for (const Real& x : x_grid) {
        SeriesEvaluation ev = evaluate(oracle, x, precision_bits, policy);
        Real fx = config.location(x);
        Real width = config.window_c * pow(x, -config.window_nu);
        ConcentrationRow row;
        row.x = x;
        row.n_minus = floor_to_int64(fx * (1 - width));
        row.n_plus = floor_to_int64(fx * (1 + width));
        row.peak_index = ev.peak_index;
        row.total = ev.total;
        Real tail = ev.tail_mass(row.n_plus);
        row.head_ratio = clamp01(ev.head_mass(row.n_minus) / ev.total);
        row.tail_ratio = clamp01(tail / ev.total);
        // Mass is "outside" only when it exceeds what the truncation
        // certificate alone could account for.
        if (row.head_ratio > 0 || tail > 2 * ev.truncation_bound) any_mass_outside = true;
        report.rows.push_back(std::move(row));
    }
    if (!any_mass_outside)
        throw validation_error("concentration: window swallows the entire series at every "
                               "grid point (degenerate window)");

    std::vector<Real> xs, heads, tails;
    for (const auto& row : report.rows) {
        xs.push_back(row.x);
        heads.push_back(row.head_ratio);
        tails.push_back(row.tail_ratio);
    }
    report.head_fit = fit_exponential_side(xs, heads);
    report.tail_fit = fit_exponential_side(xs, tails);

    for (std::size_t i = report.rows.size(); i-- > 0;) {
        const auto& row = report.rows[i];
        if (row.peak_index > row.n_minus && row.peak_index < row.n_plus)
            report.peak_onset_x = row.x;
        else
            break;
    }

    const std::vector<double> p_probe{1, 2, 4, 8};
    bool exp_ok = exponential_consistent(report.head_fit, heads) &&
                  exponential_consistent(report.tail_fit, tails);
    bool super_ok = superpolynomial_trend(xs, heads, p_probe) &&
                    superpolynomial_trend(xs, tails, p_probe);
    bool shrinking = heads.back() < Real(0.1) && tails.back() < Real(0.1) &&
                     heads.back() <= heads.front() && tails.back() <= tails.front();
    if (exp_ok)
        report.verdict = Verdict::ConsistentWithExponential;
    else if (super_ok)
        report.verdict = Verdict::ConsistentWithSuperpolynomialOnly;
    else if (!shrinking)
        report.verdict = Verdict::Inconsistent;
    else
        report.verdict = Verdict::Inconclusive;
    return report;
}

WindowTransform window_transform(const ConcentrationConfig& config, const Real& new_c,
                                 const Real& new_nu) {
    if (new_c <= 0 || new_nu <= 0)
        throw validation_error("window_transform: parameters must be positive");
    WindowTransform out;
    out.config = config;
    out.config.window_c = new_c;
    out.config.window_nu = new_nu;
    out.inherited = new_c >= config.window_c && new_nu <= config.window_nu;
    return out;
}

bool location_equivalence(const RealPolynomial& f, const RealPolynomial& g) {
    if (f.degree() < 0 || g.degree() < 0)
        throw validation_error("location_equivalence: zero polynomial");
    if (f.leading_coefficient() <= 0 || g.leading_coefficient() <= 0)
        throw validation_error("location_equivalence: leading coefficients must be positive");
    return f.degree() == g.degree() && f.leading_coefficient() == g.leading_coefficient();
}

GrowthDiagnostics growth_diagnostics(const CoefficientOracle& oracle,
                                     const ConcentrationConfig& config,
                                     const std::vector<Real>& x_grid,
                                     std::int64_t n_root_max, unsigned precision_bits,
                                     const TruncationPolicy& policy) {
    ScopedPrecision prec(precision_bits);
    config.validate();
    const int d = config.location.degree();
    const Real c_d = config.location.leading_coefficient();

    GrowthDiagnostics diag;
    diag.target_cd_over_d = Real(c_d / d).convert_to<double>();
    diag.root_gamma_target = Real(pow(c_d / d, Real(1) / d)).convert_to<double>();

    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (const Real& x : x_grid) {
        SeriesEvaluation ev = evaluate(oracle, x, precision_bits, policy);
        Real xd = pow(x, d);
        GrowthDiagnostics::Row row;
        row.x = x;
        row.log_peak_over_xd = log(ev.peak_value) / xd;
        row.log_total_over_xd = log(ev.total) / xd;
        diag.rows.push_back(row);
        double xdd = xd.convert_to<double>();
        rows.push_back({1.0, std::log(x.convert_to<double>()) / xdd, 1.0 / xdd});
        y.push_back(row.log_total_over_xd.convert_to<double>());
    }
    diag.log_total_extrapolated =
        rows.size() >= 4 ? least_squares(rows, y).coef[0] : y.back();

    // Root-Gamma sequence over nonzero coefficients.
    std::vector<std::vector<double>> rg_rows;
    std::vector<double> rg_y;
    for (std::int64_t n = 1; n <= n_root_max; ++n) {
        Real a = oracle(n);
        if (a <= 0) continue;
        Real s = exp((log(a) + lgamma(Real(n) / d + 1)) / n);
        diag.root_gamma.emplace_back(n, s);
    }
    double tail_max = 0;
    for (std::size_t i = diag.root_gamma.size() / 2; i < diag.root_gamma.size(); ++i)
        tail_max = std::max(tail_max, diag.root_gamma[i].second.convert_to<double>());
    diag.root_gamma_tail_max = tail_max;
    for (const auto& [n, s] : diag.root_gamma) {
        if (n < n_root_max / 4) continue;
        double dn = static_cast<double>(n);
        rg_rows.push_back({1.0, 1.0 / dn, std::log(dn) / dn});
        rg_y.push_back(Real(log(s)).convert_to<double>());
    }
    diag.root_gamma_extrapolated =
        rg_rows.size() >= 4 ? std::exp(least_squares(rg_rows, rg_y).coef[0]) : tail_max;
    return diag;
}

WeightedTailTable weighted_tail_check(const CoefficientOracle& oracle,
                                      const WeightSequence& weight,
                                      const ConcentrationConfig& config,
                                      const std::vector<Real>& x_grid,
                                      const std::vector<double>& p_list,
                                      unsigned precision_bits,
                                      const TruncationPolicy& policy) {
    ScopedPrecision prec(precision_bits);
    config.validate();

    CoefficientOracle weighted = [&oracle, &weight](std::int64_t n) -> Real {
        return oracle(n) * weight.eval(n);
    };

    WeightedTailTable table;
    table.p_list = p_list;
    for (const Real& x : x_grid) {
        SeriesEvaluation base = evaluate(oracle, x, precision_bits, policy);
        SeriesEvaluation wev = evaluate(weighted, x, precision_bits, policy);
        Real fx = config.location(x);
        Real width = config.window_c * pow(x, -config.window_nu);
        std::int64_t n_minus = floor_to_int64(fx * (1 - width));
        std::int64_t n_plus = floor_to_int64(fx * (1 + width));
        WeightedTailTable::Row row;
        row.x = x;
        row.weighted_head_ratio = wev.head_mass(n_minus) / base.total;
        row.weighted_tail_ratio = wev.tail_mass(n_plus) / base.total;
        table.rows.push_back(std::move(row));
    }
    for (double p : p_list) {
        std::vector<Real> sh, st;
        for (const auto& row : table.rows) {
            sh.push_back(row.weighted_head_ratio * pow(row.x, Real(p)));
            st.push_back(row.weighted_tail_ratio * pow(row.x, Real(p)));
        }
        table.head_decreasing.push_back(decreasing_tail_trend(sh));
        table.tail_decreasing.push_back(decreasing_tail_trend(st));
    }
    return table;
}

nlohmann::json ConcentrationReport::to_json() const {
    nlohmann::json j;
    j["schema"] = "v1";
    j["rows"] = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json r;
        r["x"] = format_real(row.x, 20);
        r["n_minus"] = row.n_minus;
        r["n_plus"] = row.n_plus;
        r["peak_index"] = row.peak_index;
        r["head_ratio"] = format_real(row.head_ratio, 20);
        r["tail_ratio"] = format_real(row.tail_ratio, 20);
        j["rows"].push_back(r);
    }
    auto fit_json = [](const TailFit& f) {
        nlohmann::json r;
        r["alpha"] = f.alpha;
        r["beta"] = f.beta;
        r["max_residual"] = f.max_residual;
        r["points_used"] = f.points_used;
        return r;
    };
    j["head_fit"] = fit_json(head_fit);
    j["tail_fit"] = fit_json(tail_fit);
    j["verdict"] = verdict_name(verdict);
    if (peak_onset_x) j["peak_onset_x"] = format_real(*peak_onset_x, 20);
    j["warnings"] = warnings;
    return j;
}

std::string ConcentrationReport::to_csv() const {
    std::ostringstream os;
    os << "x,n_minus,n_plus,head_ratio,tail_ratio\n";
    for (const auto& row : rows) {
        os << format_real(row.x, 20) << "," << row.n_minus << "," << row.n_plus << ","
           << format_real(row.head_ratio, 20) << "," << format_real(row.tail_ratio, 20)
           << "\n";
    }
    os << "# fit,side,alpha,beta,max_residual,points_used\n";
    os << "# fit,head," << head_fit.alpha << "," << head_fit.beta << ","
       << head_fit.max_residual << "," << head_fit.points_used << "\n";
    os << "# fit,tail," << tail_fit.alpha << "," << tail_fit.beta << ","
       << tail_fit.max_residual << "," << tail_fit.points_used << "\n";
    os << "# verdict," << verdict_name(verdict) << "\n";
    return os.str();
}

}  // namespace qp
