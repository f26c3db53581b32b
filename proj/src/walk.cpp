#include "qperiod/walk.hpp"

#include <algorithm>
#include <cmath>

#include "qperiod/linalg.hpp"

namespace qp {

namespace {

std::vector<Real> q_from_cst(const std::vector<Rational>& cst, const Real& base, int stride) {
    std::vector<Real> q;
    q.reserve(cst.size() / static_cast<std::size_t>(stride) + 1);
    Real denom = 1;
    Real step = pow(base, stride);
    for (std::size_t n = 0; n < cst.size(); n += static_cast<std::size_t>(stride)) {
        q.push_back(to_real(cst[n]) / denom);
        denom *= step;
    }
    return q;
}

}  // namespace

std::vector<Real> return_probabilities(const LaurentPolynomial& g, const Real& t_g,
                                       int n_max, unsigned precision_bits) {
    ScopedPrecision prec(precision_bits);
    if (n_max < 0) throw validation_error("return_probabilities: n_max must be >= 0");
    auto cst = cst_sequence(g, n_max);
    if (detect_index(cst) != 1)
        throw validation_error("return_probabilities: model must have index 1 "
                               "(pass g = f^r)");
    return q_from_cst(cst, Real(t_g), 1);
}

std::vector<Real> return_probabilities(const LaurentPolynomial& f, int index_r,
                                       const Real& t_con, int n_max,
                                       unsigned precision_bits) {
    ScopedPrecision prec(precision_bits);
    if (index_r <= 0) throw validation_error("return_probabilities: index must be positive");
    auto cst = cst_sequence(f, n_max * index_r);
    return q_from_cst(cst, Real(t_con), index_r);
}

LcltFit fit_lclt(const std::vector<Real>& q, int m, int n_min_fit) {
    if (n_min_fit < 2) throw validation_error("fit_lclt: n_min_fit must be >= 2");

    LcltFit fit;
    fit.dim = m;
    fit.n_min_fit = n_min_fit;
    for (std::size_t n = 1; n < q.size(); ++n)
        if (q[n] > 0) fit.samples.emplace_back(static_cast<int>(n), q[n]);

    std::vector<double> u, v, logn, logq;       // v = q n^{m/2}
    for (const auto& [n, qn] : fit.samples) {
        if (n < n_min_fit) continue;
        Real scaled = qn * pow(Real(n), Real(m) / 2);
        u.push_back(1.0 / std::sqrt(static_cast<double>(n)));
        v.push_back(scaled.convert_to<double>());
        logn.push_back(std::log(static_cast<double>(n)));
        logq.push_back(Real(log(qn)).convert_to<double>());
    }
    if (u.size() < 3)
        throw validation_error("fit_lclt: insufficient positive samples past n_min_fit");

    // q n^{m/2} = c + b / sqrt(n)
    std::vector<std::vector<double>> rows;
    rows.reserve(u.size());
    for (double ui : u) rows.push_back({1.0, ui});
    LinearFit cb = least_squares(rows, v);
    fit.c_hat = Real(cb.coef[0]);
    fit.b_hat = cb.coef[1];

    // log q vs log n, expected slope -m/2.
    fit.m_over_2_check = fit_line(logn, logq).slope;

    // Decay of |q n^{m/2} - c_hat|; NaN when the residuals vanish (e.g. the
    // constant sequence with m = 0).
    std::vector<double> lr_x, lr_y;
    double c = cb.coef[0];
    for (std::size_t i = 0; i < v.size(); ++i) {
        double r = std::fabs(v[i] - c);
        if (r > 1e-300 && r > 1e-14 * std::fabs(c)) {
            lr_x.push_back(logn[i]);
            lr_y.push_back(std::log(r));
        }
    }
    fit.residual_exponent = lr_x.size() >= 3 ? fit_line(lr_x, lr_y).slope
                                             : std::numeric_limits<double>::quiet_NaN();
    return fit;
}

std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t trial) {
    // One splitmix step decorrelates (seed, trial) pairs.
    SplitMix64 mix(seed ^ (trial * 0x9e3779b97f4a7c15ull));
    return mix.next();
}

MonteCarloResult monte_carlo_return(const StepDistribution& dist, int n_steps,
                                    std::int64_t n_trials, std::uint64_t seed) {
    if (n_trials < 1) throw validation_error("monte_carlo_return: n_trials must be >= 1");
    if (n_steps < 0) throw validation_error("monte_carlo_return: n_steps must be >= 0");

    // Double cumulative table; sampling accuracy is irrelevant next to the
    // binomial error, determinism is what matters.
    std::vector<double> cum(dist.steps.size());
    double acc = 0;
    for (std::size_t i = 0; i < dist.steps.size(); ++i) {
        acc += dist.steps[i].second.convert_to<double>();
        cum[i] = acc;
    }
    if (!cum.empty()) cum.back() = 1.0;

    const int m = dist.dim;
    std::vector<std::int64_t> pos(m);
    std::int64_t hits = 0;
    for (std::int64_t trial = 0; trial < n_trials; ++trial) {
        SplitMix64 rng(trial_stream_seed(seed, static_cast<std::uint64_t>(trial)));
        std::fill(pos.begin(), pos.end(), 0);
        for (int s = 0; s < n_steps; ++s) {
            double uvar = rng.next_unit();
            std::size_t idx = static_cast<std::size_t>(
                std::lower_bound(cum.begin(), cum.end(), uvar) - cum.begin());
            if (idx >= dist.steps.size()) idx = dist.steps.size() - 1;
            const Exponent& step = dist.steps[idx].first;
            for (int i = 0; i < m; ++i) pos[i] += step[i];
        }
        bool at_origin = std::all_of(pos.begin(), pos.end(),
                                     [](std::int64_t v) { return v == 0; });
        if (at_origin) ++hits;
    }

    MonteCarloResult res;
    res.hits = hits;
    res.trials = n_trials;
    res.estimate = static_cast<double>(hits) / static_cast<double>(n_trials);
    res.std_error = std::sqrt(res.estimate * (1.0 - res.estimate) /
                              static_cast<double>(n_trials));
    return res;
}

}  // namespace qp
