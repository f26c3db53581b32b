#include "qperiod/series.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "qperiod/linalg.hpp"

namespace qp {

PeriodSequence quantum_period(const LaurentPolynomial& f, int n_max, CstMethod method,
                              const std::string& source) {
    if (n_max < 0) throw validation_error("quantum_period: n_max must be >= 0");
    if (!is_convenient(f))
        throw validation_error("quantum_period: model is not convenient");

    PeriodSequence seq;
    seq.n_max = n_max;
    seq.source_model = source.empty() ? f.to_string() : source;
    seq.regularized = cst_sequence(f, n_max, method);
    seq.g.reserve(seq.regularized.size());
    Integer fact = 1;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) fact *= n;
        seq.g.push_back(seq.regularized[static_cast<std::size_t>(n)] / Rational(fact));
    }
    // Short tables still get their index from the standard evidence window.
    if (n_max >= kDefaultIndexHorizon)
        seq.index_r = detect_index(seq.regularized);
    else
        seq.index_r = detect_index(f, kDefaultIndexHorizon);
    return seq;
}

TaConEstimate estimate_t_a_con(const PeriodSequence& seq, unsigned precision_bits) {
    ScopedPrecision prec(precision_bits);

    std::vector<int> idx;
    for (int n = 1; n <= seq.n_max; ++n)
        if (seq.regularized[static_cast<std::size_t>(n)] > 0) idx.push_back(n);
    if (idx.size() < 10)
        throw validation_error("estimate_t_a_con: need at least 10 nonzero regularized "
                               "coefficients");

    const int n_min = std::max(seq.index_r, seq.n_max / 4);

    // Root-test sequence: log rho_n = log Cst(f^n) / n, Stirling corrections
    // are O(1/n) and O(log n / n).
    std::vector<std::vector<double>> root_rows;
    std::vector<double> root_y;
    for (int n : idx) {
        if (n < n_min) continue;
        Real lr = log(to_real(seq.regularized[static_cast<std::size_t>(n)])) / n;
        double dn = static_cast<double>(n);
        root_rows.push_back({1.0, 1.0 / dn, std::log(dn) / dn});
        root_y.push_back(lr.convert_to<double>());
    }
    if (root_rows.size() < 4)
        throw validation_error("estimate_t_a_con: too few usable points past the fit window");
    LinearFit root_fit = least_squares(root_rows, root_y);

    // Stride-ratio sequence between consecutive nonzero indices.
    std::vector<std::vector<double>> ratio_rows;
    std::vector<double> ratio_y;
    for (std::size_t i = 1; i < idx.size(); ++i) {
        int n = idx[i], p = idx[i - 1];
        if (n < n_min) continue;
        Real lr = log(to_real(seq.regularized[static_cast<std::size_t>(n)] /
                              seq.regularized[static_cast<std::size_t>(p)])) /
                  (n - p);
        double dn = static_cast<double>(n);
        ratio_rows.push_back({1.0, 1.0 / dn});
        ratio_y.push_back(lr.convert_to<double>());
    }

    TaConEstimate est;
    est.root_estimate = exp(Real(root_fit.coef[0]));
    if (ratio_rows.size() >= 3) {
        LinearFit ratio_fit = least_squares(ratio_rows, ratio_y);
        est.ratio_estimate = exp(Real(ratio_fit.coef[0]));
        est.value = est.ratio_estimate;
    } else {
        est.ratio_estimate = est.root_estimate;
        est.value = est.root_estimate;
    }
    Real gap = abs(est.root_estimate - est.ratio_estimate) / est.value;
    est.agreement_gap = gap.convert_to<double>();
    est.near_zero_warning = est.value < ldexp(Real(1), -64);
    return est;
}

struct PeriodOracle::State {
    LaurentPolynomial f;
    unsigned precision_bits;
    CstMethod method;
    std::vector<Rational> cst;       // cache, cst[n] = Cst(f^n)
    std::vector<Integer> factorial;  // factorial[n] = n!
    LaurentPolynomial running_power;  // f^(cst.size()-1), iterative path only
    std::optional<std::vector<Rational>> lambda;  // closed-form path

    State(const LaurentPolynomial& model, unsigned bits, CstMethod meth)
        : f(model),
          precision_bits(bits),
          method(meth),
          running_power(LaurentPolynomial::one(model.num_vars())) {
        cst.push_back(Rational(1));
        factorial.push_back(Integer(1));
        if (method == CstMethod::Auto) lambda = origin_barycentric(f);
    }

    const Rational& cst_at(std::int64_t n) {
        while (static_cast<std::int64_t>(cst.size()) <= n) {
            if (lambda) {
                auto block = cst_sequence(f, static_cast<int>(cst.size() * 2 + 16));
                cst = std::move(block);
            } else {
                running_power = multiply(running_power, f);
                cst.push_back(running_power.constant_term());
            }
        }
        return cst[static_cast<std::size_t>(n)];
    }

    const Integer& fact_at(std::int64_t n) {
        while (static_cast<std::int64_t>(factorial.size()) <= n)
            factorial.push_back(factorial.back() * static_cast<std::int64_t>(factorial.size()));
        return factorial[static_cast<std::size_t>(n)];
    }
};

PeriodOracle::PeriodOracle(const LaurentPolynomial& f, unsigned precision_bits,
                           CstMethod method)
    : state_(std::make_shared<State>(f, precision_bits, method)) {}

Real PeriodOracle::operator()(std::int64_t n) const {
    ScopedPrecision prec(state_->precision_bits);
    if (n < 0) return Real(0);
    const Rational& c = state_->cst_at(n);
    if (c == 0) return Real(0);
    return to_real(c / Rational(state_->fact_at(n)));
}

CoefficientOracle PeriodOracle::as_oracle() const {
    auto self = *this;
    return [self](std::int64_t n) { return self(n); };
}

Real SeriesEvaluation::head_mass(std::int64_t n_bar) const {
    if (n_bar < 0 || prefix.empty()) return Real(0);
    if (n_bar >= static_cast<std::int64_t>(prefix.size()))
        return prefix.back();
    return prefix[static_cast<std::size_t>(n_bar)];
}

Real SeriesEvaluation::tail_mass(std::int64_t n_bar) const {
    Real head = head_mass(n_bar - 1);
    // prefix is monotone, so the subtraction is non-negative.
    return (total - head) + truncation_bound;
}

SeriesEvaluation evaluate(const CoefficientOracle& oracle, const Real& x,
                          unsigned precision_bits, const TruncationPolicy& policy) {
    ScopedPrecision prec(precision_bits);
    Real xv = x;
    xv.precision(Real::default_precision());
    if (xv <= 0) throw validation_error("evaluate: x must be > 0");

    SeriesEvaluation ev;
    ev.x = xv;
    ev.total = 0;
    ev.peak_value = 0;
    ev.peak_index = 0;

    // Ties within one part in 2^(prec/2) resolve to the larger index, which
    // realizes the max-argmax convention stably under rounding.
    Real tie_band = 1 - ldexp(Real(1), -static_cast<int>(precision_bits / 2));

    Real xpow = 1;
    Real last_nonzero = 0;
    std::int64_t zero_run = 0;
    std::deque<Real> ratios;
    bool have_any_nonzero = false;
    bool certified = false;
    Real worst_ratio = 0;

    for (std::int64_t n = 0; n < policy.max_terms; ++n) {
        Real a = oracle(n);
        if (a < 0) throw validation_error("evaluate: oracle returned a negative coefficient");
        Real term = a * xpow;
        ev.total += term;
        ev.prefix.push_back(ev.total);
        ev.terms_summed = n + 1;

        if (term > ev.peak_value) {
            ev.peak_value = term;
            ev.peak_index = n;
        } else if (term > 0 && term >= ev.peak_value * tie_band) {
            ev.peak_index = n;
        }

        if (term > 0) {
            if (have_any_nonzero) {
                ratios.push_back(term / last_nonzero);
                if (static_cast<int>(ratios.size()) > policy.ratio_window)
                    ratios.pop_front();
            }
            last_nonzero = term;
            have_any_nonzero = true;
            zero_run = 0;
        } else if (have_any_nonzero) {
            ++zero_run;
        }

        bool window_ok = static_cast<int>(ratios.size()) == policy.ratio_window;
        if (window_ok) {
            worst_ratio = 0;
            for (const Real& r : ratios) worst_ratio = std::max(worst_ratio, r);
            window_ok = worst_ratio < Real(1) / 2;
        }
        bool past_peak = n > ev.peak_index;
        bool small = have_any_nonzero &&
                     last_nonzero < ldexp(ev.total, -static_cast<int>(precision_bits +
                                                                      policy.guard_bits));
        if (past_peak && window_ok && small) {
            ev.truncation_bound = last_nonzero * worst_ratio / (1 - worst_ratio);
            certified = true;
            break;
        }
        // A long run of zeros past the peak: the support ended (finite
        // series) under the policy's gap hypothesis.
        if (past_peak && have_any_nonzero && zero_run >= policy.max_zero_run) {
            ev.truncation_bound = 0;
            certified = true;
            break;
        }
        xpow *= xv;
    }

    if (!have_any_nonzero)
        throw validation_error("evaluate: series is identically zero within the term cap");
    if (!certified)
        throw uncertified_error("evaluate: truncation policy could not certify the tail "
                                "within max_terms");
    return ev;
}

Real WeightSequence::eval(std::int64_t n) const {
    switch (kind) {
        case Kind::Ones: return Real(1);
        case Kind::Constant: return Real(constant);
        case Kind::LogPow: {
            Real l = log(Real(n + 2));
            return pow(l, power);
        }
    }
    throw validation_error("weight sequence outside the subpolynomial whitelist");
}

std::string WeightSequence::describe() const {
    switch (kind) {
        case Kind::Ones: return "1";
        case Kind::Constant: return "const:" + std::to_string(constant);
        case Kind::LogPow: return "log^" + std::to_string(power) + "(n+2)";
    }
    return "?";
}

Real SlowlyVaryingFn::eval(const Real& y) const {
    switch (kind) {
        case Kind::Constant: return Real(constant);
        case Kind::LogPow: return pow(log(y), power);
        case Kind::LogLog: return log(log(y));
    }
    throw validation_error("slowly varying function outside the whitelist");
}

std::int64_t SlowlyVaryingFn::min_index() const {
    switch (kind) {
        case Kind::Constant: return 0;
        case Kind::LogPow: return 1;  // log 1 = 0, still >= 0
        case Kind::LogLog: return 3;  // first n with log log n > 0
    }
    return 0;
}

std::string SlowlyVaryingFn::describe() const {
    switch (kind) {
        case Kind::Constant: return "const:" + std::to_string(constant);
        case Kind::LogPow: return power == 1 ? "log" : "log^" + std::to_string(power);
        case Kind::LogLog: return "loglog";
    }
    return "?";
}

SubstitutionCheck substitution_check(const CoefficientOracle& oracle,
                                     const WeightSequence& weight,
                                     const SlowlyVaryingFn& g,
                                     const RealPolynomial& location,
                                     const std::vector<Real>& x_grid,
                                     unsigned precision_bits,
                                     const TruncationPolicy& policy) {
    ScopedPrecision prec(precision_bits);
    const std::int64_t n0 = g.min_index();

    CoefficientOracle weighted = [&](std::int64_t n) -> Real {
        if (n < n0) return Real(0);
        return oracle(n) * weight.eval(n);
    };
    CoefficientOracle weighted_g = [&](std::int64_t n) -> Real {
        if (n < n0) return Real(0);
        if (g.kind == SlowlyVaryingFn::Kind::LogPow && n == 1) return Real(0);  // g(1) = 0
        return oracle(n) * weight.eval(n) * g.eval(Real(n));
    };

    SubstitutionCheck out;
    for (const Real& x : x_grid) {
        SeriesEvaluation base = evaluate(oracle, x, precision_bits, policy);
        SeriesEvaluation sw = evaluate(weighted, x, precision_bits, policy);
        SeriesEvaluation swg = evaluate(weighted_g, x, precision_bits, policy);
        Real gfx = g.eval(location(x));
        Real d = abs(swg.total - gfx * sw.total) / base.total;
        out.rows.push_back({x, d});
    }
    out.decreasing = out.rows.size() >= 2;
    for (std::size_t i = 1; i < out.rows.size(); ++i)
        if (out.rows[i].discrepancy >= out.rows[i - 1].discrepancy) out.decreasing = false;
    return out;
}

}  // namespace qp
