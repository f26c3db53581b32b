#include "qperiod/hypergeom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "qperiod/walk.hpp"

namespace qp {

namespace {

Real json_number(const nlohmann::json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return Real(j.get<std::string>());
        } catch (const std::exception&) {
            throw io_error("hypergeom spec: " + where + " is not a decimal string");
        }
    }
    if (j.is_number()) return Real(j.get<double>());
    throw io_error("hypergeom spec: " + where + " must be a decimal string or number");
}

}  // namespace

void Modifier::validate() const {
    if (kind != Kind::RationalPoly) return;
    if (num.empty() || den.empty())
        throw validation_error("modifier: rational family needs numerator and denominator");
    for (const Real& c : num)
        if (c < 0) throw validation_error("modifier: rational family needs coefficients >= 0");
    for (const Real& c : den)
        if (c < 0) throw validation_error("modifier: rational family needs coefficients >= 0");
    if (num.front() <= 0 || den.front() <= 0)
        throw validation_error("modifier: rational family needs positive constant terms");
}

Real Modifier::eval(std::int64_t n) const {
    switch (kind) {
        case Kind::Constant: return Real(1);
        case Kind::PowerLaw: return pow(Real(n + 1), -gamma);
        case Kind::RationalPoly: {
            auto horner = [n](const std::vector<Real>& c) {
                Real acc = 0;
                for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * n + *it;
                return acc;
            };
            return horner(num) / horner(den);
        }
    }
    throw validation_error("modifier outside the whitelist");
}

std::string Modifier::describe() const {
    switch (kind) {
        case Kind::Constant: return "1";
        case Kind::PowerLaw: return "(n+1)^-" + format_real(gamma, 6);
        case Kind::RationalPoly: return "rational(" + std::to_string(num.size() - 1) + "/" +
                                        std::to_string(den.size() - 1) + ")";
    }
    return "?";
}

HypergeomSpec::HypergeomSpec(std::vector<std::pair<Real, Real>> upper,
                             std::vector<std::pair<Real, Real>> lower, Real t,
                             Modifier modifier, unsigned precision_bits)
    : upper_(std::move(upper)),
      lower_(std::move(lower)),
      t_(std::move(t)),
      modifier_(std::move(modifier)),
      precision_bits_(precision_bits) {
    ScopedPrecision prec(precision_bits_);
    if (lower_.empty())
        throw validation_error("hypergeom spec: needs at least one lower parameter pair");
    for (const auto& [p, shift] : upper_)
        if (p <= 0 || shift <= 0)
            throw validation_error("hypergeom spec: all parameters must be positive");
    for (const auto& [p, shift] : lower_)
        if (p <= 0 || shift <= 0)
            throw validation_error("hypergeom spec: all parameters must be positive");
    if (t_ <= 0) throw validation_error("hypergeom spec: T must be positive");
    modifier_.validate();

    Real kappa_real = 0;
    for (const auto& [b, bs] : lower_) kappa_real += b;
    for (const auto& [a, as] : upper_) kappa_real -= a;
    Real rounded = floor(kappa_real + Real(1) / 2);
    if (rounded < 1 || abs(kappa_real - rounded) > ldexp(Real(1), -static_cast<int>(precision_bits_ / 2)))
        throw validation_error("hypergeom spec: kappa = sum(beta) - sum(alpha) must be a "
                               "positive integer, got " + format_real(kappa_real, 10));
    kappa_ = rounded.convert_to<int>();

    c_ = 1;
    for (const auto& [a, as] : upper_) c_ *= pow(a, a);
    for (const auto& [b, bs] : lower_) c_ *= pow(b, -b);
}

Real HypergeomSpec::peak_coefficient() const {
    return kappa_ * pow(c_, Real(1) / kappa_) * t_;
}

Real coefficient(const HypergeomSpec& spec, std::int64_t n_prime, unsigned precision_bits) {
    ScopedPrecision prec(precision_bits);
    if (n_prime < 0) return Real(0);
    Real log_value = log(spec.modifier().eval(n_prime));
    for (const auto& [a, as] : spec.upper()) log_value += lgamma(a * n_prime + as);
    for (const auto& [b, bs] : spec.lower()) log_value -= lgamma(b * n_prime + bs);
    log_value += Real(spec.kappa()) * n_prime * log(spec.t());
    return exp(log_value);
}

CoefficientOracle series_oracle(const HypergeomSpec& spec, unsigned precision_bits) {
    auto shared = std::make_shared<HypergeomSpec>(spec);
    return [shared, precision_bits](std::int64_t n) -> Real {
        if (n < 0 || n % shared->kappa() != 0) return Real(0);
        return coefficient(*shared, n / shared->kappa(), precision_bits);
    };
}

PeakPrediction predict_peak(const HypergeomSpec& spec, unsigned precision_bits) {
    ScopedPrecision prec(precision_bits);
    PeakPrediction out;
    out.kappa = spec.kappa();
    out.c = spec.c_constant();
    out.peak_coefficient = spec.peak_coefficient();
    out.location = RealPolynomial::linear(out.peak_coefficient);
    out.window_nu_range = {0.0, 0.5};
    return out;
}

RegularityReport check_sequence_regularity(const Modifier& modifier, int n_max,
                                           std::uint64_t seed, unsigned precision_bits) {
    ScopedPrecision prec(precision_bits);
    if (n_max < 100)
        throw validation_error("check_sequence_regularity: n_max must be >= 100");
    modifier.validate();

    RegularityReport rep;
    std::vector<Real> a(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) a[static_cast<std::size_t>(n)] = modifier.eval(n);

    for (int n = 1; n < n_max; ++n) {
        Real dev = abs(a[static_cast<std::size_t>(n) + 1] / a[static_cast<std::size_t>(n)] - 1) * n;
        rep.ratio_deviation_max_times_n =
            std::max(rep.ratio_deviation_max_times_n, dev.convert_to<double>());
    }
    for (int n = 2; n <= n_max; ++n) {
        Real bound = abs(log(a[static_cast<std::size_t>(n)])) / log(Real(n));
        rep.log_bound_constant = std::max(rep.log_bound_constant, bound.convert_to<double>());
    }
    SplitMix64 rng(seed);
    for (int s = 0; s < 200; ++s) {
        auto m = static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(n_max + 1));
        auto n = static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(n_max + 1));
        if (m == n) continue;
        Real num = abs(log(a[static_cast<std::size_t>(m)] / a[static_cast<std::size_t>(n)]));
        Real den = abs(log(Real(m + 1) / Real(n + 1)));
        Real need = num / den;
        rep.m_estimate = std::max(rep.m_estimate, need.convert_to<double>());
    }
    return rep;
}

std::vector<KernelConditionRow> check_kernel_conditions(const HypergeomSpec& spec,
                                                        const std::vector<Real>& x_list,
                                                        double d_fraction,
                                                        const std::vector<double>& c0_list,
                                                        unsigned precision_bits) {
    ScopedPrecision prec(precision_bits);
    if (d_fraction <= 0)
        throw validation_error("check_kernel_conditions: D must be positive");
    const int kappa = spec.kappa();
    const Real& t = spec.t();

    std::vector<KernelConditionRow> out;
    for (const Real& x : x_list) {
        Real tx = t * x;
        auto log_w = [&](std::int64_t n) -> Real {
            return Real(kappa) * n * log(tx) - lgamma(Real(kappa) * n + 1);
        };
        KernelConditionRow row;
        row.x = x;
        std::int64_t n_peak = floor_to_int64(tx / kappa);
        row.n_peak = n_peak;
        auto dn = static_cast<std::int64_t>(std::floor(d_fraction * static_cast<double>(n_peak)));

        // Condition (ii): geometric decay past floor(D N).
        Real q_max = 0;
        std::int64_t scan_end = dn + std::max<std::int64_t>(n_peak, 50);
        Real prev = log_w(n_peak + dn);
        for (std::int64_t j = dn; j < scan_end; ++j) {
            Real cur = log_w(n_peak + j + 1);
            q_max = std::max(q_max, Real(exp(cur - prev)));
            prev = cur;
        }
        row.q_max = q_max.convert_to<double>();

        // Condition (i): smallest K per probed c0 over both flanks.
        Real lw_peak = log_w(n_peak);
        for (double c0 : c0_list) {
            Real log_k = 0;
            for (std::int64_t i = 0; i <= n_peak; ++i) {
                Real cand = log_w(n_peak - i) - lw_peak + Real(c0) * i * i / x;
                log_k = std::max(log_k, cand);
            }
            for (std::int64_t j = 0; j <= dn; ++j) {
                Real cand = log_w(n_peak + j) - lw_peak + Real(c0) * j * j / x;
                log_k = std::max(log_k, cand);
            }
            row.k_for_c0.emplace_back(c0, Real(exp(log_k)).convert_to<double>());
        }
        out.push_back(std::move(row));
    }
    return out;
}

ConcentrationReport evaluate_and_measure(const HypergeomSpec& spec, double nu,
                                         const std::vector<Real>& x_grid,
                                         unsigned precision_bits,
                                         const TruncationPolicy& policy) {
    ScopedPrecision prec(precision_bits);
    if (!(nu > 0.0 && nu < 0.5))
        throw validation_error("evaluate_and_measure: nu must lie in (0, 1/2)");
    Real peak = spec.peak_coefficient();
    ConcentrationConfig config;
    config.location = RealPolynomial::linear(peak);
    config.window_nu = Real(nu);
    config.window_c = pow(peak, -config.window_nu);
    return measure(series_oracle(spec, precision_bits), config, x_grid, precision_bits,
                   policy);
}

HypergeomSpec HypergeomSpec::from_json(const nlohmann::json& j, unsigned precision_bits) {
    ScopedPrecision prec(precision_bits);
    if (!j.is_object()) throw io_error("hypergeom spec: top level must be an object");

    auto parse_pairs = [&](const char* key) {
        std::vector<std::pair<Real, Real>> pairs;
        if (!j.contains(key)) return pairs;
        if (!j[key].is_array()) throw io_error(std::string("hypergeom spec: ") + key +
                                               " must be an array of [param, shift] pairs");
        std::size_t idx = 0;
        for (const auto& je : j[key]) {
            std::string where = std::string(key) + "[" + std::to_string(idx++) + "]";
            if (!je.is_array() || je.size() != 2)
                throw io_error("hypergeom spec: " + where + " must be a [param, shift] pair");
            pairs.emplace_back(json_number(je[0], where + "[0]"),
                               json_number(je[1], where + "[1]"));
        }
        return pairs;
    };

    auto upper = parse_pairs("upper");
    auto lower = parse_pairs("lower");
    if (!j.contains("T")) throw io_error("hypergeom spec: field \"T\" missing");
    Real t = json_number(j["T"], "T");

    Modifier modifier;
    if (j.contains("modifier")) {
        const auto& jm = j["modifier"];
        if (!jm.is_object() || !jm.contains("kind") || !jm["kind"].is_string())
            throw io_error("hypergeom spec: modifier.kind missing or not a string");
        std::string kind = jm["kind"].get<std::string>();
        if (kind == "constant") {
            modifier.kind = Modifier::Kind::Constant;
        } else if (kind == "power") {
            modifier.kind = Modifier::Kind::PowerLaw;
            if (!jm.contains("gamma")) throw io_error("hypergeom spec: modifier.gamma missing");
            modifier.gamma = json_number(jm["gamma"], "modifier.gamma");
        } else if (kind == "rational") {
            modifier.kind = Modifier::Kind::RationalPoly;
            for (const char* key : {"num", "den"}) {
                if (!jm.contains(key) || !jm[key].is_array())
                    throw io_error(std::string("hypergeom spec: modifier.") + key +
                                   " missing or not an array");
                auto& dst = std::string(key) == "num" ? modifier.num : modifier.den;
                std::size_t idx = 0;
                for (const auto& je : jm[key])
                    dst.push_back(json_number(je, std::string("modifier.") + key + "[" +
                                                      std::to_string(idx++) + "]"));
            }
        } else {
            throw io_error("hypergeom spec: unknown modifier kind \"" + kind + "\"");
        }
    }
    return HypergeomSpec(std::move(upper), std::move(lower), std::move(t),
                         std::move(modifier), precision_bits);
}

HypergeomSpec HypergeomSpec::load_file(const std::string& path, unsigned precision_bits) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open hypergeom spec file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw io_error("hypergeom spec: invalid JSON in " + path + ": " + e.what());
    }
    return from_json(j, precision_bits);
}

}  // namespace qp
