#include <doctest.h>

#include <cmath>

#include "qperiod/hypergeom.hpp"
#include "qperiod/series.hpp"

#include <nlohmann/json.hpp>

#include "test_util.hpp"

using namespace qp;
using namespace qptest;

namespace {

HypergeomSpec exp_spec(unsigned bits = 256) {
    ScopedPrecision prec(bits);
    return HypergeomSpec({}, {{Real(1), Real(1)}}, Real(1), Modifier{}, bits);
}

HypergeomSpec cosh_spec(unsigned bits = 256) {
    ScopedPrecision prec(bits);
    return HypergeomSpec({}, {{Real(2), Real(1)}}, Real(1), Modifier{}, bits);
}

HypergeomSpec p2_spec(unsigned bits = 256) {
    ScopedPrecision prec(bits);
    return HypergeomSpec(
        {}, {{Real(1), Real(1)}, {Real(1), Real(1)}, {Real(1), Real(1)}}, Real(1),
        Modifier{}, bits);
}

// Cancellation spec: Gamma(n+1)/Gamma(n+1)^2 * Gamma factors give exp(Tx).
HypergeomSpec cancel_spec(const Real& t, unsigned bits = 256) {
    ScopedPrecision prec(bits);
    return HypergeomSpec({{Real(1), Real(1)}},
                         {{Real(1), Real(1)}, {Real(1), Real(1)}}, t, Modifier{}, bits);
}

std::vector<Real> geometric_grid(double lo, double ratio, int count) {
    std::vector<Real> grid;
    double x = lo;
    for (int i = 0; i < count; ++i, x *= ratio) grid.push_back(Real(x));
    return grid;
}

}  // namespace

TEST_SUITE("hypergeom") {

TEST_CASE("coefficient closed forms") {
    ScopedPrecision prec(256);
    auto p2 = p2_spec();
    // n' = 2: 1/(2!)^3 = 0.125
    CHECK(close_rel(coefficient(p2, 2, 256), Real(1) / 8, ldexp(Real(1), -200)));

    auto cancel = cancel_spec(Real(1));
    CHECK(close_rel(coefficient(cancel, 5, 256), Real(1) / 120, ldexp(Real(1), -200)));

    // n' = 0 is the ratio of Gamma factors alone.
    auto cosh = cosh_spec();
    CHECK(close_rel(coefficient(cosh, 0, 256), Real(1), ldexp(Real(1), -200)));
}

TEST_CASE("kappa validation") {
    ScopedPrecision prec(256);
    CHECK_THROWS_AS(HypergeomSpec({}, {{Real("1.5"), Real(1)}}, Real(1), Modifier{}, 256),
                    validation_error);
    CHECK_THROWS_AS(HypergeomSpec({{Real(2), Real(1)}}, {{Real(1), Real(1)}}, Real(1),
                                  Modifier{}, 256),
                    validation_error);  // kappa = -1
    CHECK_THROWS_AS(HypergeomSpec({}, {}, Real(1), Modifier{}, 256), validation_error);
    CHECK_THROWS_AS(HypergeomSpec({}, {{Real(1), Real(1)}}, Real(-1), Modifier{}, 256),
                    validation_error);
}

TEST_CASE("predict_peak closed forms") {
    ScopedPrecision prec(256);
    auto p2 = predict_peak(p2_spec(), 256);
    CHECK(p2.kappa == 3);
    CHECK(close_rel(p2.c, Real(1), ldexp(Real(1), -200)));
    CHECK(close_rel(p2.peak_coefficient, Real(3), ldexp(Real(1), -200)));

    auto ch = predict_peak(cosh_spec(), 256);
    CHECK(ch.kappa == 2);
    CHECK(close_rel(ch.c, Real(1) / 4, ldexp(Real(1), -200)));
    CHECK(close_rel(ch.peak_coefficient, Real(1), ldexp(Real(1), -200)));

    auto ca = predict_peak(cancel_spec(Real(2)), 256);
    CHECK(ca.kappa == 1);
    CHECK(close_rel(ca.c, Real(1), ldexp(Real(1), -200)));
    CHECK(close_rel(ca.peak_coefficient, Real(2), ldexp(Real(1), -200)));
}

TEST_CASE("peak coefficient scales linearly in T") {
    ScopedPrecision prec(256);
    auto a = predict_peak(cancel_spec(Real(1)), 256);
    auto b = predict_peak(cancel_spec(Real(3)), 256);
    CHECK(close_rel(b.peak_coefficient, 3 * a.peak_coefficient, ldexp(Real(1), -200)));
}

TEST_CASE("kappa-support: coefficients vanish off the stride") {
    ScopedPrecision prec(192);
    auto oracle = series_oracle(cosh_spec(192), 192);
    for (std::int64_t n = 0; n < 20; ++n) {
        if (n % 2 == 0)
            CHECK(oracle(n) > 0);
        else
            CHECK(oracle(n) == 0);
    }
}

TEST_CASE("gamma-ratio asymptotic sanity") {
    ScopedPrecision prec(256);
    for (double u : {1e2, 1e3, 1e4}) {
        for (int kappa : {1, 2, 3}) {
            Real ratio = exp(lgamma(Real(u) + kappa) - lgamma(Real(u)));
            Real dev = abs(ratio / pow(Real(u), kappa) - 1);
            CHECK(dev <= Real(5 * kappa * kappa) / Real(u));
        }
    }
}

TEST_CASE("cancellation spec sums to exp(Tx)") {
    ScopedPrecision prec(256);
    for (double t : {1.0, 2.0}) {
        auto spec = cancel_spec(Real(t));
        auto oracle = series_oracle(spec, 256);
        for (double x : {1.0, 10.0, 100.0}) {
            auto ev = evaluate(oracle, Real(x), 256);
            Real expected = exp(Real(t) * Real(x));
            CHECK(abs(ev.total - expected) <= ldexp(expected, -(256 - 16)));
        }
    }
}

TEST_CASE("p2 spec coefficients equal the exact quantum period") {
    ScopedPrecision prec(256);
    auto spec = p2_spec();
    auto f = unit_poly(2, {{1, 0}, {0, 1}, {-1, -1}});
    auto seq = quantum_period(f, 300);
    for (int np = 0; np <= 100; ++np) {
        Real mine = coefficient(spec, np, 256);
        Real exact = to_real(seq.g[static_cast<std::size_t>(3 * np)]);
        CHECK(abs(mine - exact) <= ldexp(exact, -(256 - 16)));
    }
}

TEST_CASE("modifier regularity: constant, harmonic-like, and lclt weights") {
    ScopedPrecision prec(192);
    Modifier constant{};
    auto r0 = check_sequence_regularity(constant, 400, 1, 192);
    CHECK(r0.ratio_deviation_max_times_n == 0);
    CHECK(r0.m_estimate == 0);

    Modifier inv{Modifier::Kind::PowerLaw, Real(1), {}, {}};
    auto r1 = check_sequence_regularity(inv, 400, 1, 192);
    CHECK(r1.ratio_deviation_max_times_n <= 1.01);
    CHECK(r1.ratio_deviation_max_times_n >= 0.5);

    Modifier lclt{Modifier::Kind::PowerLaw, Real("1.5"), {}, {}};
    auto r2 = check_sequence_regularity(lclt, 400, 1, 192);
    CHECK(r2.m_estimate <= 2.0);
}

TEST_CASE("modifier whitelist validation") {
    Modifier bad{Modifier::Kind::RationalPoly, Real(0), {Real(1)}, {}};
    CHECK_THROWS_AS(bad.validate(), validation_error);
    Modifier negative{Modifier::Kind::RationalPoly, Real(0), {Real(1)}, {Real(-1), Real(1)}};
    CHECK_THROWS_AS(negative.validate(), validation_error);
    Modifier good{Modifier::Kind::RationalPoly, Real(0), {Real(1), Real(2)}, {Real(3)}};
    CHECK_NOTHROW(good.validate());
}

TEST_CASE("kernel conditions: Poisson kernel contraction") {
    ScopedPrecision prec(192);
    auto spec = exp_spec(192);
    auto rows = check_kernel_conditions(spec, {Real(100)}, 0.5, {0.25}, 192);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n_peak == 100);
    CHECK(rows[0].q_max <= 2.0 / 3.0 + 1e-9);
    CHECK(rows[0].q_max > 0);
}

TEST_CASE("kernel conditions: trivial window gives K = 1") {
    ScopedPrecision prec(192);
    auto spec = exp_spec(192);
    auto rows = check_kernel_conditions(spec, {Real(100)}, 0.5, {0.25, 0.125}, 192);
    for (const auto& [c0, k] : rows[0].k_for_c0) {
        CHECK(std::isfinite(k));
        CHECK(k >= 1.0);
    }
}

TEST_CASE("kernel conditions: p2 kernel admits a finite gaussian constant") {
    ScopedPrecision prec(192);
    auto spec = p2_spec(192);
    // c0 probes around c_d^2 = (T/kappa)^2 scales.
    auto rows = check_kernel_conditions(spec, {Real(50)}, 0.5, {1.0 / 36, 1.0 / 18}, 192);
    for (const auto& [c0, k] : rows[0].k_for_c0) CHECK(std::isfinite(k));
    CHECK(rows[0].q_max < 1.0);
}

TEST_CASE("evaluate_and_measure: exp spec is consistent-with-exponential") {
    ScopedPrecision prec(256);
    auto report = evaluate_and_measure(exp_spec(), 0.25, geometric_grid(25, 2, 5), 256);
    CHECK(report.verdict == Verdict::ConsistentWithExponential);
    CHECK(report.tail_fit.beta > 0.25);
    CHECK(report.tail_fit.beta < 0.75);
}

TEST_CASE("evaluate_and_measure rejects nu outside the half-open range") {
    auto spec = exp_spec(128);
    CHECK_THROWS_AS(evaluate_and_measure(spec, 0.6, geometric_grid(10, 2, 4), 128),
                    validation_error);
    CHECK_THROWS_AS(evaluate_and_measure(spec, 0.0, geometric_grid(10, 2, 4), 128),
                    validation_error);
}

TEST_CASE("cosh ratios track the even part of exp") {
    ScopedPrecision prec(256);
    auto report = evaluate_and_measure(cosh_spec(), 0.25, geometric_grid(25, 2, 4), 256);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        CHECK(report.rows[i].head_ratio < report.rows[i - 1].head_ratio);
        CHECK(report.rows[i].tail_ratio < report.rows[i - 1].tail_ratio);
    }
}

TEST_CASE("p2 spec ratios decrease across the grid") {
    ScopedPrecision prec(256);
    auto report = evaluate_and_measure(p2_spec(), 0.25, geometric_grid(20, 2, 4), 256);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        CHECK(report.rows[i].head_ratio < report.rows[i - 1].head_ratio);
        CHECK(report.rows[i].tail_ratio < report.rows[i - 1].tail_ratio);
    }
}

TEST_CASE("spec JSON ingestion") {
    ScopedPrecision prec(256);
    auto j = nlohmann::json::parse(R"({
        "upper": [],
        "lower": [["1", "1"], ["1", "1"], ["1", "1"]],
        "T": "1",
        "modifier": {"kind": "constant"}
    })");
    auto spec = HypergeomSpec::from_json(j, 256);
    CHECK(spec.kappa() == 3);
    CHECK(close_rel(spec.peak_coefficient(), Real(3), ldexp(Real(1), -200)));

    auto power = nlohmann::json::parse(R"({
        "lower": [[1, 1]],
        "T": "2.5",
        "modifier": {"kind": "power", "gamma": "1.5"}
    })");
    auto pspec = HypergeomSpec::from_json(power, 256);
    CHECK(pspec.kappa() == 1);
    CHECK(close_rel(pspec.t(), Real("2.5"), ldexp(Real(1), -200)));

    auto bad = nlohmann::json::parse(R"({"lower": [[1, 1]]})");
    CHECK_THROWS_AS(HypergeomSpec::from_json(bad, 128), io_error);
}

}  // TEST_SUITE
