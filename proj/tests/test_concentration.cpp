#include <doctest.h>

#include <cmath>

#include "qperiod/concentration.hpp"
#include "qperiod/series.hpp"
#include "qperiod/walk.hpp"

#include <nlohmann/json.hpp>

#include "test_util.hpp"

using namespace qp;
using namespace qptest;

namespace {

CoefficientOracle exp_oracle() {
    auto cache = std::make_shared<std::vector<Real>>(1, Real(1));
    return [cache](std::int64_t n) -> Real {
        while (static_cast<std::int64_t>(cache->size()) <= n)
            cache->push_back(cache->back() * static_cast<std::int64_t>(cache->size()));
        return 1 / (*cache)[static_cast<std::size_t>(n)];
    };
}

ConcentrationConfig exp_config() {
    ConcentrationConfig cfg;
    cfg.location = RealPolynomial::linear(Real(1));
    cfg.window_c = Real(1);
    cfg.window_nu = Real("0.25");
    return cfg;
}

std::vector<Real> geometric_grid(double lo, double ratio, int count) {
    std::vector<Real> grid;
    double x = lo;
    for (int i = 0; i < count; ++i, x *= ratio) grid.push_back(Real(x));
    return grid;
}

}  // namespace

TEST_SUITE("concentration") {

TEST_CASE("exp series concentrates near n = x") {
    ScopedPrecision prec(256);
    auto report = measure(exp_oracle(), exp_config(), geometric_grid(25, 2, 4), 256);
    REQUIRE(report.rows.size() == 4);
    const auto& at100 = report.rows[2];
    CHECK(at100.head_ratio <= Real(1e-3));
    // Right tail carries the Poisson skewness; exact value 1.707e-3.
    CHECK(at100.tail_ratio <= Real(2e-3));
    CHECK(at100.tail_ratio >= Real(1e-3));
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        CHECK(report.rows[i].head_ratio < report.rows[i - 1].head_ratio);
        CHECK(report.rows[i].tail_ratio < report.rows[i - 1].tail_ratio);
    }
    CHECK(report.tail_fit.beta > 0.3);
    CHECK(report.tail_fit.beta < 0.7);
    CHECK(report.head_fit.beta > 0.3);
    CHECK(report.head_fit.beta < 0.7);
}

TEST_CASE("exp series over a longer grid is consistent-with-exponential") {
    ScopedPrecision prec(256);
    auto report = measure(exp_oracle(), exp_config(), geometric_grid(25, 2, 5), 256);
    CHECK(report.verdict == Verdict::ConsistentWithExponential);
    CHECK(report.peak_onset_x.has_value());
    for (const auto& row : report.rows) {
        CHECK(row.peak_index > row.n_minus);
        CHECK(row.peak_index < row.n_plus);
    }
}

TEST_CASE("finite polynomial oracle is inconsistent") {
    ScopedPrecision prec(128);
    CoefficientOracle single = [](std::int64_t n) -> Real {
        return n == 0 ? Real(1) : Real(0);
    };
    auto cfg = exp_config();
    auto report = measure(single, cfg, geometric_grid(30, 2, 4), 128);
    for (const auto& row : report.rows) CHECK(row.head_ratio == 1);
    CHECK(report.verdict == Verdict::Inconsistent);
}

TEST_CASE("ratios sit in [0,1] and head+tail stay below one") {
    ScopedPrecision prec(192);
    auto report = measure(exp_oracle(), exp_config(), geometric_grid(20, 2, 5), 192);
    for (const auto& row : report.rows) {
        CHECK(row.head_ratio >= 0);
        CHECK(row.head_ratio <= 1);
        CHECK(row.tail_ratio >= 0);
        CHECK(row.tail_ratio <= 1);
        CHECK(row.head_ratio + row.tail_ratio <= Real(1) + ldexp(Real(1), -100));
    }
}

TEST_CASE("window monotonicity: larger C or smaller nu never increases the ratios") {
    ScopedPrecision prec(192);
    auto oracle = exp_oracle();
    auto grid = geometric_grid(20, 2, 5);
    auto base = exp_config();
    auto wider_c = window_transform(base, Real(2), base.window_nu).config;
    auto smaller_nu = window_transform(base, base.window_c, Real("0.125")).config;
    auto r0 = measure(oracle, base, grid, 192);
    auto r1 = measure(oracle, wider_c, grid, 192);
    auto r2 = measure(oracle, smaller_nu, grid, 192);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(r1.rows[i].head_ratio <= r0.rows[i].head_ratio);
        CHECK(r1.rows[i].tail_ratio <= r0.rows[i].tail_ratio);
        CHECK(r2.rows[i].head_ratio <= r0.rows[i].head_ratio);
        CHECK(r2.rows[i].tail_ratio <= r0.rows[i].tail_ratio);
    }
}

TEST_CASE("degenerate window that swallows the series is an error") {
    ScopedPrecision prec(128);
    ConcentrationConfig cfg;
    cfg.location = RealPolynomial::linear(Real(1));
    cfg.window_c = Real(1000000);
    cfg.window_nu = Real("0.01");
    CHECK_THROWS_AS(measure(exp_oracle(), cfg, geometric_grid(10, 2, 4), 128),
                    validation_error);
}

TEST_CASE("window transform directions") {
    auto cfg = exp_config();
    auto t1 = window_transform(cfg, Real(2), Real("0.2"));
    CHECK(t1.inherited);
    auto t2 = window_transform(cfg, Real(1), Real("0.4"));
    CHECK_FALSE(t2.inherited);
    auto t3 = window_transform(cfg, cfg.window_c, cfg.window_nu);
    CHECK(t3.inherited);
    CHECK_THROWS_AS(window_transform(cfg, Real(0), Real("0.2")), validation_error);
}

TEST_CASE("location equivalence compares degree and leading coefficient") {
    auto f = RealPolynomial::linear(Real(3));
    auto g = RealPolynomial({Real(7), Real(3)});
    CHECK(location_equivalence(f, g));
    CHECK_FALSE(location_equivalence(f, RealPolynomial::linear(Real(2))));
    auto q1 = RealPolynomial::monomial(Real(1), 2);
    auto q2 = RealPolynomial({Real(0), Real(1), Real(1)});
    CHECK(location_equivalence(q1, q2));
}

TEST_CASE("growth diagnostics on the exp oracle") {
    ScopedPrecision prec(256);
    auto diag = growth_diagnostics(exp_oracle(), exp_config(), geometric_grid(25, 2, 4),
                                   200, 256);
    CHECK(diag.target_cd_over_d == doctest::Approx(1.0));
    // log I(x)/x at x = 200 within 0.05 of 1.
    CHECK(abs(diag.rows.back().log_total_over_xd - 1) <= Real("0.05"));
    // (a_n Gamma(n+1))^(1/n) = 1 exactly up to working-precision rounding.
    for (const auto& [n, s] : diag.root_gamma)
        CHECK(abs(s - 1) <= ldexp(Real(1), -128));
    CHECK(diag.root_gamma_target == doctest::Approx(1.0));
}

TEST_CASE("weighted tails: weight one reduces to measure") {
    ScopedPrecision prec(192);
    auto grid = geometric_grid(50, 2, 4);
    WeightSequence ones{WeightSequence::Kind::Ones, 1, 1.0};
    auto table = weighted_tail_check(exp_oracle(), ones, exp_config(), grid, {1, 2, 4}, 192);
    auto report = measure(exp_oracle(), exp_config(), grid, 192);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(abs(table.rows[i].weighted_head_ratio - report.rows[i].head_ratio) <=
              ldexp(Real(1), -100));
    }
    for (bool ok : table.head_decreasing) CHECK(ok);
    for (bool ok : table.tail_decreasing) CHECK(ok);
}

TEST_CASE("weighted tails with log and log-cubed weights decay against x^p") {
    ScopedPrecision prec(256);
    // x^p r(x) with r ~ exp(-c sqrt(x)) only turns decreasing past
    // x ~ (2p/c)^2; the p = 8 probe needs the larger grid.
    auto grid = geometric_grid(50, 2, 4);
    WeightSequence logw{WeightSequence::Kind::LogPow, 1, 1.0};
    auto t1 = weighted_tail_check(exp_oracle(), logw, exp_config(), grid, {4}, 256);
    CHECK(t1.head_decreasing[0]);
    CHECK(t1.tail_decreasing[0]);

    auto big_grid = geometric_grid(400, 2, 4);
    WeightSequence log3{WeightSequence::Kind::LogPow, 3, 1.0};
    auto t2 = weighted_tail_check(exp_oracle(), log3, exp_config(), big_grid, {8}, 256);
    CHECK(t2.head_decreasing[0]);
    CHECK(t2.tail_decreasing[0]);
}

TEST_CASE("floor identities hold on random window samples") {
    SplitMix64 rng(314159);
    ScopedPrecision prec(128);
    const int kappas[] = {1, 2, 3, 5};
    for (int trial = 0; trial < 10000; ++trial) {
        double c1 = 0.1 + 5.0 * rng.next_unit();
        double c2 = 0.01 + 2.0 * rng.next_unit();
        double nu = 0.05 + 0.45 * rng.next_unit();
        double x = 1.0 + 500.0 * rng.next_unit();
        bool plus = rng.next() & 1;
        Real u = Real(c1) * x * (1 + (plus ? 1 : -1) * Real(c2) * pow(Real(x), -Real(nu)));
        if (u < 0) continue;
        int kappa = kappas[rng.next() % 4];
        std::int64_t lhs = floor_to_int64(Real(kappa) * u);
        std::int64_t rhs = floor_to_int64(u);
        CHECK(lhs >= kappa * rhs);
        CHECK(lhs < kappa * rhs + kappa);
    }
}

TEST_CASE("polynomial-weighted binary tails drop below 2^(-K/2)") {
    ScopedPrecision prec(512);
    for (int k : {64, 128, 256}) {
        Real sum = 0;
        for (int n = k + 1; n <= k + 3000; ++n)
            sum += pow(Real(n), 3) * ldexp(Real(1), -n);
        // Remainder past k + 3000 is far below the comparison slack.
        CHECK(sum < ldexp(Real(1), -k / 2));
    }
}

TEST_CASE("report serialization is stable and labelled") {
    ScopedPrecision prec(192);
    auto report = measure(exp_oracle(), exp_config(), geometric_grid(25, 2, 4), 192);
    auto csv1 = report.to_csv();
    auto csv2 = report.to_csv();
    CHECK(csv1 == csv2);
    CHECK(csv1.find("x,n_minus,n_plus,head_ratio,tail_ratio") == 0);
    auto j = report.to_json();
    CHECK(j["schema"] == "v1");
    CHECK(j["rows"].size() == 4);
}

}  // TEST_SUITE
