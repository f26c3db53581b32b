#include <doctest.h>

#include <cmath>

#include "qperiod/catalog.hpp"
#include "qperiod/series.hpp"

#include "test_util.hpp"

using namespace qp;
using namespace qptest;

namespace {

// a_n = 1/n! at ambient precision, factorials cached across calls.
CoefficientOracle exp_oracle() {
    auto cache = std::make_shared<std::vector<Real>>(1, Real(1));
    return [cache](std::int64_t n) -> Real {
        while (static_cast<std::int64_t>(cache->size()) <= n)
            cache->push_back(cache->back() * static_cast<std::int64_t>(cache->size()));
        return 1 / (*cache)[static_cast<std::size_t>(n)];
    };
}

}  // namespace

TEST_SUITE("series") {

TEST_CASE("quantum period of p1") {
    auto f = unit_poly(1, {{1}, {-1}});
    auto seq = quantum_period(f, 8);
    CHECK(seq.g[0] == 1);
    CHECK(seq.g[1] == 0);
    CHECK(seq.g[2] == 1);                 // 2/2!
    CHECK(seq.g[4] == Rational(1, 4));    // 6/4!
    CHECK(seq.index_r == 2);
    CHECK(seq.regularized[6] == 20);
}

TEST_CASE("quantum period of p2") {
    auto f = unit_poly(2, {{1, 0}, {0, 1}, {-1, -1}});
    auto seq = quantum_period(f, 9);
    CHECK(seq.g[3] == 1);                 // 6/3!
    CHECK(seq.g[6] == Rational(1, 8));    // 90/6!
    CHECK(seq.index_r == 3);
}

TEST_CASE("quantum period rejects non-convenient models") {
    auto segment = unit_poly(2, {{1, 0}, {0, 1}});
    CHECK_THROWS_AS(quantum_period(segment, 10), validation_error);
}

TEST_CASE("catalog G_1 vanishes and n!G_n is integral") {
    for (const auto& entry : catalog()) {
        auto seq = quantum_period(entry.model, 24);
        CHECK(seq.g[0] == 1);
        CHECK(seq.g[1] == 0);
        for (const auto& c : seq.regularized) {
            CHECK(c >= 0);
            CHECK(denominator(c) == 1);
        }
        for (int n = 0; n <= seq.n_max; ++n)
            if (n % seq.index_r != 0) CHECK(seq.g[static_cast<std::size_t>(n)] == 0);
        // Catalog anchors regenerate exactly.
        for (const auto& [n, cst] : entry.first_regularized)
            CHECK(seq.regularized[static_cast<std::size_t>(n)] == parse_rational(cst));
    }
}

TEST_CASE("index divisibility holds out to n = 120") {
    for (const auto& entry : catalog()) {
        auto cst = cst_sequence(entry.model, 120);
        int r = detect_index(cst);
        for (int n = 1; n <= 120; ++n)
            if (n % r != 0) CHECK(cst[static_cast<std::size_t>(n)] == 0);
    }
}

TEST_CASE("t_a_con estimates: p1 within 1e-3, p2 within 1e-2") {
    ScopedPrecision prec(256);
    auto p1 = quantum_period(unit_poly(1, {{1}, {-1}}), 400);
    auto est1 = estimate_t_a_con(p1);
    CHECK(abs(est1.value - 2) < Real(1e-3));
    CHECK(est1.agreement_gap < 1e-2);

    auto p2 = quantum_period(unit_poly(2, {{1, 0}, {0, 1}, {-1, -1}}), 300);
    auto est2 = estimate_t_a_con(p2);
    CHECK(abs(est2.value - 3) < Real(1e-2));
    CHECK(est2.agreement_gap < 1e-2);
}

TEST_CASE("t_a_con estimation needs enough nonzero coefficients") {
    auto seq = quantum_period(unit_poly(1, {{1}, {-1}}), 10);
    CHECK_THROWS_AS(estimate_t_a_con(seq), validation_error);
}

TEST_CASE("root-test sequence enters the 3 percent band on p2") {
    ScopedPrecision prec(256);
    auto seq = quantum_period(unit_poly(2, {{1, 0}, {0, 1}, {-1, -1}}), 300);
    for (int n = 180; n <= 300; n += 3) {
        Real rho = exp(log(to_real(seq.regularized[static_cast<std::size_t>(n)])) / n);
        CHECK(rho >= Real(3) * Real("0.97"));
        CHECK(rho <= Real(3) * Real("1.03"));
    }
}

TEST_CASE("evaluate sums exp(1) to full precision") {
    ScopedPrecision prec(256);
    auto ev = evaluate(exp_oracle(), Real(1), 256);
    Real e = exp(Real(1));
    CHECK(abs(ev.total - e) <= ldexp(e, -200));
    CHECK(ev.truncation_bound <= ldexp(ev.total, -250));
    CHECK(ev.peak_index == 1);  // terms 1, 1, 1/2, ... tie resolves upward
}

TEST_CASE("evaluate finds the peak of exp at x = 100") {
    ScopedPrecision prec(256);
    auto ev = evaluate(exp_oracle(), Real(100), 256);
    CHECK(ev.peak_index == 100);
    Real expected = exp(Real(100));
    CHECK(abs(ev.total - expected) <= ldexp(expected, -180));
}

TEST_CASE("evaluate handles a single-coefficient series") {
    CoefficientOracle one = [](std::int64_t n) -> Real { return n == 0 ? Real(1) : Real(0); };
    auto ev = evaluate(one, Real(50), 128);
    CHECK(ev.total == 1);
    CHECK(ev.peak_index == 0);
    CHECK(ev.truncation_bound == 0);
    CHECK(ev.head_mass(0) == 1);
    CHECK(ev.tail_mass(1) == 0);
}

TEST_CASE("evaluate refuses negative oracles and divergent caps") {
    CoefficientOracle neg = [](std::int64_t n) -> Real { return n == 3 ? Real(-1) : Real(1); };
    CHECK_THROWS_AS(evaluate(neg, Real(1), 128), validation_error);

    CoefficientOracle growing = [](std::int64_t) -> Real { return Real(1); };
    TruncationPolicy tight;
    tight.max_terms = 500;
    CHECK_THROWS_AS(evaluate(growing, Real(2), 128, tight), uncertified_error);
}

TEST_CASE("prefix queries split head and tail consistently") {
    ScopedPrecision prec(192);
    auto ev = evaluate(exp_oracle(), Real(10), 192);
    Real head = ev.head_mass(9);
    Real tail = ev.tail_mass(10);
    CHECK(abs(head + tail - ev.total) <= 2 * ev.truncation_bound + ldexp(ev.total, -150));
    CHECK(ev.head_mass(5) <= ev.head_mass(6));
    CHECK(ev.tail_mass(5) >= ev.tail_mass(6));
}

TEST_CASE("period oracle matches the exact sequence") {
    ScopedPrecision prec(256);
    auto f = unit_poly(2, {{1, 0}, {0, 1}, {-1, -1}});
    PeriodOracle oracle(f, 256);
    auto seq = quantum_period(f, 30);
    for (int n = 0; n <= 30; ++n) {
        Real expect = to_real(seq.g[static_cast<std::size_t>(n)]);
        CHECK(abs(oracle(n) - expect) <= ldexp(abs(expect) + 1, -250));
    }
}

TEST_CASE("regularized p1 period grows like exp(2t)") {
    ScopedPrecision prec(256);
    auto f = unit_poly(1, {{1}, {-1}});
    PeriodOracle oracle(f, 256);
    auto ev = evaluate(oracle.as_oracle(), Real(200), 256);
    Real ratio = log(ev.total) / 200;
    CHECK(abs(ratio - 2) <= Real("0.15"));
}

TEST_CASE("substitution check: log against exp-series") {
    ScopedPrecision prec(256);
    WeightSequence ones{WeightSequence::Kind::Ones, 1, 1.0};
    SlowlyVaryingFn logfn{SlowlyVaryingFn::Kind::LogPow, 1, 1.0};
    auto loc = RealPolynomial::linear(Real(1));
    std::vector<Real> grid{Real(100), Real(1000)};
    auto check = substitution_check(exp_oracle(), ones, logfn, loc, grid, 256);
    REQUIRE(check.rows.size() == 2);
    CHECK(check.rows[1].discrepancy <= Real("0.02"));
    CHECK(check.decreasing);
}

TEST_CASE("substitution check: constant g is exact") {
    ScopedPrecision prec(128);
    WeightSequence ones{WeightSequence::Kind::Ones, 1, 1.0};
    SlowlyVaryingFn constant{SlowlyVaryingFn::Kind::Constant, 1, 1.0};
    auto loc = RealPolynomial::linear(Real(1));
    std::vector<Real> grid{Real(10), Real(50)};
    auto check = substitution_check(exp_oracle(), ones, constant, loc, grid, 128);
    for (const auto& row : check.rows) CHECK(row.discrepancy == 0);
}

TEST_CASE("substitution check: squared log decreasing over the grid") {
    ScopedPrecision prec(256);
    WeightSequence ones{WeightSequence::Kind::Ones, 1, 1.0};
    SlowlyVaryingFn log2fn{SlowlyVaryingFn::Kind::LogPow, 2, 1.0};
    auto loc = RealPolynomial::linear(Real(1));
    std::vector<Real> grid{Real(100), Real(1000), Real(10000)};
    auto check = substitution_check(exp_oracle(), ones, log2fn, loc, grid, 256);
    CHECK(check.decreasing);
}

}  // TEST_SUITE
