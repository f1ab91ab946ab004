#include <doctest.h>

#include "ferulam/collision.hpp"
#include "oracles.hpp"

using namespace ferulam;
using namespace ferulam::testing;

TEST_SUITE("collision") {

TEST_CASE("constant forcing has the closed-form impact time") {
    const ForcingSpec c = constant_spec(2.0);
    const auto res = solve_impact_time(c, TorusPoint{0.1, 0.9}, 3.0, 10.0);
    CHECK(res.root == doctest::Approx(3.0 + 0.2).epsilon(1e-15));
    CHECK(std::fabs(res.residual) <= 1e-12 * 2.0);
}

TEST_CASE("standard spec impact agrees with the bisection oracle") {
    const ForcingSpec spec = standard_spec();
    const TorusPoint omega{0.0, 0.0};
    const double oracle = oracle_impact_time(spec, omega, 0.0, 10.0);
    // frozen from an independent high-precision bisection of 10 t = 2 + 0.1 cos(2 pi t)
    CHECK(oracle == doctest::Approx(0.2029154440818984).epsilon(1e-13));
    const auto res = solve_impact_time(spec, omega, 0.0, 10.0);
    CHECK(std::fabs(res.root - oracle) < 1e-12);
    CHECK(std::fabs(res.residual) <= 1e-12 * std::max(1.0, spec.upper()));
}

TEST_CASE("bracket containment and monotone residual bracket on random inputs") {
    const ForcingSpec spec = standard_spec2();
    const RandomStream rng(61);
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const TorusPoint omega = random_point(rng, i, 2);
        const double t0 = rng.uniform(100000 + 2 * i, -5.0, 5.0);
        const double v0 = rng.uniform(100001 + 2 * i, 1.5 * spec.v_star_bound(), 100.0);
        const auto res = solve_impact_time(spec, omega, t0, v0);
        CHECK(res.root >= res.bracket_lo);
        CHECK(res.root <= res.bracket_hi);
        CHECK(res.bracket_lo == t0 + spec.lower() / v0);
        CHECK(res.bracket_hi == t0 + spec.upper() / v0);
        // g(lo) <= 0 <= g(hi) up to evaluation noise
        const OmegaCurve curve(spec, omega);
        const double g_lo = (res.bracket_lo - t0) * v0 - curve.value(res.bracket_lo);
        const double g_hi = (res.bracket_hi - t0) * v0 - curve.value(res.bracket_hi);
        CHECK(g_lo <= 1e-12);
        CHECK(g_hi >= -1e-12);
    }
}

TEST_CASE("below-threshold speeds are rejected") {
    const ForcingSpec spec = standard_spec();
    CHECK_THROWS_AS(solve_impact_time(spec, TorusPoint{0.0, 0.0}, 0.0, spec.v_star_bound()),
                    BelowThresholdError);
    CHECK_NOTHROW(
        solve_impact_time(spec, TorusPoint{0.0, 0.0}, 0.0, spec.v_star_bound() + 1e-6));
    CHECK_THROWS_AS(solve_tau(spec, TorusPoint{0.0, 0.0}, spec.energy_threshold()),
                    BelowThresholdError);
}

TEST_CASE("solve_tau: constant forcing closed form") {
    const ForcingSpec c = constant_spec(2.0);
    const double E0 = 8.0;
    const auto res = solve_tau(c, TorusPoint{0.5, 0.5}, E0);
    CHECK(res.root == doctest::Approx(2.0 / std::sqrt(2.0 * E0)).epsilon(1e-15));
    CHECK(std::fabs(res.residual) <= 1e-12);
}

TEST_CASE("solve_tau is the impact time seen from the advanced base point") {
    const ForcingSpec spec = standard_spec2();
    const RandomStream rng(67);
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const TorusPoint omega = random_point(rng, i, 2);
        const double t0 = rng.uniform(200000 + 2 * i, -3.0, 3.0);
        const double E0 = rng.uniform(200001 + 2 * i, 10.0, 1000.0);
        const double v0 = std::sqrt(2.0 * E0);
        const double t_tilde = solve_impact_time(spec, omega, t0, v0).root;
        const double tau = solve_tau(spec, flow_advance(omega, t0, spec.nu()), E0).root;
        CHECK(std::fabs(t_tilde - t0 - tau) < 1e-11);
    }
}

TEST_CASE("solve_tau high-energy asymptotics") {
    const ForcingSpec spec = standard_spec();
    const double E0 = 1e10;
    const TorusPoint omega0{0.0, 0.0};
    const auto res = solve_tau(spec, omega0, E0);
    CHECK(std::fabs(res.root * std::sqrt(2.0 * E0) - eval_P(spec, omega0)) < 1e-6);

    // general points converge at the D1 * tau rate
    const RandomStream rng(71);
    for (std::uint64_t i = 0; i < 100; ++i) {
        const TorusPoint w = random_point(rng, i, 2);
        const auto r = solve_tau(spec, w, E0);
        CHECK(std::fabs(r.root * std::sqrt(2.0 * E0) - eval_P(spec, w)) <=
              spec.d1() * r.root * 1.01 + 1e-12);
    }
}

TEST_CASE("root moves continuously with t0") {
    const ForcingSpec spec = standard_spec2();
    const RandomStream rng(73);
    const double h = 1e-8;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const TorusPoint omega = random_point(rng, i, 2);
        const double t0 = rng.uniform(300000 + 2 * i, -3.0, 3.0);
        const double v0 = rng.uniform(300001 + 2 * i, 1.5 * spec.v_star_bound(), 50.0);
        const double r0 = solve_impact_time(spec, omega, t0, v0).root;
        const double r1 = solve_impact_time(spec, omega, t0 + h, v0).root;
        const double lip = 1.0 + spec.d1() / (v0 - spec.d1());
        CHECK(std::fabs(r1 - r0) <= 2.0 * lip * h);
    }
}

TEST_CASE("iteration counts stay small") {
    const ForcingSpec spec = standard_spec2();
    const RandomStream rng(79);
    int worst = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const TorusPoint omega = random_point(rng, i, 2);
        const auto res = solve_impact_time(spec, omega, 0.0, 12.0);
        worst = std::max(worst, res.iterations);
    }
    CHECK(worst <= 60);
}

} // TEST_SUITE
