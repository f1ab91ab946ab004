#include <doctest.h>

#include "ferulam/pingpong.hpp"
#include "oracles.hpp"

using namespace ferulam;
using namespace ferulam::testing;

TEST_SUITE("pingpong") {

TEST_CASE("constant forcing bounces freely") {
    const ForcingSpec c = constant_spec(2.0);
    const TorusPoint omega{0.2, 0.6};
    const auto tv = step_tv(c, omega, {1.0, 10.0});
    CHECK(tv.v == 10.0);
    CHECK(tv.t == doctest::Approx(1.0 + 0.4).epsilon(1e-15));

    const auto te = step_te(c, omega, {1.0, 50.0});
    CHECK(te.E == doctest::Approx(50.0).epsilon(1e-15));
    CHECK(te.t == doctest::Approx(1.0 + 4.0 / std::sqrt(100.0)).epsilon(1e-14));
}

TEST_CASE("standard spec step matches the oracle composition") {
    const ForcingSpec spec = standard_spec();
    const TorusPoint omega{0.0, 0.0};
    const double t_tilde = oracle_impact_time(spec, omega, 0.0, 10.0);
    const auto f = eval_p_omega(spec, omega, t_tilde);
    const double v1_oracle = 10.0 - 2.0 * f.pdot;
    const double t1_oracle = t_tilde + f.p / v1_oracle;
    // frozen from the independent bisection of 10 t = 2 + 0.1 cos(2 pi t)
    CHECK(v1_oracle == doctest::Approx(11.202045347913109).epsilon(1e-13));
    CHECK(t1_oracle == doctest::Approx(0.3840568676163966).epsilon(1e-13));

    const auto tv = step_tv(spec, omega, {0.0, 10.0});
    CHECK(std::fabs(tv.t - t1_oracle) < 1e-11);
    CHECK(std::fabs(tv.v - v1_oracle) < 1e-11);
}

TEST_CASE("time ordering t0 < t~ < t1") {
    const ForcingSpec spec = standard_spec2();
    const RandomStream rng(83);
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const TorusPoint omega = random_point(rng, i, 2);
        const double t0 = rng.uniform(100000 + 2 * i, -5.0, 5.0);
        const double v0 = rng.uniform(100001 + 2 * i, 1.2 * spec.v_star_bound(), 60.0);
        const auto solve = solve_impact_time(spec, omega, t0, v0);
        const auto tv = step_tv(spec, omega, {t0, v0});
        CHECK(t0 < solve.root);
        CHECK(solve.root < tv.t);
        CHECK(tv.v > 0.0);
    }
}

TEST_CASE("te and tv coordinates are conjugate") {
    const ForcingSpec spec = standard_spec2();
    const RandomStream rng(89);
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const TorusPoint omega = random_point(rng, i, 2);
        const double t0 = rng.uniform(200000 + 2 * i, -5.0, 5.0);
        const double E0 = rng.uniform(200001 + 2 * i, 10.0, 1000.0);
        const auto te = step_te(spec, omega, {t0, E0});
        const auto tv = step_tv(spec, omega, {t0, std::sqrt(2.0 * E0)});
        CHECK(std::fabs(te.t - tv.t) < 1e-10);
        CHECK(std::fabs(te.E - 0.5 * tv.v * tv.v) < 1e-10 * std::max(1.0, E0));
    }
}

TEST_CASE("energy update is a perfect square") {
    const RandomStream rng(97);
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const double E0 = rng.uniform(3 * i, 1.0, 1e6);
        const double pdot = rng.uniform(3 * i + 1, -2.0, 2.0);
        if (std::sqrt(2.0 * E0) <= 2.0 * pdot) continue;
        const double expanded = E0 - 2.0 * std::sqrt(2.0 * E0) * pdot + 2.0 * pdot * pdot;
        const double root = std::sqrt(E0) - std::sqrt(2.0) * pdot;
        const double squared = root * root;
        CHECK(std::fabs(expanded - squared) <= 8.0 * std::numeric_limits<double>::epsilon() *
                                                   std::max(1.0, squared));
        CHECK(squared > 0.0);
    }
}

TEST_CASE("skew map on constant forcing") {
    const ForcingSpec c = constant_spec(2.0);
    SkewStepDetail detail;
    const SkewState s1 = step_skew(c, {TorusPoint{0.1, 0.2}, 50.0}, &detail);
    CHECK(std::fabs(detail.G) <= 1e-13);
    CHECK(detail.F == doctest::Approx(4.0 / std::sqrt(100.0)).epsilon(1e-13));
    const TorusPoint expected = flow_advance(TorusPoint{0.1, 0.2}, detail.F, c.nu());
    CHECK(s1.omega.dist(expected) == 0.0);
}

TEST_CASE("semiconjugacy: skew step equals planar step pushed to the torus") {
    const ForcingSpec spec = standard_spec2();
    const RandomStream rng(101);
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const TorusPoint omega = random_point(rng, i, 2);
        const double t0 = rng.uniform(300000 + 2 * i, -5.0, 5.0);
        const double E0 = rng.uniform(300001 + 2 * i, 10.0, 1000.0);
        const auto te = step_te(spec, omega, {t0, E0});
        const SkewState sk = step_skew(spec, {flow_advance(omega, t0, spec.nu()), E0});
        CHECK(std::fabs(sk.E - te.E) < 1e-10 * std::max(1.0, E0));
        CHECK(sk.omega.dist(flow_advance(omega, te.t, spec.nu())) < 1e-10);
    }
}

TEST_CASE("semiconjugacy along whole orbits") {
    // high-energy orbits: in the strongly chaotic low-E band any two
    // algebraically equal routes decorrelate exponentially from float noise
    const ForcingSpec spec = standard_spec2();
    const RandomStream rng(103);
    for (std::uint64_t orbit = 0; orbit < 10; ++orbit) {
        const TorusPoint omega = random_point(rng, orbit, 2);
        const double t0 = rng.uniform(400000 + 2 * orbit, 0.0, 1.0);
        const double E0 = rng.uniform(400001 + 2 * orbit, 1e3, 1e4);
        PhaseStateTE planar{t0, E0};
        SkewState skew{flow_advance(omega, t0, spec.nu()), E0};
        for (int n = 1; n <= 1000; ++n) {
            planar = step_te(spec, omega, planar);
            skew = step_skew(spec, skew);
            CHECK(std::fabs(planar.E - skew.E) < 1e-8 * n);
        }
    }
}

TEST_CASE("iterate: constant forcing completes with constant energy") {
    const ForcingSpec c = constant_spec(2.0);
    const auto trace = iterate(c, TorusPoint{0.0, 0.0}, {0.0, 50.0}, 100, 1.0);
    CHECK(trace.status == OrbitStatus::Completed);
    CHECK(trace.stop_step == 100);
    REQUIRE(trace.states.size() == 101);
    REQUIRE(trace.W_values.size() == 101);
    REQUIRE(trace.tilde_residuals.size() == 100);
    for (const auto& s : trace.states) CHECK(s.E == doctest::Approx(50.0).epsilon(1e-12));
    for (const double w : trace.W_values) CHECK(w == doctest::Approx(200.0).epsilon(1e-12));
}

TEST_CASE("iterate: batch residuals stay tiny") {
    const ForcingSpec spec = standard_spec2();
    const RandomStream rng(107);
    double worst = 0.0;
    for (std::uint64_t orbit = 0; orbit < 1000; ++orbit) {
        const TorusPoint omega = random_point(rng, orbit, 2);
        const double E0 = rng.uniform(500000 + orbit, 20.0, 200.0);
        const auto trace = iterate(spec, omega, {0.0, E0}, 1000, spec.energy_threshold() * 1.01);
        for (const double r : trace.tilde_residuals) worst = std::max(worst, std::fabs(r));
        if (trace.status == OrbitStatus::Completed) {
            CHECK(trace.states.size() == 1001);
        } else {
            CHECK(trace.status == OrbitStatus::LeftDomain);
            CHECK(trace.states.back().E <= spec.energy_threshold() * 1.01);
        }
    }
    CHECK(worst < 1e-11);
}

TEST_CASE("iterate: LeftDomain exactly when energy hits the floor") {
    const ForcingSpec spec = standard_spec2();
    const RandomStream rng(109);
    int left = 0;
    for (std::uint64_t orbit = 0; orbit < 200; ++orbit) {
        const TorusPoint omega = random_point(rng, orbit, 2);
        const double E_floor = 28.0;   // just below the sampled initial energies
        const auto trace = iterate(spec, omega, {0.0, 30.0}, 500, E_floor);
        if (trace.status == OrbitStatus::LeftDomain) {
            ++left;
            CHECK(trace.states.back().E <= E_floor);
            for (std::size_t i = 0; i + 1 < trace.states.size(); ++i)
                CHECK(trace.states[i].E > E_floor);
        } else {
            REQUIRE(trace.status == OrbitStatus::Completed);
            for (const auto& s : trace.states) CHECK(s.E > E_floor);
        }
    }
    CHECK(left > 0);   // the floor sits close enough that some orbits must exit
}

TEST_CASE("iterate rejects a floor below the solvable threshold") {
    const ForcingSpec spec = standard_spec2();
    CHECK_THROWS_AS(iterate(spec, TorusPoint{0.0, 0.0}, {0.0, 50.0}, 10, 0.5), ConfigError);
}

TEST_CASE("time-translation equivariance along orbits") {
    const ForcingSpec spec = standard_spec2();
    const RandomStream rng(113);
    for (std::uint64_t i = 0; i < 50; ++i) {
        const TorusPoint omega = random_point(rng, i, 2);
        const double s = rng.uniform(600000 + 3 * i, -10.0, 10.0);
        const double t0 = rng.uniform(600001 + 3 * i, 0.0, 1.0);
        const double E0 = rng.uniform(600002 + 3 * i, 50.0, 500.0);
        PhaseStateTE a{t0 + s, E0};                       // under f_omega
        PhaseStateTE b{t0, E0};                           // under f_{omega . s}
        const TorusPoint omega_s = flow_advance(omega, s, spec.nu());
        for (int n = 0; n < 50; ++n) {
            a = step_te(spec, omega, a);
            b = step_te(spec, omega_s, b);
            CHECK(std::fabs(a.t - s - b.t) < 1e-9);
            CHECK(std::fabs(a.E - b.E) < 1e-9 * std::max(1.0, E0));
        }
    }
}

TEST_CASE("jacobian determinant: constant forcing is an exact shear") {
    const ForcingSpec c = constant_spec(2.0);
    const double det = jacobian_det_estimate(c, TorusPoint{0.3, 0.3}, {0.0, 50.0}, 1e-6);
    CHECK(std::fabs(det - 1.0) < 1e-8);
}

TEST_CASE("jacobian determinant near 1 for the standard spec") {
    const ForcingSpec spec = standard_spec2();
    const RandomStream rng(127);
    double mean = 0.0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        const TorusPoint omega = random_point(rng, i, 2);
        const double t0 = rng.uniform(700000 + 2 * i, -2.0, 2.0);
        const double det = jacobian_det_estimate(spec, omega, {t0, 50.0}, 1e-6);
        mean += std::fabs(det - 1.0);
        CHECK(std::fabs(det - 1.0) < 1e-3);
    }
    CHECK(mean / n < 1e-5);
}

TEST_CASE("jacobian determinant stable across h") {
    const ForcingSpec spec = standard_spec2();
    const TorusPoint omega{0.37, 0.81};
    const PhaseStateTE s{0.4, 120.0};
    const double d5 = jacobian_det_estimate(spec, omega, s, 1e-5);
    const double d6 = jacobian_det_estimate(spec, omega, s, 1e-6);
    const double d7 = jacobian_det_estimate(spec, omega, s, 1e-7);
    CHECK(std::fabs(d5 - d6) < 1e-4);
    CHECK(std::fabs(d6 - d7) < 1e-4);
}

TEST_CASE("noninjectivity v1 formula") {
    CHECK(noninjectivity_v1(2.2, 2.0, 1.0) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("noninjectivity construction produces a genuine collision") {
    const auto ex = build_noninjectivity_example();
    CHECK(ex.image_diff < 1e-9);
    CHECK(ex.preimage_separation > 1e-3);
    CHECK(ex.preimage1.t < ex.preimage2.t);
    CHECK(ex.preimage1.v == ex.preimage2.v);
    CHECK(ex.forcing.value(ex.t_tilde1) > ex.forcing.value(ex.t_tilde2));
    CHECK(ex.v0 > 2.0 * ex.slope_max);

    // images computed here again, straight through the map
    const auto i1 = step_tv_on(ex.forcing, ex.preimage1);
    const auto i2 = step_tv_on(ex.forcing, ex.preimage2);
    CHECK(std::fabs(i1.t - i2.t) < 1e-9);
    CHECK(std::fabs(i1.v - i2.v) < 1e-9);
}

} // TEST_SUITE
