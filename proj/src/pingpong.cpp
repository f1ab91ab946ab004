#include "ferulam/pingpong.hpp"

#include <cmath>
#include <numbers>

namespace ferulam {

PhaseStateTV step_tv(const ForcingSpec& spec, const TorusPoint& omega, const PhaseStateTV& s) {
    return step_tv_on(OmegaCurve(spec, omega), s);
}

PhaseStateTE step_te(const ForcingSpec& spec, const TorusPoint& omega, const PhaseStateTE& s) {
    return step_te_on(OmegaCurve(spec, omega), s);
}

SkewState step_skew(const ForcingSpec& spec, const SkewState& s, SkewStepDetail* detail) {
    const SolveResult res = solve_tau(spec, s.omega, s.E);
    const ForcingValues f = eval_p_omega(spec, s.omega, res.root);
    const double root_E1 = std::sqrt(s.E) - std::sqrt(2.0) * f.pdot;
    const double E1 = root_E1 * root_E1;
    const double F = (1.0 / std::sqrt(2.0 * s.E) + 1.0 / std::sqrt(2.0 * E1)) * f.p;
    if (detail) *detail = {res.root, F, E1 - s.E, res.residual};
    return {flow_advance(s.omega, F, spec.nu()), E1};
}

OrbitTrace iterate(const ForcingSpec& spec, const TorusPoint& omega, const PhaseStateTE& s0,
                   std::size_t n_max, double E_floor) {
    if (!(E_floor >= spec.energy_threshold()))
        throw ConfigError("iterate: E_floor must be >= v*^2/2");
    if (!(s0.E > E_floor)) throw ConfigError("iterate: initial energy must exceed E_floor");

    OrbitTrace trace;
    trace.states.reserve(n_max + 1);
    trace.tilde_residuals.reserve(n_max);
    trace.W_values.reserve(n_max + 1);

    OrbitWalker walker(spec, omega, s0);
    trace.states.push_back(s0);
    trace.W_values.push_back(walker.W());

    for (std::size_t n = 0; n < n_max; ++n) {
        if (!walker.step()) {
            trace.status = OrbitStatus::Diverged;
            trace.stop_step = n;
            return trace;
        }
        trace.states.push_back(walker.state());
        trace.tilde_residuals.push_back(walker.last_residual());
        trace.W_values.push_back(walker.W());
        if (walker.state().E <= E_floor) {
            trace.status = OrbitStatus::LeftDomain;
            trace.stop_step = n + 1;
            return trace;
        }
    }
    trace.status = OrbitStatus::Completed;
    trace.stop_step = n_max;
    return trace;
}

double jacobian_det_estimate(const ForcingSpec& spec, const TorusPoint& omega,
                             const PhaseStateTE& s, double h) {
    if (!(s.E - h > spec.energy_threshold()))
        throw BelowThresholdError("jacobian_det_estimate: E - h below threshold");
    const OmegaCurve curve(spec, omega);
    const auto tp = step_te_on(curve, {s.t + h, s.E});
    const auto tm = step_te_on(curve, {s.t - h, s.E});
    const auto ep = step_te_on(curve, {s.t, s.E + h});
    const auto em = step_te_on(curve, {s.t, s.E - h});
    const double dt_dt = (tp.t - tm.t) / (2.0 * h);
    const double dE_dt = (tp.E - tm.E) / (2.0 * h);
    const double dt_dE = (ep.t - em.t) / (2.0 * h);
    const double dE_dE = (ep.E - em.E) / (2.0 * h);
    return dt_dt * dE_dE - dt_dE * dE_dt;
}

NonInjectivityExample build_noninjectivity_example() {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;

    // pdot(t) = M - c (1 - cos 2pi(t - t1))(1 - cos 2pi(t - t2)) <= M with
    // equality exactly at t = t1, t2 (mod 1); M = c (1 + cos(2 pi (t2-t1))/2)
    // makes pdot mean-free so p is 1-periodic. Integrating gives p below.
    const double t1 = 0.1;
    const double t2 = 0.8;   // t2 - t1 in (1/2, 1) makes p(t1) > p(t2)
    const double c = 1.0;
    const double c0 = 2.0;
    const double delta = t2 - t1;
    const double slope_max = c * (1.0 + 0.5 * std::cos(kTwoPi * delta));

    // p(t) = c0 + (c/2pi)[sin 2pi(t-t1) + sin 2pi(t-t2)] - (c/8pi) sin 2pi(2t-t1-t2)
    const double a1 = -(c / kTwoPi) * (std::sin(kTwoPi * t1) + std::sin(kTwoPi * t2));
    const double b1 = (c / kTwoPi) * (std::cos(kTwoPi * t1) + std::cos(kTwoPi * t2));
    const double a2 = (c / (4.0 * kTwoPi)) * std::sin(kTwoPi * (t1 + t2));
    const double b2 = -(c / (4.0 * kTwoPi)) * std::cos(kTwoPi * (t1 + t2));
    PeriodicForcing forcing(c0, {{1, a1, b1}, {2, a2, b2}}, slope_max);

    // verify the maximum structure on a dense grid and at t1, t2
    const int grid = 20000;
    double grid_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i)
        grid_max = std::max(grid_max, forcing.slope(static_cast<double>(i) / grid));
    if (grid_max > slope_max + 1e-9)
        throw ConstructionFailedError("noninjectivity: slope exceeds the declared maximum");
    if (std::fabs(forcing.slope(t1) - slope_max) > 1e-9 ||
        std::fabs(forcing.slope(t2) - slope_max) > 1e-9)
        throw ConstructionFailedError("noninjectivity: slope maximum not attained at t1, t2");

    const double p1 = forcing.value(t1);
    const double p2 = forcing.value(t2);
    if (!(p1 > p2)) throw ConstructionFailedError("noninjectivity: requires p(t1) > p(t2)");

    NonInjectivityExample ex{forcing, t1, t2, slope_max, 0, 0, {}, {}, {}, {}, 0, 0};
    ex.v1 = noninjectivity_v1(p1, p2, t2 - t1);
    if (!(ex.v1 > 0.0)) throw ConstructionFailedError("noninjectivity: v1 must be positive");
    ex.v0 = ex.v1 + 2.0 * slope_max;

    // t0i = t_i - p(t_i)/v0 puts the impact of (t0i, v0) exactly at t_i
    ex.preimage1 = {t1 - p1 / ex.v0, ex.v0};
    ex.preimage2 = {t2 - p2 / ex.v0, ex.v0};
    if (!(ex.preimage1.t < ex.preimage2.t))
        throw ConstructionFailedError("noninjectivity: expected t01 < t02");

    ex.image1 = step_tv_on(forcing, ex.preimage1);
    ex.image2 = step_tv_on(forcing, ex.preimage2);
    ex.image_diff = std::max(std::fabs(ex.image1.t - ex.image2.t),
                             std::fabs(ex.image1.v - ex.image2.v));
    ex.preimage_separation = std::fabs(ex.preimage1.t - ex.preimage2.t);
    if (ex.image_diff > 1e-9)
        throw ConstructionFailedError("noninjectivity: images differ by more than 1e-9");
    return ex;
}

} // namespace ferulam
