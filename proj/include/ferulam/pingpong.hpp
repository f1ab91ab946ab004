#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ferulam/collision.hpp"
#include "ferulam/forcing.hpp"

namespace ferulam {

/// Impact state in (time, outgoing speed) coordinates.
struct PhaseStateTV {
    double t;
    double v;
};

/// Impact state in (time, energy) coordinates, E = v^2/2.
struct PhaseStateTE {
    double t;
    double E;
};

/// State of the skew map on T^N x (0, inf).
struct SkewState {
    TorusPoint omega;
    double E;
};

/// Per-step byproducts of step_skew.
struct SkewStepDetail {
    double tau;
    double F;
    double G;
    double residual;
};

/// One application of the (t, v) successor map for the curve p:
/// impact t~ solves (t~ - t0) v0 = p(t~), then
/// v1 = v0 - 2 pdot(t~), t1 = t~ + p(t~)/v1.
template <ForcingCurveLike Curve>
PhaseStateTV step_tv_on(const Curve& p, const PhaseStateTV& s, SolveResult* solve = nullptr) {
    const double g_tol = 1e-12 * std::max(1.0, p.upper());
    const SolveResult res = solve_impact_kernel(p, s.t, s.v, g_tol);
    if (solve) *solve = res;
    const auto [pv, pd] = p.value_slope(res.root);
    const double v1 = s.v - 2.0 * pd;
    return {res.root + pv / v1, v1};
}

/// (t, E) form: E1 = (sqrt(E0) - sqrt(2) pdot(t~))^2, t1 = t~ + p(t~)/sqrt(2 E1).
template <ForcingCurveLike Curve>
PhaseStateTE step_te_on(const Curve& p, const PhaseStateTE& s, SolveResult* solve = nullptr) {
    const double v0 = std::sqrt(2.0 * s.E);
    const double g_tol = 1e-12 * std::max(1.0, p.upper());
    const SolveResult res = solve_impact_kernel(p, s.t, v0, g_tol);
    if (solve) *solve = res;
    const auto [pv, pd] = p.value_slope(res.root);
    const double root_E1 = std::sqrt(s.E) - std::sqrt(2.0) * pd;   // positive above v*
    const double E1 = root_E1 * root_E1;
    return {res.root + pv / std::sqrt(2.0 * E1), E1};
}

PhaseStateTV step_tv(const ForcingSpec& spec, const TorusPoint& omega, const PhaseStateTV& s);
PhaseStateTE step_te(const ForcingSpec& spec, const TorusPoint& omega, const PhaseStateTE& s);

/// Skew map f(omega, E) = (omega + psi(F), E + G) with
/// F = (1/sqrt(2 E0) + 1/sqrt(2 E1)) P(omega . tau),
/// G = -2 sqrt(2 E0) dP(omega . tau) + 2 dP(omega . tau)^2.
SkewState step_skew(const ForcingSpec& spec, const SkewState& s, SkewStepDetail* detail = nullptr);

enum class OrbitStatus : std::uint8_t { Completed, LeftDomain, Diverged };

/// Stepwise orbit iteration under the (t, E) map. Each step is taken at local
/// time 0 from the advanced base point omega . t_n (time-translation
/// equivariance of the map family), so the collision solve stays conditioned
/// independently of how far t_n has grown; t accumulates separately.
class OrbitWalker {
public:
    OrbitWalker(const ForcingSpec& spec, const TorusPoint& omega, const PhaseStateTE& s0)
        : spec_(&spec), base_(flow_advance(omega, s0.t, spec.nu())), state_(s0) {}

    /// One step; false when the solver failed (orbit diverged).
    bool step() {
        SolveResult solve;
        PhaseStateTE local;
        try {
            local = step_te_on(OmegaCurve(*spec_, base_), PhaseStateTE{0.0, state_.E}, &solve);
        } catch (const BelowThresholdError&) {
            return false;
        } catch (const NoConvergenceError&) {
            return false;
        }
        state_.t += local.t;
        state_.E = local.E;
        base_ = flow_advance(base_, local.t, spec_->nu());
        last_residual_ = solve.residual;
        return true;
    }

    const PhaseStateTE& state() const noexcept { return state_; }
    const TorusPoint& base() const noexcept { return base_; }
    double last_residual() const noexcept { return last_residual_; }
    /// W = P(omega . t)^2 E at the current state.
    double W() const {
        const double p = eval_P(*spec_, base_);
        return p * p * state_.E;
    }

private:
    const ForcingSpec* spec_;
    TorusPoint base_;
    PhaseStateTE state_;
    double last_residual_ = 0.0;
};

struct OrbitTrace {
    std::vector<PhaseStateTE> states;      // n_steps + 1 entries
    std::vector<double> tilde_residuals;   // per executed step
    std::vector<double> W_values;          // P(omega . t_i)^2 E_i per state
    OrbitStatus status = OrbitStatus::Completed;
    std::size_t stop_step = 0;             // steps executed when iteration ended
};

/// Iterates the (t, E) successor map from s0 until n_max steps or E <= E_floor.
/// Each step is taken at local time 0 from the advanced base point
/// omega . t_n (time-translation equivariance of the map family), which keeps
/// the collision solve conditioned independently of how far t_n has grown;
/// t accumulates separately.
OrbitTrace iterate(const ForcingSpec& spec, const TorusPoint& omega, const PhaseStateTE& s0,
                   std::size_t n_max, double E_floor);

/// Central-difference determinant of the Jacobian of step_te at s.
double jacobian_det_estimate(const ForcingSpec& spec, const TorusPoint& omega,
                             const PhaseStateTE& s, double h);

/// v1 of the non-injectivity construction: the unique speed at which the two
/// impact points share their successor time.
inline double noninjectivity_v1(double p1, double p2, double dt_tilde) {
    return (p1 - p2) / dt_tilde;
}

struct NonInjectivityExample {
    PeriodicForcing forcing;
    double t_tilde1, t_tilde2;   // distinct times where pdot attains its maximum
    double slope_max;            // that maximum
    double v1, v0;
    PhaseStateTV preimage1, preimage2;
    PhaseStateTV image1, image2;
    double image_diff;           // max over components of |image1 - image2|
    double preimage_separation;  // |t01 - t02|
};

/// Constructs a 1-periodic C^2 forcing whose slope attains its maximum at two
/// times with different plate positions, and two distinct impact states that
/// the (t, v) map sends to the same image. Throws ConstructionFailedError if
/// any of the construction's requirements fails verification.
NonInjectivityExample build_noninjectivity_example();

} // namespace ferulam
