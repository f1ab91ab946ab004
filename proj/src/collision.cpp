#include "ferulam/collision.hpp"

namespace ferulam {

SolveResult solve_impact_time(const ForcingSpec& spec, const TorusPoint& omega, double t0,
                              double v0) {
    const OmegaCurve curve(spec, omega);
    const double g_tol = 1e-12 * std::max(1.0, spec.upper());
    return solve_impact_kernel(curve, t0, v0, g_tol);
}

SolveResult solve_tau(const ForcingSpec& spec, const TorusPoint& omega0, double E0) {
    if (!(E0 > spec.energy_threshold()))
        throw BelowThresholdError("solve_tau: E0 = " + std::to_string(E0) +
                                  " not above v*^2/2 = " +
                                  std::to_string(spec.energy_threshold()));
    const double v0 = std::sqrt(2.0 * E0);
    const OmegaCurve curve(spec, omega0);
    SolveResult res = solve_impact_kernel(curve, 0.0, v0, 1e-12 * v0);
    res.residual /= v0;   // report the fixed-point residual tau - P/v0
    const double cond = 1.0 - curve.slope(res.root) / v0;
    if (!(cond >= 0.5 - 1e-9))
        throw NoConvergenceError("solve_tau: implicit-function condition 1 - pdot/v0 >= 1/2 "
                                 "violated at the root (got " +
                                 std::to_string(cond) + ")");
    return res;
}

} // namespace ferulam
