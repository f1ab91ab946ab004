#pragma once

#include <cmath>
#include <string>

#include "ferulam/errors.hpp"
#include "ferulam/forcing.hpp"

namespace ferulam {

struct SolveResult {
    double root = 0.0;
    double residual = 0.0;   // g-residual for impact time, fixed-point residual for tau
    int iterations = 0;
    double bracket_lo = 0.0; // initial certified bracket
    double bracket_hi = 0.0;
};

constexpr int kSolveMaxIter = 200;

/// Root of g(t) = (t - t0) v0 - p(t) on [t0 + a/v0, t0 + b/v0].
/// g is strictly increasing there (g' = v0 - pdot >= v0 - sup pdot > 0 under
/// the v* precondition), so the bracket pins the unique root. Newton steps are
/// kept inside the shrinking bracket; a bisection step replaces any Newton
/// step that exits it or meets |g'| < v0/2.
template <ForcingCurveLike Curve>
SolveResult solve_impact_kernel(const Curve& p, double t0, double v0, double g_tol) {
    const double v_star = 2.0 * std::max(p.slope_sup(), 0.0);
    if (!(v0 > v_star))
        throw BelowThresholdError("solve_impact: v0 = " + std::to_string(v0) +
                                  " not above v* = " + std::to_string(v_star));
    const double lo0 = t0 + p.lower() / v0;
    const double hi0 = t0 + p.upper() / v0;
    double lo = lo0, hi = hi0;
    double t = 0.5 * (lo + hi);
    for (int iter = 1; iter <= kSolveMaxIter; ++iter) {
        const auto [pv, pd] = p.value_slope(t);
        const double g = (t - t0) * v0 - pv;
        if (std::fabs(g) <= g_tol) return {t, g, iter, lo0, hi0};
        if (g < 0.0)
            lo = t;
        else
            hi = t;
        const double gp = v0 - pd;
        double next = t - g / gp;
        if (std::fabs(gp) < 0.5 * v0 || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
        t = next;
    }
    throw NoConvergenceError("solve_impact: residual tolerance unmet after " +
                             std::to_string(kSolveMaxIter) + " iterations");
}

/// Impact time t~ for the forcing p_omega: (t~ - t0) v0 = p_omega(t~).
/// Residual tolerance 1e-12 * max(1, b). Throws BelowThresholdError unless
/// v0 exceeds the certified v* bound.
SolveResult solve_impact_time(const ForcingSpec& spec, const TorusPoint& omega, double t0,
                              double v0);

/// tau(omega0, E0): root of tau = (2 E0)^{-1/2} P(omega0 + psi(tau)).
/// SolveResult.residual holds the fixed-point residual (<= 1e-12). The
/// implicit-function condition 1 - (2E0)^{-1/2} dP/dpsi >= 1/2 is re-checked
/// at the root. Requires E0 > v*^2/2.
SolveResult solve_tau(const ForcingSpec& spec, const TorusPoint& omega0, double E0);

} // namespace ferulam
