#pragma once

// Test-only fixtures and independent oracles. The oracles deliberately avoid
// the library's root-finding and analytic-derivative paths so they can act as
// cross-checks for them.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ferulam/forcing.hpp"
#include "ferulam/rng.hpp"

namespace ferulam::testing {

inline const double kSqrt2 = std::sqrt(2.0);

/// nu = (1, sqrt 2), P = 2 + 0.1 cos(2 pi theta_1).
inline ForcingSpec standard_spec() {
    return ForcingSpec(FrequencyVector{1.0, kSqrt2}, 2.0, {{{1, 0}, 0.1, 0.0}});
}

/// Two-mode variant: adds 0.08 sin(2 pi theta_2).
inline ForcingSpec standard_spec2() {
    return ForcingSpec(FrequencyVector{1.0, kSqrt2}, 2.0,
                       {{{1, 0}, 0.1, 0.0}, {{0, 1}, 0.0, 0.08}});
}

inline ForcingSpec constant_spec(double c0 = 2.0) {
    return ForcingSpec(FrequencyVector{1.0, kSqrt2}, c0, {});
}

/// Plain bisection for increasing f with f(lo) <= 0 <= f(hi).
template <typename F>
double oracle_bisect(F&& f, double lo, double hi, int iters = 100) {
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Bisection root of (t - t0) v0 - p(t) on the certified bracket.
inline double oracle_impact_time(const ForcingSpec& spec, const TorusPoint& omega, double t0,
                                 double v0) {
    const auto g = [&](double t) { return (t - t0) * v0 - eval_p_omega(spec, omega, t).p; };
    return oracle_bisect(g, t0 + spec.lower() / v0, t0 + spec.upper() / v0);
}

template <typename F>
double central_diff(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Two-sided Kolmogorov-Smirnov statistic against U[0,1).
inline double ks_statistic(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = samples[i];
        d = std::max(d, std::fabs((i + 1) / n - cdf));
        d = std::max(d, std::fabs(cdf - i / n));
    }
    return d;
}

/// Haar point from a stream (test-local convenience).
inline TorusPoint random_point(const RandomStream& rng, std::uint64_t i, std::size_t dim) {
    std::array<double, kMaxTorusDim> th{};
    for (std::size_t j = 0; j < dim; ++j) th[j] = rng.uniform(i * dim + j);
    return TorusPoint(std::span<const double>(th.data(), dim));
}

} // namespace ferulam::testing
