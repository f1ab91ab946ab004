#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ferulam/forcing.hpp"
#include "ferulam/pingpong.hpp"
#include "ferulam/rng.hpp"

namespace ferulam {

/// Adiabatic invariant W(omega, E) = P(omega)^2 E; a^2 E <= W <= b^2 E.
double eval_W(const ForcingSpec& spec, const TorusPoint& omega, double E);

/// Closed-form upper bound for the drift modulus:
/// Delta(E0) = E0^{-1/2} (1 + C * D3), where D3 is the Lipschitz constant of
/// the second flow derivative along the flow.
double delta_modulus(const ForcingSpec& spec, double E0, double C);

struct DriftRecord {
    double E0;
    double drift;         // |p(t1)^2 E1 - p(t0)^2 E0| over one step
    double delta_bound;   // Delta(E0)
};

/// One step of the (t, E) map from s, recording the W drift against Delta(E0).
DriftRecord measure_drift(const ForcingSpec& spec, const TorusPoint& omega,
                          const PhaseStateTE& s, double C);

/// Empirical drift constant: max over samples of drift / Delta(E0), with
/// omega Haar-sampled and E0 log-uniform over [E_lo, E_hi]. Deterministic
/// given the seed for any worker count.
double estimate_drift_constant(const ForcingSpec& spec, std::size_t n_samples, double E_lo,
                               double E_hi, double C, std::uint64_t seed, int workers = 0);

/// Plain-loop reference for estimate_drift_constant; agrees exactly.
double estimate_drift_constant_serial(const ForcingSpec& spec, std::size_t n_samples,
                                      double E_lo, double E_hi, double C, std::uint64_t seed);

/// Variant with a fixed omega; samples t0 uniform in [0, 1000) instead.
double estimate_drift_constant_at(const ForcingSpec& spec, const TorusPoint& omega,
                                  std::size_t n_samples, double E_lo, double E_hi, double C,
                                  std::uint64_t seed);

struct DriftDecade {
    double E_lo, E_hi;
    double E_mid;        // geometric midpoint
    double max_drift;
    double max_ratio;    // max drift / Delta
    std::size_t n;
};

struct DriftScalingReport {
    std::vector<DriftDecade> decades;
    std::vector<DriftRecord> sample_records;   // first few per decade, for CSV export
    double slope = 0.0;      // log10(max drift) vs log10(E0) least squares
    double intercept = 0.0;
    double r2 = 0.0;
    double c_hat = 0.0;      // max ratio over all samples
};

/// Per-decade maxima of the one-step drift over [E_lo, E_hi] with a log-log
/// least-squares fit of max drift against energy.
DriftScalingReport drift_scaling(const ForcingSpec& spec, std::size_t n_per_decade, double E_lo,
                                 double E_hi, double C, std::uint64_t seed, int workers = 0,
                                 std::size_t keep_records_per_decade = 16);

/// Recurrence bands: W_j = W0 j^4, eps_j = eps0 j^{-3/2}, j = 1..j_max.
/// This pair satisfies sum eps_j < inf, W_j -> inf and
/// eps_j^{-1} k(W_j / (4 delta)) -> 0 for k(r) = r^{-1/2}.
class BandFamily {
public:
    BandFamily(double W0, double eps0, int j_max);

    double W(int j) const { return W0_ * std::pow(static_cast<double>(j), 4); }
    double eps(int j) const { return eps0_ * std::pow(static_cast<double>(j), -1.5); }
    int j_max() const noexcept { return j_max_; }
    double W0() const noexcept { return W0_; }
    double eps0() const noexcept { return eps0_; }

    /// Partial sum of the halfwidths (bounded by eps0 * zeta(3/2)).
    double eps_sum() const;

private:
    double W0_, eps0_;
    int j_max_;
};

/// All (step, j) pairs where the trace's W value lies in band j.
std::vector<std::pair<std::size_t, int>> band_hits(const OrbitTrace& trace,
                                                   const BandFamily& bands);

/// Lebesgue measure of the E-section of band j at omega: 2 eps_j / P(omega)^2.
double band_section_measure(const ForcingSpec& spec, const TorusPoint& omega,
                            const BandFamily& bands, int j);

} // namespace ferulam
