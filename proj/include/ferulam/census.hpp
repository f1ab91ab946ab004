#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "ferulam/forcing.hpp"
#include "ferulam/pingpong.hpp"

namespace ferulam {

struct CensusConfig {
    std::size_t n_omega = 8;
    std::size_t n_orbits = 1000;
    std::size_t n_max = 10000;
    double t0_lo = 0.0, t0_hi = 1.0;
    // default window sits in the mixed (sticky) band of the weak census
    // forcing, where first-return times spread over decades instead of
    // concentrating at the phase-oscillation scale
    double E0_lo = 2.0, E0_hi = 2.2;
    double E_esc = 3.0;
    double E_floor = 0.0;   // <= 0: derive 1.01 * v*^2/2
    std::uint64_t seed = 1;

    /// Copy with E_floor resolved against the spec; throws ConfigError on any
    /// violated constraint (ranges ordered, E0 range above E_floor,
    /// E_esc > sup E0, n_max >= 1).
    CensusConfig resolve(const ForcingSpec& spec) const;

    /// Classification horizons {n_max/4, n_max/2, n_max}, clamped to >= 1.
    std::array<std::size_t, 3> horizons() const;
};

enum class OrbitClass : std::uint8_t { EscapingCandidate, Returned, LeftDomain, Alive };
constexpr std::size_t kOrbitClassCount = 4;

constexpr std::uint32_t kStepNever = std::numeric_limits<std::uint32_t>::max();

/// Milestones of one orbit, sufficient to classify it at any of the three
/// horizons and to build the recurrence profile.
struct OrbitMilestones {
    double E0 = 0.0;
    std::uint32_t exceeded_step = kStepNever;   // first n: E_n > E_esc
    std::uint32_t returned_step = kStepNever;   // first n after exceeding: E_n in [E_floor, 2 E0]
    std::uint32_t left_step = kStepNever;       // first n: E_n <= E_floor
    std::uint32_t first_return_step = kStepNever; // first n >= 1: E_n in [E0_lo, E0_hi]
    std::array<double, 3> E_at{};               // E at the horizon checkpoints
    double max_E = 0.0;                         // over the full run
    bool diverged = false;                      // solver failure (expected never)
};

/// Classification at horizon index 0..2. Returned (exceeded and re-entered
/// [E_floor, 2 E0] by the horizon) takes precedence over LeftDomain;
/// EscapingCandidate requires exceedance with no return and E still >= E_esc
/// at the horizon.
OrbitClass classify_milestones(const OrbitMilestones& m, const CensusConfig& cfg,
                               int horizon_index);

/// Milestones extracted from a stored trace (must have been produced with the
/// config's n_max and E_floor).
OrbitMilestones milestones_from_trace(const OrbitTrace& trace, const CensusConfig& cfg);

/// Classification of a stored trace at the full horizon.
OrbitClass classify_orbit(const OrbitTrace& trace, const CensusConfig& cfg);

/// Runs all n_omega x n_orbits orbits and returns their milestones in
/// (omega index, orbit index) order. Orbit (i, o) draws its initial state
/// from substream(seed, i+1, o); the omega points come from a dedicated
/// stream. Identical output for any worker count.
std::vector<OrbitMilestones> run_ensemble(const ForcingSpec& spec, const CensusConfig& cfg,
                                          int workers = 0);
std::vector<OrbitMilestones> run_ensemble_serial(const ForcingSpec& spec, const CensusConfig& cfg);

/// The omega points the ensemble uses, in index order.
std::vector<TorusPoint> census_omegas(const ForcingSpec& spec, const CensusConfig& cfg);

struct WilsonInterval {
    double lo, hi;
};

/// Wilson score interval for a binomial proportion (z = 1.959964 at 95%).
WilsonInterval wilson_interval(std::size_t successes, std::size_t n, double z = 1.959964);

struct OmegaCensus {
    TorusPoint omega;
    std::array<std::size_t, kOrbitClassCount> counts{};       // at the full horizon
    std::array<double, 3> escape_fraction{};                  // per horizon
    std::array<WilsonInterval, 3> escape_ci{};
    std::array<double, 4> growth_quantiles{};                 // q50, q90, q99, max of sqrt(maxE/E0)
    std::size_t n_diverged = 0;
};

struct CensusReport {
    CensusConfig cfg;                       // resolved
    std::array<std::size_t, 3> horizons{};
    std::vector<OmegaCensus> per_omega;
    std::array<double, 3> escape_fraction_total{};
    std::array<WilsonInterval, 3> escape_ci_total{};
};

CensusReport assemble_census(const ForcingSpec& spec, const CensusConfig& resolved,
                             const std::vector<OrbitMilestones>& milestones);

/// Full census: ensemble + per-omega classification counts, escape-fraction
/// curve over the three horizons with Wilson intervals, and velocity-growth
/// quantiles. Deterministic given (cfg, seed).
CensusReport run_census(const ForcingSpec& spec, const CensusConfig& cfg, int workers = 0);
CensusReport run_census_serial(const ForcingSpec& spec, const CensusConfig& cfg);

struct RecurrenceProfile {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> bins;   // [lo, hi) step ranges
    std::vector<std::size_t> counts;
    std::size_t no_return_full = 0;      // first return > n_max
    std::size_t no_return_half = 0;      // first return > n_max/2
    std::size_t no_return_quarter = 0;   // first return > n_max/4
    std::size_t total = 0;
};

RecurrenceProfile assemble_recurrence(const CensusConfig& resolved,
                                      const std::vector<OrbitMilestones>& milestones);

/// Histogram of first-return steps to the initial energy window [E0_lo, E0_hi]
/// (log2-spaced bins), with the no-return mass at the half and full horizons.
RecurrenceProfile recurrence_profile(const ForcingSpec& spec, const CensusConfig& cfg,
                                     int workers = 0);

} // namespace ferulam
