#include "ferulam/census.hpp"

#include <algorithm>
#include <cmath>

#include "ferulam/rng.hpp"
#include "ferulam/torus_flow.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ferulam {

namespace {
constexpr std::uint64_t kOmegaTag = 0xC1;
}

CensusConfig CensusConfig::resolve(const ForcingSpec& spec) const {
    CensusConfig r = *this;
    const double threshold = spec.energy_threshold();
    if (r.E_floor <= 0.0) r.E_floor = 1.01 * threshold;
    if (r.E_floor < threshold)
        throw ConfigError("census: E_floor must be >= v*^2/2 = " + std::to_string(threshold));
    if (r.n_omega < 1 || r.n_orbits < 1 || r.n_max < 1)
        throw ConfigError("census: n_omega, n_orbits, n_max must be >= 1");
    if (r.n_max > 1000000000ull)
        throw ConfigError("census: n_max exceeds the supported range (1e9 steps)");
    if (!(r.t0_lo <= r.t0_hi)) throw ConfigError("census: t0 range is empty");
    if (!(r.E0_lo <= r.E0_hi)) throw ConfigError("census: E0 range is empty");
    if (!(r.E0_lo > r.E_floor))
        throw ConfigError("census: E0 range must lie strictly above E_floor");
    if (!(r.E_esc > r.E0_hi)) throw ConfigError("census: E_esc must exceed sup E0_range");
    return r;
}

std::array<std::size_t, 3> CensusConfig::horizons() const {
    return {std::max<std::size_t>(1, n_max / 4), std::max<std::size_t>(1, n_max / 2), n_max};
}

namespace {

// milestone update for state n >= 1 with energy E; shared by the streaming
// walker and the stored-trace extraction
void update_milestones(OrbitMilestones& m, std::uint32_t n, double E, const CensusConfig& cfg,
                       const std::array<std::size_t, 3>& horizons) {
    m.max_E = std::max(m.max_E, E);
    if (m.exceeded_step == kStepNever) {
        if (E > cfg.E_esc) m.exceeded_step = n;
    } else if (m.returned_step == kStepNever && n > m.exceeded_step && E >= cfg.E_floor &&
               E <= 2.0 * m.E0) {
        m.returned_step = n;
    }
    if (m.first_return_step == kStepNever && E >= cfg.E0_lo && E <= cfg.E0_hi)
        m.first_return_step = n;
    for (int k = 0; k < 3; ++k)
        if (n == horizons[k]) m.E_at[k] = E;
    if (m.left_step == kStepNever && E <= cfg.E_floor) m.left_step = n;
}

// checkpoints past the stop step carry the last energy
void finalize_milestones(OrbitMilestones& m, std::uint32_t last_step, double last_E,
                         const std::array<std::size_t, 3>& horizons) {
    for (int k = 0; k < 3; ++k)
        if (horizons[k] > last_step) m.E_at[k] = last_E;
}

OrbitMilestones simulate_one(const ForcingSpec& spec, const TorusPoint& omega, double t0,
                             double E0, const CensusConfig& cfg,
                             const std::array<std::size_t, 3>& horizons) {
    OrbitMilestones m;
    m.E0 = E0;
    m.max_E = E0;
    OrbitWalker walker(spec, omega, {t0, E0});
    std::uint32_t n = 0;
    double E = E0;
    for (std::size_t s = 0; s < cfg.n_max; ++s) {
        if (!walker.step()) {
            m.diverged = true;
            m.left_step = std::min(m.left_step, n + 1);
            break;
        }
        ++n;
        E = walker.state().E;
        update_milestones(m, n, E, cfg, horizons);
        if (E <= cfg.E_floor) break;
    }
    finalize_milestones(m, n, E, horizons);
    return m;
}

} // namespace

OrbitClass classify_milestones(const OrbitMilestones& m, const CensusConfig& cfg,
                               int horizon_index) {
    const std::size_t h = cfg.horizons()[horizon_index];
    if (m.exceeded_step <= h && m.returned_step <= h) return OrbitClass::Returned;
    if (m.left_step <= h) return OrbitClass::LeftDomain;
    if (m.exceeded_step <= h && m.E_at[horizon_index] >= cfg.E_esc)
        return OrbitClass::EscapingCandidate;
    return OrbitClass::Alive;
}

OrbitMilestones milestones_from_trace(const OrbitTrace& trace, const CensusConfig& cfg) {
    const auto horizons = cfg.horizons();
    OrbitMilestones m;
    m.E0 = trace.states.front().E;
    m.max_E = m.E0;
    m.diverged = trace.status == OrbitStatus::Diverged;
    std::uint32_t n = 0;
    double E = m.E0;
    for (std::size_t i = 1; i < trace.states.size(); ++i) {
        ++n;
        E = trace.states[i].E;
        update_milestones(m, n, E, cfg, horizons);
    }
    if (m.diverged) m.left_step = std::min<std::uint32_t>(m.left_step, n + 1);
    finalize_milestones(m, n, E, horizons);
    return m;
}

OrbitClass classify_orbit(const OrbitTrace& trace, const CensusConfig& cfg) {
    return classify_milestones(milestones_from_trace(trace, cfg), cfg, 2);
}

std::vector<TorusPoint> census_omegas(const ForcingSpec& spec, const CensusConfig& cfg) {
    return haar_sample(substream(cfg.seed, kOmegaTag, 0), cfg.n_omega, spec.dim());
}

std::vector<OrbitMilestones> run_ensemble(const ForcingSpec& spec, const CensusConfig& cfg_in,
                                          int workers) {
    const CensusConfig cfg = cfg_in.resolve(spec);
    const auto horizons = cfg.horizons();
    const auto omegas = census_omegas(spec, cfg);
    const std::size_t total = cfg.n_omega * cfg.n_orbits;
    std::vector<OrbitMilestones> out(total);

#ifdef _OPENMP
    const int nthreads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(nthreads)
#else
    (void)workers;
#endif
    for (long long idx = 0; idx < static_cast<long long>(total); ++idx) {
        const std::size_t i = static_cast<std::size_t>(idx) / cfg.n_orbits;
        const std::size_t o = static_cast<std::size_t>(idx) % cfg.n_orbits;
        const RandomStream rs = substream(cfg.seed, i + 1, o);
        const double t0 = rs.uniform(0, cfg.t0_lo, cfg.t0_hi);
        const double E0 = rs.uniform(1, cfg.E0_lo, cfg.E0_hi);
        out[idx] = simulate_one(spec, omegas[i], t0, E0, cfg, horizons);
    }
    return out;
}

std::vector<OrbitMilestones> run_ensemble_serial(const ForcingSpec& spec,
                                                 const CensusConfig& cfg_in) {
    const CensusConfig cfg = cfg_in.resolve(spec);
    const auto horizons = cfg.horizons();
    const auto omegas = census_omegas(spec, cfg);
    std::vector<OrbitMilestones> out;
    out.reserve(cfg.n_omega * cfg.n_orbits);
    for (std::size_t i = 0; i < cfg.n_omega; ++i) {
        for (std::size_t o = 0; o < cfg.n_orbits; ++o) {
            const RandomStream rs = substream(cfg.seed, i + 1, o);
            const double t0 = rs.uniform(0, cfg.t0_lo, cfg.t0_hi);
            const double E0 = rs.uniform(1, cfg.E0_lo, cfg.E0_hi);
            out.push_back(simulate_one(spec, omegas[i], t0, E0, cfg, horizons));
        }
    }
    return out;
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

double nearest_rank_quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const std::size_t n = sorted.size();
    const std::size_t rank = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(n)));
    return sorted[std::min(n - 1, rank == 0 ? 0 : rank - 1)];
}

} // namespace

CensusReport assemble_census(const ForcingSpec& spec, const CensusConfig& resolved,
                             const std::vector<OrbitMilestones>& milestones) {
    CensusReport report;
    report.cfg = resolved;
    report.horizons = resolved.horizons();
    const auto omegas = census_omegas(spec, resolved);

    std::array<std::size_t, 3> total_candidates{};
    for (std::size_t i = 0; i < resolved.n_omega; ++i) {
        OmegaCensus oc;
        oc.omega = omegas[i];
        std::array<std::size_t, 3> candidates{};
        std::vector<double> growth;
        growth.reserve(resolved.n_orbits);
        for (std::size_t o = 0; o < resolved.n_orbits; ++o) {
            const auto& m = milestones[i * resolved.n_orbits + o];
            for (int k = 0; k < 3; ++k) {
                if (classify_milestones(m, resolved, k) == OrbitClass::EscapingCandidate)
                    ++candidates[k];
            }
            ++oc.counts[static_cast<std::size_t>(classify_milestones(m, resolved, 2))];
            if (m.diverged) ++oc.n_diverged;
            growth.push_back(std::sqrt(m.max_E / m.E0));
        }
        std::sort(growth.begin(), growth.end());
        oc.growth_quantiles = {nearest_rank_quantile(growth, 0.5),
                               nearest_rank_quantile(growth, 0.9),
                               nearest_rank_quantile(growth, 0.99), growth.back()};
        for (int k = 0; k < 3; ++k) {
            oc.escape_fraction[k] =
                static_cast<double>(candidates[k]) / static_cast<double>(resolved.n_orbits);
            oc.escape_ci[k] = wilson_interval(candidates[k], resolved.n_orbits);
            total_candidates[k] += candidates[k];
        }
        report.per_omega.push_back(std::move(oc));
    }
    const std::size_t total = resolved.n_omega * resolved.n_orbits;
    for (int k = 0; k < 3; ++k) {
        report.escape_fraction_total[k] =
            static_cast<double>(total_candidates[k]) / static_cast<double>(total);
        report.escape_ci_total[k] = wilson_interval(total_candidates[k], total);
    }
    return report;
}

CensusReport run_census(const ForcingSpec& spec, const CensusConfig& cfg, int workers) {
    const CensusConfig resolved = cfg.resolve(spec);
    return assemble_census(spec, resolved, run_ensemble(spec, resolved, workers));
}

CensusReport run_census_serial(const ForcingSpec& spec, const CensusConfig& cfg) {
    const CensusConfig resolved = cfg.resolve(spec);
    return assemble_census(spec, resolved, run_ensemble_serial(spec, resolved));
}

RecurrenceProfile assemble_recurrence(const CensusConfig& resolved,
                                      const std::vector<OrbitMilestones>& milestones) {
    RecurrenceProfile prof;
    prof.total = milestones.size();
    for (std::uint64_t lo = 1; lo <= resolved.n_max; lo *= 2) {
        const std::uint64_t hi = std::min<std::uint64_t>(lo * 2, resolved.n_max + 1);
        prof.bins.emplace_back(static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi));
        prof.counts.push_back(0);
    }
    const std::size_t half = std::max<std::size_t>(1, resolved.n_max / 2);
    const std::size_t quarter = std::max<std::size_t>(1, resolved.n_max / 4);
    for (const auto& m : milestones) {
        const std::uint32_t r = m.first_return_step;
        if (r == kStepNever || r > resolved.n_max) {
            ++prof.no_return_full;
            ++prof.no_return_half;
            ++prof.no_return_quarter;
            continue;
        }
        if (r > half) ++prof.no_return_half;
        if (r > quarter) ++prof.no_return_quarter;
        for (std::size_t b = 0; b < prof.bins.size(); ++b) {
            if (r >= prof.bins[b].first && r < prof.bins[b].second) {
                ++prof.counts[b];
                break;
            }
        }
    }
    return prof;
}

RecurrenceProfile recurrence_profile(const ForcingSpec& spec, const CensusConfig& cfg,
                                     int workers) {
    const CensusConfig resolved = cfg.resolve(spec);
    return assemble_recurrence(resolved, run_ensemble(spec, resolved, workers));
}

} // namespace ferulam
