#include "ferulam/invariants.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ferulam {

double eval_W(const ForcingSpec& spec, const TorusPoint& omega, double E) {
    const double p = eval_P(spec, omega);
    return p * p * E;
}

double delta_modulus(const ForcingSpec& spec, double E0, double C) {
    if (!(E0 > 0.0) || !(C > 0.0)) throw ConfigError("delta_modulus: E0 and C must be positive");
    return (1.0 + C * spec.d3()) / std::sqrt(E0);
}

DriftRecord measure_drift(const ForcingSpec& spec, const TorusPoint& omega,
                          const PhaseStateTE& s, double C) {
    const double p0 = eval_p_omega(spec, omega, s.t).p;
    const PhaseStateTE next = step_te(spec, omega, s);
    const double p1 = eval_p_omega(spec, omega, next.t).p;
    return {s.E, std::fabs(p1 * p1 * next.E - p0 * p0 * s.E), delta_modulus(spec, s.E, C)};
}

namespace {

constexpr std::uint64_t kDriftTag = 0xD1;

double log_uniform(double u, double lo, double hi) {
    return std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
}

// sample i: omega Haar from counters [i*(dim+1), i*(dim+1)+dim), E0 log-uniform
double drift_ratio_sample(const ForcingSpec& spec, const RandomStream& rng, std::uint64_t i,
                          double E_lo, double E_hi, double C) {
    const std::size_t dim = spec.dim();
    const std::uint64_t base = i * (dim + 1);
    std::array<double, kMaxTorusDim> theta{};
    for (std::size_t j = 0; j < dim; ++j) theta[j] = rng.uniform(base + j);
    const TorusPoint omega(std::span<const double>(theta.data(), dim));
    const double E0 = log_uniform(rng.uniform(base + dim), E_lo, E_hi);
    const DriftRecord rec = measure_drift(spec, omega, {0.0, E0}, C);
    return rec.drift / rec.delta_bound;
}

} // namespace

double estimate_drift_constant(const ForcingSpec& spec, std::size_t n_samples, double E_lo,
                               double E_hi, double C, std::uint64_t seed, int workers) {
    if (!(E_lo > spec.energy_threshold()))
        throw ConfigError("estimate_drift_constant: E range must lie above v*^2/2");
    const RandomStream rng = substream(seed, kDriftTag, 0);
    double c_hat = 0.0;
#ifdef _OPENMP
    const int nthreads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) reduction(max : c_hat) num_threads(nthreads)
#endif
    for (long long i = 0; i < static_cast<long long>(n_samples); ++i)
        c_hat = std::max(c_hat,
                         drift_ratio_sample(spec, rng, static_cast<std::uint64_t>(i), E_lo, E_hi, C));
    return c_hat;
}

double estimate_drift_constant_serial(const ForcingSpec& spec, std::size_t n_samples,
                                      double E_lo, double E_hi, double C, std::uint64_t seed) {
    if (!(E_lo > spec.energy_threshold()))
        throw ConfigError("estimate_drift_constant: E range must lie above v*^2/2");
    const RandomStream rng = substream(seed, kDriftTag, 0);
    double c_hat = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i)
        c_hat = std::max(c_hat, drift_ratio_sample(spec, rng, i, E_lo, E_hi, C));
    return c_hat;
}

double estimate_drift_constant_at(const ForcingSpec& spec, const TorusPoint& omega,
                                  std::size_t n_samples, double E_lo, double E_hi, double C,
                                  std::uint64_t seed) {
    if (!(E_lo > spec.energy_threshold()))
        throw ConfigError("estimate_drift_constant: E range must lie above v*^2/2");
    const RandomStream rng = substream(seed, kDriftTag, 1);
    double c_hat = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t0 = rng.uniform(2 * i, 0.0, 1000.0);
        const double E0 = log_uniform(rng.uniform(2 * i + 1), E_lo, E_hi);
        // equivalent to starting at (omega, t0) but keeps the solve at local time 0
        const TorusPoint at = flow_advance(omega, t0, spec.nu());
        const DriftRecord rec = measure_drift(spec, at, {0.0, E0}, C);
        c_hat = std::max(c_hat, rec.drift / rec.delta_bound);
    }
    return c_hat;
}

DriftScalingReport drift_scaling(const ForcingSpec& spec, std::size_t n_per_decade, double E_lo,
                                 double E_hi, double C, std::uint64_t seed, int workers,
                                 std::size_t keep_records_per_decade) {
    if (!(E_lo > spec.energy_threshold()))
        throw ConfigError("drift_scaling: E range must lie above v*^2/2");
    if (!(E_hi > E_lo)) throw ConfigError("drift_scaling: need E_hi > E_lo");

    DriftScalingReport report;
    const int n_dec = static_cast<int>(std::round(std::log10(E_hi / E_lo)));
    if (n_dec < 1) throw ConfigError("drift_scaling: range must span at least one decade");
    for (int d = 0; d < n_dec; ++d) {
        DriftDecade dec;
        dec.E_lo = E_lo * std::pow(10.0, d);
        dec.E_hi = E_lo * std::pow(10.0, d + 1);
        dec.E_mid = std::sqrt(dec.E_lo * dec.E_hi);
        dec.max_drift = 0.0;
        dec.max_ratio = 0.0;
        dec.n = n_per_decade;
        report.decades.push_back(dec);
    }

    const RandomStream rng = substream(seed, kDriftTag, 2);
    const std::size_t dim = spec.dim();
    const std::size_t total = report.decades.size() * n_per_decade;
    std::vector<DriftRecord> records(total);

#ifdef _OPENMP
    const int nthreads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
    for (long long i = 0; i < static_cast<long long>(total); ++i) {
        const std::size_t d = static_cast<std::size_t>(i) / n_per_decade;
        const std::uint64_t base = static_cast<std::uint64_t>(i) * (dim + 1);
        std::array<double, kMaxTorusDim> theta{};
        for (std::size_t j = 0; j < dim; ++j) theta[j] = rng.uniform(base + j);
        const TorusPoint omega(std::span<const double>(theta.data(), dim));
        const double E0 =
            log_uniform(rng.uniform(base + dim), report.decades[d].E_lo, report.decades[d].E_hi);
        records[i] = measure_drift(spec, omega, {0.0, E0}, C);
    }

    // deterministic fold in sample order
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t d = i / n_per_decade;
        auto& dec = report.decades[d];
        dec.max_drift = std::max(dec.max_drift, records[i].drift);
        dec.max_ratio = std::max(dec.max_ratio, records[i].drift / records[i].delta_bound);
        if (i % n_per_decade < keep_records_per_decade) report.sample_records.push_back(records[i]);
        report.c_hat = std::max(report.c_hat, records[i].drift / records[i].delta_bound);
    }

    // least squares of log10(max drift) on log10(E_mid)
    const std::size_t k = report.decades.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    bool degenerate = false;
    for (const auto& dec : report.decades) {
        if (dec.max_drift <= 0.0) degenerate = true;
    }
    if (!degenerate && k >= 2) {
        for (const auto& dec : report.decades) {
            const double x = std::log10(dec.E_mid);
            const double y = std::log10(dec.max_drift);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            syy += y * y;
        }
        const double n = static_cast<double>(k);
        report.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        report.intercept = (sy - report.slope * sx) / n;
        double ss_res = 0, ss_tot = 0;
        const double ybar = sy / n;
        for (const auto& dec : report.decades) {
            const double x = std::log10(dec.E_mid);
            const double y = std::log10(dec.max_drift);
            const double fit = report.intercept + report.slope * x;
            ss_res += (y - fit) * (y - fit);
            ss_tot += (y - ybar) * (y - ybar);
        }
        report.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    } else {
        report.slope = std::numeric_limits<double>::quiet_NaN();
        report.intercept = std::numeric_limits<double>::quiet_NaN();
        report.r2 = std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

BandFamily::BandFamily(double W0, double eps0, int j_max) : W0_(W0), eps0_(eps0), j_max_(j_max) {
    if (!(W0 > 0.0) || !(eps0 > 0.0) || j_max < 1)
        throw ConfigError("BandFamily: need W0 > 0, eps0 > 0, j_max >= 1");
}

double BandFamily::eps_sum() const {
    double s = 0.0;
    for (int j = 1; j <= j_max_; ++j) s += eps(j);
    return s;
}

std::vector<std::pair<std::size_t, int>> band_hits(const OrbitTrace& trace,
                                                   const BandFamily& bands) {
    std::vector<std::pair<std::size_t, int>> hits;
    for (std::size_t i = 0; i < trace.W_values.size(); ++i) {
        const double w = trace.W_values[i];
        for (int j = 1; j <= bands.j_max(); ++j) {
            if (std::fabs(w - bands.W(j)) <= bands.eps(j)) hits.emplace_back(i, j);
        }
    }
    return hits;
}

double band_section_measure(const ForcingSpec& spec, const TorusPoint& omega,
                            const BandFamily& bands, int j) {
    if (j < 1 || j > bands.j_max()) throw ConfigError("band_section_measure: band index out of range");
    const double p = eval_P(spec, omega);
    return 2.0 * bands.eps(j) / (p * p);
}

} // namespace ferulam
