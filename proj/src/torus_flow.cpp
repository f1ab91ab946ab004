#include "ferulam/torus_flow.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ferulam {

namespace {

bool on_section(const TorusPoint& sigma) {
    const double th = sigma[0];
    return std::min(th, 1.0 - th) <= kSectionTol;
}

int resolve_workers(int workers) {
#ifdef _OPENMP
    return workers > 0 ? workers : omp_get_max_threads();
#else
    (void)workers;
    return 1;
#endif
}

} // namespace

double tau_section(const TorusPoint& omega, const FrequencyVector& nu) {
    return omega[0] / nu[0];
}

SectionCoords phi_inverse(const TorusPoint& omega, const FrequencyVector& nu) {
    const double tau = tau_section(omega, nu);
    TorusPoint sigma = omega;
    sigma.set_exact_zero(0);   // theta_1 - nu_1 * tau = 0 exactly in the reals
    for (std::size_t i = 1; i < omega.dim(); ++i) sigma.set(i, omega[i] - nu[i] * tau);
    return {sigma, tau};
}

TorusPoint phi_compose(const SectionCoords& sc, const FrequencyVector& nu) {
    const double S = 1.0 / nu[0];
    if (!(sc.s >= 0.0 && sc.s < S))
        throw std::domain_error("phi_compose: s outside [0, S)");
    if (!on_section(sc.sigma))
        throw std::domain_error("phi_compose: sigma off the section");
    return flow_advance(sc.sigma, sc.s, nu);
}

SectionCoords chi_wrap(const TorusPoint& sigma, double t, const FrequencyVector& nu) {
    if (t < 0.0) throw std::domain_error("chi_wrap: t must be >= 0");
    if (!on_section(sigma)) throw std::domain_error("chi_wrap: sigma off the section");
    const double S = 1.0 / nu[0];
    double m = std::floor(t / S);
    double rem = t - m * S;
    // t/S can round across an integer; keep rem in [0, S)
    if (rem < 0.0) {
        m -= 1.0;
        rem = t - m * S;
    } else if (rem >= S) {
        m += 1.0;
        rem = t - m * S;
    }
    TorusPoint wrapped = flow_advance(sigma, m * S, nu);
    wrapped.set_exact_zero(0);   // psi(mS) has theta_1 = m = 0 mod 1
    return {wrapped, rem};
}

std::vector<TorusPoint> haar_sample(const RandomStream& rng, std::size_t n, std::size_t dim,
                                    std::uint64_t index_offset) {
    std::vector<TorusPoint> pts;
    pts.reserve(n);
    std::array<double, kMaxTorusDim> theta{};
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t base = (index_offset + i) * dim;
        for (std::size_t j = 0; j < dim; ++j) theta[j] = rng.uniform(base + j);
        pts.emplace_back(std::span<const double>(theta.data(), dim));
    }
    return pts;
}

std::vector<double> section_crossings(const TorusPoint& omega, const FrequencyVector& nu,
                                      std::size_t count) {
    const double S = 1.0 / nu[0];
    const double dt = S / 8.0;
    std::vector<double> crossings;
    crossings.reserve(count);
    double prev = omega[0];
    for (std::size_t k = 1; crossings.size() < count; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double th = frac(omega[0] + nu[0] * t);
        if (th < prev) {
            // theta_1 wrapped once inside ((k-1)dt, k dt]
            const double t_prev = static_cast<double>(k - 1) * dt;
            crossings.push_back(t_prev + (1.0 - prev) / nu[0]);
        }
        prev = th;
    }
    return crossings;
}

Rectangle random_rectangle(const RandomStream& rng, std::uint64_t index, std::size_t dim) {
    Rectangle r;
    r.dim = dim;
    for (std::size_t i = 0; i < dim; ++i) {
        const std::uint64_t base = index * 2 * dim + 2 * i;
        const double len = rng.uniform(base, 0.2, 0.9);
        r.lo[i] = rng.uniform(base + 1, 0.0, 1.0 - len);
        r.hi[i] = r.lo[i] + len;
    }
    return r;
}

namespace {

constexpr std::uint64_t kHaarTag = 0xA1;
constexpr std::uint64_t kProductTag = 0xA2;

// point drawn on Sigma x [0,S) and pushed through Phi
TorusPoint product_sample(const RandomStream& rng, std::uint64_t i, std::size_t dim,
                          const FrequencyVector& nu, double S) {
    std::array<double, kMaxTorusDim> theta{};
    const std::uint64_t base = i * dim;
    theta[0] = 0.0;
    for (std::size_t j = 1; j < dim; ++j) theta[j] = rng.uniform(base + j - 1);
    const double s = rng.uniform(base + dim - 1) * S;
    return flow_advance(TorusPoint(std::span<const double>(theta.data(), dim)), s, nu);
}

HaarCheckReport assemble_report(std::size_t n, std::span<const Rectangle> rects,
                                const std::vector<long long>& haar_counts,
                                const std::vector<long long>& prod_counts) {
    HaarCheckReport report;
    report.n = n;
    for (std::size_t r = 0; r < rects.size(); ++r) {
        HaarCheckRow row;
        row.set_id = static_cast<int>(r);
        row.haar_estimate = static_cast<double>(haar_counts[r]) / static_cast<double>(n);
        row.product_estimate = static_cast<double>(prod_counts[r]) / static_cast<double>(n);
        row.diff = std::fabs(row.haar_estimate - row.product_estimate);
        const double v1 = row.haar_estimate * (1.0 - row.haar_estimate);
        const double v2 = row.product_estimate * (1.0 - row.product_estimate);
        row.three_sigma = 3.0 * std::sqrt((v1 + v2) / static_cast<double>(n));
        row.pass = row.diff <= row.three_sigma;
        if (!row.pass) ++report.failures;
        report.rows.push_back(row);
    }
    return report;
}

} // namespace

HaarCheckReport check_haar_decomposition(const FrequencyVector& nu, std::size_t n,
                                         std::span<const Rectangle> rects, std::uint64_t seed,
                                         int workers) {
    const std::size_t dim = nu.dim();
    const double S = 1.0 / nu[0];
    const RandomStream haar_rng = substream(seed, kHaarTag, 0);
    const RandomStream prod_rng = substream(seed, kProductTag, 0);
    const std::size_t nr = rects.size();
    std::vector<long long> haar_counts(nr, 0), prod_counts(nr, 0);

    const int nthreads = resolve_workers(workers);
#ifdef _OPENMP
#pragma omp parallel num_threads(nthreads)
#endif
    {
        std::vector<long long> lh(nr, 0), lp(nr, 0);
        std::array<double, kMaxTorusDim> theta{};
#ifdef _OPENMP
#pragma omp for schedule(static) nowait
#endif
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            const std::uint64_t base = static_cast<std::uint64_t>(i) * dim;
            for (std::size_t j = 0; j < dim; ++j) theta[j] = haar_rng.uniform(base + j);
            const TorusPoint hp(std::span<const double>(theta.data(), dim));
            const TorusPoint pp = product_sample(prod_rng, static_cast<std::uint64_t>(i), dim, nu, S);
            for (std::size_t r = 0; r < nr; ++r) {
                lh[r] += rects[r].contains(hp);
                lp[r] += rects[r].contains(pp);
            }
        }
#ifdef _OPENMP
#pragma omp critical
#endif
        {
            // integer sums, order-independent
            for (std::size_t r = 0; r < nr; ++r) {
                haar_counts[r] += lh[r];
                prod_counts[r] += lp[r];
            }
        }
    }
    (void)nthreads;
    return assemble_report(n, rects, haar_counts, prod_counts);
}

HaarCheckReport check_haar_decomposition_serial(const FrequencyVector& nu, std::size_t n,
                                                std::span<const Rectangle> rects,
                                                std::uint64_t seed) {
    const std::size_t dim = nu.dim();
    const double S = 1.0 / nu[0];
    const RandomStream haar_rng = substream(seed, kHaarTag, 0);
    const RandomStream prod_rng = substream(seed, kProductTag, 0);
    const std::size_t nr = rects.size();
    std::vector<long long> haar_counts(nr, 0), prod_counts(nr, 0);
    std::array<double, kMaxTorusDim> theta{};
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t base = i * dim;
        for (std::size_t j = 0; j < dim; ++j) theta[j] = haar_rng.uniform(base + j);
        const TorusPoint hp(std::span<const double>(theta.data(), dim));
        const TorusPoint pp = product_sample(prod_rng, i, dim, nu, S);
        for (std::size_t r = 0; r < nr; ++r) {
            haar_counts[r] += rects[r].contains(hp);
            prod_counts[r] += rects[r].contains(pp);
        }
    }
    return assemble_report(n, rects, haar_counts, prod_counts);
}

} // namespace ferulam
