#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ferulam/forcing.hpp"
#include "ferulam/rng.hpp"

namespace ferulam {

/// Tolerance for accepting a user-supplied point as lying on the section.
constexpr double kSectionTol = 1e-12;

/// The cross section Sigma = {theta_1 = 0} with its return time S = 1/nu_1.
struct CrossSection {
    double S;
    static CrossSection of(const FrequencyVector& nu) { return {1.0 / nu[0]}; }
};

/// A point of Sigma x [0, S): sigma has theta_1 = 0 exactly, s in [0, S).
struct SectionCoords {
    TorusPoint sigma;
    double s = 0.0;
};

/// tau(omega) = theta_1 / nu_1, the unique value in [0,S) with
/// phi(omega) = e^{i alpha tau}, alpha = 2 pi nu_1. tau = 0 on Sigma itself;
/// the next section hit is at time S - tau.
double tau_section(const TorusPoint& omega, const FrequencyVector& nu);

/// Phi^{-1}(omega) = (omega . (-tau), tau). The sigma component is built with
/// theta_1 = 0 exactly.
SectionCoords phi_inverse(const TorusPoint& omega, const FrequencyVector& nu);

/// Phi(sigma, s) = sigma . s. Throws std::domain_error if s is outside [0,S)
/// or sigma is off the section by more than kSectionTol.
TorusPoint phi_compose(const SectionCoords& sc, const FrequencyVector& nu);

/// chi(sigma, t) = Phi^{-1}(sigma . t) = (sigma + psi(floor(t/S) S), t mod S).
/// Throws std::domain_error for t < 0 or sigma off-section.
SectionCoords chi_wrap(const TorusPoint& sigma, double t, const FrequencyVector& nu);

/// n Haar-uniform points of [0,1)^dim. Point i is a pure function of
/// (rng.seed, rng.stream, index_offset + i), so batches may be produced in
/// any partitioning.
std::vector<TorusPoint> haar_sample(const RandomStream& rng, std::size_t n, std::size_t dim,
                                    std::uint64_t index_offset = 0);

/// Detected crossing times of theta_1 through 0 along t -> omega . t, t > 0.
/// Detection walks a grid of step S/8 and refines each wrap; evaluation is
/// direct in t (no accumulated stepping).
std::vector<double> section_crossings(const TorusPoint& omega, const FrequencyVector& nu,
                                      std::size_t count);

/// Product of sub-intervals [lo_i, hi_i) subset [0,1).
struct Rectangle {
    std::array<double, kMaxTorusDim> lo{};
    std::array<double, kMaxTorusDim> hi{};
    std::size_t dim = 0;

    bool contains(const TorusPoint& p) const noexcept {
        for (std::size_t i = 0; i < dim; ++i)
            if (p[i] < lo[i] || p[i] >= hi[i]) return false;
        return true;
    }
    double volume() const noexcept {
        double v = 1.0;
        for (std::size_t i = 0; i < dim; ++i) v *= hi[i] - lo[i];
        return v;
    }
};

/// Random rectangle with side lengths in [0.2, 0.9].
Rectangle random_rectangle(const RandomStream& rng, std::uint64_t index, std::size_t dim);

struct HaarCheckRow {
    int set_id;
    double haar_estimate;      // fraction of Haar samples of T^N landing in R
    double product_estimate;   // fraction of (mu_Sigma x lambda/S)-samples with Phi(sigma,s) in R
    double diff;
    double three_sigma;        // 3 * sqrt(p1(1-p1)/n + p2(1-p2)/n)
    bool pass;
};

struct HaarCheckReport {
    std::size_t n = 0;
    std::vector<HaarCheckRow> rows;
    int failures = 0;
};

/// Monte-Carlo check of the Haar decomposition mu(B) = (1/S)(mu_Sigma x lambda)(Phi^{-1}(B)):
/// for each rectangle, compares direct Haar sampling of T^N against sampling
/// (sigma, s) on Sigma x [0,S) and mapping through Phi.
HaarCheckReport check_haar_decomposition(const FrequencyVector& nu, std::size_t n,
                                         std::span<const Rectangle> rects, std::uint64_t seed,
                                         int workers = 0);

/// Plain-loop reference for check_haar_decomposition; must agree exactly.
HaarCheckReport check_haar_decomposition_serial(const FrequencyVector& nu, std::size_t n,
                                                std::span<const Rectangle> rects,
                                                std::uint64_t seed);

} // namespace ferulam
