#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ferulam/errors.hpp"

namespace ferulam {

/// Largest torus dimension supported by the inline point storage.
constexpr std::size_t kMaxTorusDim = 8;

/// x - floor(x), kept strictly inside [0,1).
inline double frac(double x) noexcept {
    double f = x - std::floor(x);
    // x - floor(x) rounds to 1.0 for tiny negative x
    return f >= 1.0 ? 0.0 : f;
}

/// A point of T^N = (R/Z)^N, each component reduced to [0,1).
class TorusPoint {
public:
    TorusPoint() noexcept : dim_(0) { theta_.fill(0.0); }

    explicit TorusPoint(std::span<const double> theta) : dim_(theta.size()) {
        if (dim_ < 1 || dim_ > kMaxTorusDim)
            throw ConfigError("TorusPoint: dimension must be in [1, " +
                              std::to_string(kMaxTorusDim) + "]");
        theta_.fill(0.0);
        for (std::size_t i = 0; i < dim_; ++i) theta_[i] = frac(theta[i]);
    }

    TorusPoint(std::initializer_list<double> theta)
        : TorusPoint(std::span<const double>(theta.begin(), theta.size())) {}

    std::size_t dim() const noexcept { return dim_; }
    double operator[](std::size_t i) const noexcept { return theta_[i]; }
    std::span<const double> coords() const noexcept { return {theta_.data(), dim_}; }

    /// Group operation: componentwise addition mod 1.
    friend TorusPoint operator+(const TorusPoint& a, const TorusPoint& b) {
        TorusPoint r = a;
        for (std::size_t i = 0; i < r.dim_; ++i) r.theta_[i] = frac(r.theta_[i] + b.theta_[i]);
        return r;
    }

    friend bool operator==(const TorusPoint& a, const TorusPoint& b) noexcept {
        if (a.dim_ != b.dim_) return false;
        for (std::size_t i = 0; i < a.dim_; ++i)
            if (a.theta_[i] != b.theta_[i]) return false;
        return true;
    }

    /// Distance on the torus, max over components of min(|d|, 1-|d|).
    double dist(const TorusPoint& other) const noexcept {
        double m = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            const double d = std::fabs(theta_[i] - other.theta_[i]);
            m = std::max(m, std::min(d, 1.0 - d));
        }
        return m;
    }

    void set(std::size_t i, double value) noexcept { theta_[i] = frac(value); }
    void set_exact_zero(std::size_t i) noexcept { theta_[i] = 0.0; }

private:
    std::array<double, kMaxTorusDim> theta_;
    std::size_t dim_;
};

/// Result of the bounded nonresonance scan.
struct NonresonanceCertificate {
    bool ok = false;
    double min_abs = 0.0;                      // smallest |k.nu| seen over the scan
    std::array<int, kMaxTorusDim> worst_k{};   // the integer vector attaining it
    int scan_bound = 0;                        // Q
    double tolerance = 0.0;
};

/// Frequency vector nu of the linear flow psi(t) = (nu_1 t, ..., nu_N t) mod 1.
class FrequencyVector {
public:
    explicit FrequencyVector(std::span<const double> nu) : dim_(nu.size()) {
        if (dim_ < 1 || dim_ > kMaxTorusDim)
            throw ConfigError("FrequencyVector: dimension must be in [1, " +
                              std::to_string(kMaxTorusDim) + "]");
        nu_.fill(0.0);
        for (std::size_t i = 0; i < dim_; ++i) nu_[i] = nu[i];
        if (nu_[0] <= 0.0) throw ConfigError("FrequencyVector: nu[0] must be positive");
        for (std::size_t i = 0; i < dim_; ++i)
            if (nu_[i] == 0.0) throw ConfigError("FrequencyVector: entries must be nonzero");
    }

    FrequencyVector(std::initializer_list<double> nu)
        : FrequencyVector(std::span<const double>(nu.begin(), nu.size())) {}

    std::size_t dim() const noexcept { return dim_; }
    double operator[](std::size_t i) const noexcept { return nu_[i]; }
    std::span<const double> coords() const noexcept { return {nu_.data(), dim_}; }

    /// Exhaustive scan over 0 < max_i |k_i| <= Q for near-resonances |k.nu| < tol.
    NonresonanceCertificate check_nonresonant(int Q = 20, double tol = 1e-9) const;

private:
    std::array<double, kMaxTorusDim> nu_;
    std::size_t dim_;
};

/// omega + psi(t); componentwise frac(theta_i + nu_i * t).
TorusPoint flow_advance(const TorusPoint& omega, double t, const FrequencyVector& nu);

/// One Fourier mode of P: a*cos(2 pi k.theta) + b*sin(2 pi k.theta), k != 0.
struct ForcingMode {
    std::array<int, kMaxTorusDim> k{};
    double a = 0.0;
    double b = 0.0;
};

/// Finite trigonometric polynomial P on T^N together with the flow frequencies.
/// Construction computes and stores the coefficient bounds
///   lower = c0 - sum |amp|, upper = c0 + sum |amp|
/// and the flow-derivative bounds D1, D2, D3 (sums of (2 pi |k.nu|)^m * amp).
/// Throws ConfigError unless lower > 0 and a mode with k = 0 is absent.
class ForcingSpec {
public:
    ForcingSpec(FrequencyVector nu, double c0, std::vector<ForcingMode> modes);

    const FrequencyVector& nu() const noexcept { return nu_; }
    double c0() const noexcept { return c0_; }
    const std::vector<ForcingMode>& modes() const noexcept { return modes_; }
    std::size_t dim() const noexcept { return nu_.dim(); }

    double lower() const noexcept { return lower_; }   // a
    double upper() const noexcept { return upper_; }   // b
    double d1() const noexcept { return d1_; }
    double d2() const noexcept { return d2_; }
    double d3() const noexcept { return d3_; }

    /// Certified threshold 2*max(D1, 0) >= 2*max(sup dP/dpsi, 0).
    double v_star_bound() const noexcept { return 2.0 * d1_; }
    /// Energy threshold v*^2/2 with the certified v*.
    double energy_threshold() const noexcept {
        return 0.5 * v_star_bound() * v_star_bound();
    }

    // internal per-mode precomputation, exposed for the evaluators
    std::span<const double> mode_rates() const noexcept { return {rate_.data(), rate_.size()}; }

private:
    FrequencyVector nu_;
    double c0_;
    std::vector<ForcingMode> modes_;
    std::vector<double> rate_;   // 2 pi (k.nu) per mode
    double lower_, upper_, d1_, d2_, d3_;
};

/// P(omega).
double eval_P(const ForcingSpec& spec, const TorusPoint& omega);
/// Flow derivative: sum_k 2 pi (k.nu) [-a sin(2 pi k.omega) + b cos(2 pi k.omega)].
double eval_dpsi_P(const ForcingSpec& spec, const TorusPoint& omega);
/// Second flow derivative: factor -(2 pi k.nu)^2 on the cos/sin pair.
double eval_dpsi2_P(const ForcingSpec& spec, const TorusPoint& omega);

struct ForcingValues {
    double p;
    double pdot;
    double pddot;
};

/// p_omega(t) = P(omega + psi(t)) together with its first two time derivatives.
ForcingValues eval_p_omega(const ForcingSpec& spec, const TorusPoint& omega, double t);

struct VStarEstimate {
    double bound;      // certified: 2*max(D1, 0)
    double grid_sup;   // 2*max(grid max of dP/dpsi, 0), reporting only
};

/// Certified v* bound plus a grid estimate of the true supremum
/// (grid of points_per_dim^N torus points).
VStarEstimate v_star(const ForcingSpec& spec, int points_per_dim = 64);

// ---------------------------------------------------------------------------
// Forcing curves: the collision solver and the planar maps only need p(t) and
// its derivatives plus the bounds a, b, sup|pdot|. Two concrete curves satisfy
// this: a ForcingSpec bound to a base point, and a plain 1-periodic
// time-domain polynomial (used by the non-injectivity construction).
// ---------------------------------------------------------------------------

template <typename C>
concept ForcingCurveLike = requires(const C c, double t) {
    { c.value(t) } -> std::convertible_to<double>;
    { c.slope(t) } -> std::convertible_to<double>;
    { c.value_slope(t) } -> std::convertible_to<std::pair<double, double>>;
    { c.lower() } -> std::convertible_to<double>;
    { c.upper() } -> std::convertible_to<double>;
    { c.slope_bound() } -> std::convertible_to<double>;   // certified sup |pdot|
    { c.slope_sup() } -> std::convertible_to<double>;     // certified sup pdot (signed)
};

/// The curve t -> p_omega(t) for a fixed base point omega.
class OmegaCurve {
public:
    OmegaCurve(const ForcingSpec& spec, const TorusPoint& omega) noexcept
        : spec_(&spec), omega_(omega) {}

    double value(double t) const { return eval_p_omega(*spec_, omega_, t).p; }
    double slope(double t) const { return eval_p_omega(*spec_, omega_, t).pdot; }
    std::pair<double, double> value_slope(double t) const {
        const auto v = eval_p_omega(*spec_, omega_, t);
        return {v.p, v.pdot};
    }
    double lower() const noexcept { return spec_->lower(); }
    double upper() const noexcept { return spec_->upper(); }
    double slope_bound() const noexcept { return spec_->d1(); }
    double slope_sup() const noexcept { return spec_->d1(); }

private:
    const ForcingSpec* spec_;
    TorusPoint omega_;
};

/// 1-periodic time-domain trig polynomial
///   p(t) = c0 + sum_m alpha_m cos(2 pi m t) + beta_m sin(2 pi m t).
class PeriodicForcing {
public:
    struct Harmonic {
        int m;
        double alpha;
        double beta;
    };

    /// declared_slope_sup, when finite, replaces the coefficient bound D1 as
    /// the certified sup of pdot (the non-injectivity construction knows the
    /// attained maximum exactly).
    PeriodicForcing(double c0, std::vector<Harmonic> harmonics,
                    double declared_slope_sup = std::numeric_limits<double>::infinity());

    double value(double t) const;
    double slope(double t) const;
    double curvature(double t) const;
    std::pair<double, double> value_slope(double t) const;

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    double slope_bound() const noexcept { return d1_; }
    double slope_sup() const noexcept { return slope_sup_; }

    double c0() const noexcept { return c0_; }
    const std::vector<Harmonic>& harmonics() const noexcept { return harmonics_; }

private:
    double c0_;
    std::vector<Harmonic> harmonics_;
    double lower_, upper_, d1_, slope_sup_;
};

} // namespace ferulam
