#include "ferulam/forcing.hpp"

#include <cmath>
#include <numbers>

namespace ferulam {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

NonresonanceCertificate FrequencyVector::check_nonresonant(int Q, double tol) const {
    if (Q < 1) throw ConfigError("nonresonance scan bound Q must be >= 1");
    const double scan_size = std::pow(2.0 * Q + 1.0, static_cast<double>(dim_));
    if (scan_size > 2e8)
        throw ConfigError("nonresonance scan (2Q+1)^N = " + std::to_string(scan_size) +
                          " too large; lower Q");
    NonresonanceCertificate cert;
    cert.scan_bound = Q;
    cert.tolerance = tol;
    cert.min_abs = std::numeric_limits<double>::infinity();

    // odometer over k in [-Q, Q]^N; by symmetry only k with first nonzero
    // component positive are visited
    std::array<int, kMaxTorusDim> k{};
    k.fill(-Q);
    const std::size_t n = dim_;
    while (true) {
        bool leading_positive = false;
        bool zero = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (k[i] != 0) {
                zero = false;
                leading_positive = k[i] > 0;
                break;
            }
        }
        if (!zero && leading_positive) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += k[i] * nu_[i];
            const double mag = std::fabs(dot);
            if (mag < cert.min_abs) {
                cert.min_abs = mag;
                cert.worst_k.fill(0);
                for (std::size_t i = 0; i < n; ++i) cert.worst_k[i] = k[i];
            }
        }
        std::size_t pos = 0;
        while (pos < n && ++k[pos] > Q) k[pos++] = -Q;
        if (pos == n) break;
    }
    cert.ok = cert.min_abs >= tol;
    return cert;
}

TorusPoint flow_advance(const TorusPoint& omega, double t, const FrequencyVector& nu) {
    TorusPoint r = omega;
    const std::size_t n = omega.dim();
    for (std::size_t i = 0; i < n; ++i) r.set(i, omega[i] + nu[i] * t);
    return r;
}

ForcingSpec::ForcingSpec(FrequencyVector nu, double c0, std::vector<ForcingMode> modes)
    : nu_(nu), c0_(c0), modes_(std::move(modes)) {
    const std::size_t n = nu_.dim();
    rate_.reserve(modes_.size());
    double amp_sum = 0.0;
    d1_ = d2_ = d3_ = 0.0;
    for (const auto& mode : modes_) {
        bool zero = true;
        for (std::size_t i = 0; i < n; ++i)
            if (mode.k[i] != 0) zero = false;
        if (zero) throw ConfigError("ForcingSpec: mode with k = 0 (fold it into c0)");
        double kdotnu = 0.0;
        for (std::size_t i = 0; i < n; ++i) kdotnu += mode.k[i] * nu_[i];
        const double rate = kTwoPi * kdotnu;
        const double amp = std::hypot(mode.a, mode.b);
        rate_.push_back(rate);
        amp_sum += amp;
        d1_ += std::fabs(rate) * amp;
        d2_ += rate * rate * amp;
        d3_ += std::fabs(rate) * rate * rate * amp;
    }
    lower_ = c0_ - amp_sum;
    upper_ = c0_ + amp_sum;
    if (!(lower_ > 0.0))
        throw ConfigError("ForcingSpec: lower bound a = c0 - sum|amp| must be positive, got " +
                          std::to_string(lower_));
}

namespace {

// phase of mode m at theta: 2 pi (k.theta)
inline double mode_phase(const ForcingMode& mode, const TorusPoint& theta) {
    double dot = 0.0;
    for (std::size_t i = 0; i < theta.dim(); ++i) dot += mode.k[i] * theta[i];
    return kTwoPi * dot;
}

} // namespace

double eval_P(const ForcingSpec& spec, const TorusPoint& omega) {
    double p = spec.c0();
    for (const auto& mode : spec.modes()) {
        const double ph = mode_phase(mode, omega);
        p += mode.a * std::cos(ph) + mode.b * std::sin(ph);
    }
    return p;
}

double eval_dpsi_P(const ForcingSpec& spec, const TorusPoint& omega) {
    double d = 0.0;
    const auto rates = spec.mode_rates();
    std::size_t m = 0;
    for (const auto& mode : spec.modes()) {
        const double ph = mode_phase(mode, omega);
        d += rates[m++] * (-mode.a * std::sin(ph) + mode.b * std::cos(ph));
    }
    return d;
}

double eval_dpsi2_P(const ForcingSpec& spec, const TorusPoint& omega) {
    double d = 0.0;
    const auto rates = spec.mode_rates();
    std::size_t m = 0;
    for (const auto& mode : spec.modes()) {
        const double ph = mode_phase(mode, omega);
        const double r = rates[m++];
        d += -r * r * (mode.a * std::cos(ph) + mode.b * std::sin(ph));
    }
    return d;
}

ForcingValues eval_p_omega(const ForcingSpec& spec, const TorusPoint& omega, double t) {
    // single pass: the three values share each mode's sincos
    const TorusPoint at = flow_advance(omega, t, spec.nu());
    ForcingValues v{spec.c0(), 0.0, 0.0};
    const auto rates = spec.mode_rates();
    std::size_t m = 0;
    for (const auto& mode : spec.modes()) {
        const double ph = mode_phase(mode, at);
        const double c = std::cos(ph);
        const double s = std::sin(ph);
        const double r = rates[m++];
        v.p += mode.a * c + mode.b * s;
        v.pdot += r * (-mode.a * s + mode.b * c);
        v.pddot += -r * r * (mode.a * c + mode.b * s);
    }
    return v;
}

VStarEstimate v_star(const ForcingSpec& spec, int points_per_dim) {
    VStarEstimate est;
    est.bound = spec.v_star_bound();

    const std::size_t n = spec.dim();
    double sup = -std::numeric_limits<double>::infinity();
    std::array<int, kMaxTorusDim> idx{};
    std::array<double, kMaxTorusDim> theta{};
    while (true) {
        for (std::size_t i = 0; i < n; ++i) theta[i] = static_cast<double>(idx[i]) / points_per_dim;
        sup = std::max(sup, eval_dpsi_P(spec, TorusPoint(std::span<const double>(theta.data(), n))));
        std::size_t pos = 0;
        while (pos < n && ++idx[pos] >= points_per_dim) idx[pos++] = 0;
        if (pos == n) break;
    }
    est.grid_sup = 2.0 * std::max(sup, 0.0);
    return est;
}

PeriodicForcing::PeriodicForcing(double c0, std::vector<Harmonic> harmonics,
                                 double declared_slope_sup)
    : c0_(c0), harmonics_(std::move(harmonics)) {
    double amp_sum = 0.0;
    d1_ = 0.0;
    for (const auto& h : harmonics_) {
        if (h.m == 0) throw ConfigError("PeriodicForcing: harmonic with m = 0");
        const double amp = std::hypot(h.alpha, h.beta);
        amp_sum += amp;
        d1_ += kTwoPi * std::abs(h.m) * amp;
    }
    lower_ = c0_ - amp_sum;
    upper_ = c0_ + amp_sum;
    slope_sup_ = std::isfinite(declared_slope_sup) ? declared_slope_sup : d1_;
    if (!(lower_ > 0.0))
        throw ConfigError("PeriodicForcing: lower bound must be positive");
}

double PeriodicForcing::value(double t) const {
    double p = c0_;
    for (const auto& h : harmonics_) {
        const double ph = kTwoPi * h.m * t;
        p += h.alpha * std::cos(ph) + h.beta * std::sin(ph);
    }
    return p;
}

double PeriodicForcing::slope(double t) const {
    double d = 0.0;
    for (const auto& h : harmonics_) {
        const double ph = kTwoPi * h.m * t;
        d += kTwoPi * h.m * (-h.alpha * std::sin(ph) + h.beta * std::cos(ph));
    }
    return d;
}

double PeriodicForcing::curvature(double t) const {
    double d = 0.0;
    for (const auto& h : harmonics_) {
        const double ph = kTwoPi * h.m * t;
        const double r = kTwoPi * h.m;
        d += -r * r * (h.alpha * std::cos(ph) + h.beta * std::sin(ph));
    }
    return d;
}

std::pair<double, double> PeriodicForcing::value_slope(double t) const {
    double p = c0_, d = 0.0;
    for (const auto& h : harmonics_) {
        const double ph = kTwoPi * h.m * t;
        const double c = std::cos(ph);
        const double s = std::sin(ph);
        p += h.alpha * c + h.beta * s;
        d += kTwoPi * h.m * (-h.alpha * s + h.beta * c);
    }
    return {p, d};
}

} // namespace ferulam
