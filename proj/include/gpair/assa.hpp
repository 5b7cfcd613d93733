#pragma once

// Adaptive supersampling alignment: choose an integer temporal upsampling
// ratio so the +-3 sigma kernel support spans at least n_min samples, and
// tabulate the discrete N-shaped kernel on that refined clock.

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <vector>

#include "gpair/acoustic.hpp"
#include "gpair/error.hpp"

namespace gpair {

struct AssaParams {
    int alpha = 1;
    int n_half = 1;
    int n_min = 25;
    double f_s_up = 0.0;
    double dt_up = 0.0;
    std::int64_t n_t_up = 0;
    int K = 0;
    double sigma = 0.0; // kernel width the parameters were derived for
};

inline std::ostream& operator<<(std::ostream& os, const AssaParams& p) {
    return os << "alpha=" << p.alpha << " n_half=" << p.n_half << " n_min=" << p.n_min
              << " f_s_up=" << p.f_s_up << " dt_up=" << p.dt_up << " n_t_up=" << p.n_t_up
              << " K=" << p.K << " sigma=" << p.sigma;
}

namespace detail {

// ceil() that treats ratios within a few ulps of an integer as that integer,
// so e.g. 3 * 0.4 mm / (1500 m/s * 50 ns) yields 16 rather than 17.
inline std::int64_t robust_ceil(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::ceil(x));
}

} // namespace detail

inline AssaParams compute_assa(double sigma, const AcousticConfig& acoustic, int n_min = 25) {
    acoustic.validate();
    detail::require(sigma > 0.0, "sigma must be positive");
    detail::require(n_min >= 3, "n_min must be at least 3");

    AssaParams p;
    p.sigma = sigma;
    p.n_min = n_min;
    const std::int64_t n_half =
        detail::robust_ceil(3.0 * sigma / (acoustic.speed_of_sound * acoustic.dt()));
    detail::require(n_half >= 1 && n_half < std::numeric_limits<int>::max() / 2,
                    "kernel half-width out of range");
    p.n_half = static_cast<int>(n_half);
    // ceil(((n_min - 1) / 2) / n_half) in exact integer arithmetic.
    const std::int64_t num = n_min - 1;
    const std::int64_t den = 2 * n_half;
    p.alpha = static_cast<int>(std::max<std::int64_t>(1, (num + den - 1) / den));
    p.f_s_up = p.alpha * acoustic.sampling_rate;
    p.dt_up = 1.0 / p.f_s_up;
    p.n_t_up = static_cast<std::int64_t>(p.alpha) * acoustic.n_samples;
    p.K = p.alpha * p.n_half;
    return p;
}

/// Same parameters with the upsampling ratio multiplied by `factor`.
inline AssaParams scale_alpha(const AssaParams& base, const AcousticConfig& acoustic, int factor) {
    detail::require(factor >= 1, "alpha factor must be >= 1");
    AssaParams p = base;
    p.alpha = base.alpha * factor;
    p.f_s_up = p.alpha * acoustic.sampling_rate;
    p.dt_up = 1.0 / p.f_s_up;
    p.n_t_up = static_cast<std::int64_t>(p.alpha) * acoustic.n_samples;
    p.K = p.alpha * p.n_half;
    return p;
}

/// Odd kernel h[k] = C d[k] exp(-d[k]^2 / (2 sigma^2)), d[k] = -v k dt_up, k = -K..K.
class KernelTaps {
public:
    KernelTaps() = default;

    KernelTaps(std::vector<double> taps, double sigma, double normalization)
        : taps_(std::move(taps)), sigma_(sigma), normalization_(normalization) {
        detail::require(taps_.size() % 2 == 1, "kernel length must be odd");
    }

    int half_width() const { return static_cast<int>(taps_.size() / 2); }
    std::size_t size() const { return taps_.size(); }
    double at(int k) const { return taps_[static_cast<std::size_t>(k + half_width())]; }
    std::span<const double> values() const { return taps_; }
    double sigma() const { return sigma_; }
    double normalization() const { return normalization_; }

private:
    std::vector<double> taps_;
    double sigma_ = 0.0;
    double normalization_ = 0.0;
};

inline constexpr double kDefaultKernelNormalization = 0.5;

inline KernelTaps make_kernel_taps(const AssaParams& assa, double sigma, const AcousticConfig& acoustic,
                                   double normalization = kDefaultKernelNormalization) {
    detail::require(sigma > 0.0, "sigma must be positive");
    detail::require(assa.K >= 1 && assa.dt_up > 0.0, "invalid ASSA parameters");
    const int K = assa.K;
    std::vector<double> taps(2 * static_cast<std::size_t>(K) + 1, 0.0);
    const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
    for (int k = 1; k <= K; ++k) {
        const double d = -(acoustic.speed_of_sound * k) * assa.dt_up;
        const double h = normalization * d * std::exp(-d * d * inv_two_var);
        taps[static_cast<std::size_t>(K + k)] = h;
        taps[static_cast<std::size_t>(K - k)] = -h;
    }
    return KernelTaps(std::move(taps), sigma, normalization);
}

} // namespace gpair
