#pragma once

// Image-quality metrics on 3D volumes. Reference metrics compare volumes
// after dividing each by its own maximum.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "gpair/error.hpp"
#include "gpair/geometry.hpp"

namespace gpair {

inline constexpr double kPsnrCapDb = 200.0;

struct MsePsnr {
    double mse = 0.0;
    double psnr = 0.0;
};

struct ReferenceFreeMetrics {
    double cnr = 0.0;
    double snr = 0.0;
    double bg_std = 0.0;
    double sharpness = 0.0;
};

struct MetricReport {
    double psnr = 0.0;
    double ssim = 0.0;
    double mse = 0.0;
    std::optional<ReferenceFreeMetrics> reference_free;
};

using VolumeMask = std::vector<std::uint8_t>;

namespace detail {

template <class Real>
std::vector<double> max_normalized(const VoxelImage<Real>& x) {
    std::vector<double> v(x.values.begin(), x.values.end());
    double peak = 0.0;
    for (double e : v) peak = std::max(peak, e);
    if (peak > 0.0)
        for (double& e : v) e /= peak;
    return v;
}

template <class Real>
std::vector<double> as_double(const VoxelImage<Real>& x) {
    return {x.values.begin(), x.values.end()};
}

inline void require_same_shape(const VoxelGrid& a, const VoxelGrid& b) {
    require(a.dims == b.dims, "volumes have different shapes");
}

} // namespace detail

inline MsePsnr mse_psnr(std::span<const double> x, std::span<const double> ref) {
    detail::require(x.size() == ref.size() && !x.empty(), "volumes have different sizes");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - ref[i];
        acc += d * d;
    }
    MsePsnr out;
    out.mse = acc / static_cast<double>(x.size());
    out.psnr = out.mse < 1e-20 ? kPsnrCapDb : std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / out.mse));
    return out;
}

template <class Real>
MsePsnr mse_psnr(const VoxelImage<Real>& x, const VoxelImage<Real>& ref, bool normalize = true) {
    detail::require_same_shape(x.grid, ref.grid);
    const auto a = normalize ? detail::max_normalized(x) : detail::as_double(x);
    const auto b = normalize ? detail::max_normalized(ref) : detail::as_double(ref);
    return mse_psnr(std::span<const double>(a), std::span<const double>(b));
}

namespace detail {

// Weighted "valid" correlation of a volume with a separable window.
inline std::vector<double> separable_window(const std::vector<double>& v, std::array<int, 3> dims,
                                            const std::array<std::vector<double>, 3>& w, std::array<int, 3>& out_dims) {
    std::vector<double> cur = v;
    std::array<int, 3> d = dims;
    for (int axis = 0; axis < 3; ++axis) {
        const int e = static_cast<int>(w[axis].size());
        std::array<int, 3> nd = d;
        nd[axis] = d[axis] - e + 1;
        std::vector<double> next(static_cast<std::size_t>(nd[0]) * nd[1] * nd[2], 0.0);
        for (int z = 0; z < nd[2]; ++z)
            for (int y = 0; y < nd[1]; ++y)
                for (int x = 0; x < nd[0]; ++x) {
                    double acc = 0.0;
                    for (int k = 0; k < e; ++k) {
                        std::array<int, 3> p{x, y, z};
                        p[axis] += k;
                        acc += w[axis][static_cast<std::size_t>(k)] *
                               cur[static_cast<std::size_t>(p[0]) + static_cast<std::size_t>(d[0]) * (p[1] + static_cast<std::size_t>(d[1]) * p[2])];
                    }
                    next[static_cast<std::size_t>(x) + static_cast<std::size_t>(nd[0]) * (y + static_cast<std::size_t>(nd[1]) * z)] = acc;
                }
        cur = std::move(next);
        d = nd;
    }
    out_dims = d;
    return cur;
}

} // namespace detail

/// Mean structural similarity over all window positions fully inside the
/// volume. Gaussian window sigma 1.5, extent min(11, dim) per axis, K1 = 0.01,
/// K2 = 0.03, dynamic range 1.
inline double ssim3d(const std::vector<double>& a, const std::vector<double>& b, std::array<int, 3> dims) {
    detail::require(a.size() == b.size(), "volumes have different sizes");
    std::array<std::vector<double>, 3> w;
    for (int axis = 0; axis < 3; ++axis) {
        const int e = std::min(11, dims[axis]);
        const double c = 0.5 * (e - 1);
        double s = 0.0;
        for (int k = 0; k < e; ++k) {
            const double v = std::exp(-(k - c) * (k - c) / (2.0 * 1.5 * 1.5));
            w[axis].push_back(v);
            s += v;
        }
        for (double& v : w[axis]) v /= s;
    }
    std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        aa[i] = a[i] * a[i];
        bb[i] = b[i] * b[i];
        ab[i] = a[i] * b[i];
    }
    std::array<int, 3> od{};
    const auto mu_a = detail::separable_window(a, dims, w, od);
    const auto mu_b = detail::separable_window(b, dims, w, od);
    const auto e_aa = detail::separable_window(aa, dims, w, od);
    const auto e_bb = detail::separable_window(bb, dims, w, od);
    const auto e_ab = detail::separable_window(ab, dims, w, od);
    const double c1 = 0.01 * 0.01;
    const double c2 = 0.03 * 0.03;
    double acc = 0.0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
        const double va = e_aa[i] - mu_a[i] * mu_a[i];
        const double vb = e_bb[i] - mu_b[i] * mu_b[i];
        const double cov = e_ab[i] - mu_a[i] * mu_b[i];
        acc += ((2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2)) /
               ((mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2));
    }
    return acc / static_cast<double>(mu_a.size());
}

template <class Real>
double ssim3d(const VoxelImage<Real>& x, const VoxelImage<Real>& ref, bool normalize = true) {
    detail::require_same_shape(x.grid, ref.grid);
    const auto a = normalize ? detail::max_normalized(x) : detail::as_double(x);
    const auto b = normalize ? detail::max_normalized(ref) : detail::as_double(ref);
    return ssim3d(a, b, x.grid.dims);
}

/// CNR, SNR, background std and boundary sharpness of a max-normalized volume.
///   cnr = (mean_sig - mean_bg) / std_bg,  snr = mean_sig / std_bg (population std),
///   sharpness = mean central-difference gradient magnitude over signal voxels
///   that have a 6-neighbour outside the signal mask.
template <class Real>
ReferenceFreeMetrics reference_free_metrics(const VoxelImage<Real>& x, const VolumeMask& signal, const VolumeMask& background) {
    const VoxelGrid& g = x.grid;
    const std::size_t M = g.size();
    detail::require(signal.size() == M && background.size() == M, "mask size does not match volume");
    const auto v = detail::max_normalized(x);
    double s_sum = 0.0, b_sum = 0.0;
    std::size_t s_n = 0, b_n = 0;
    for (std::size_t i = 0; i < M; ++i) {
        detail::require(!(signal[i] && background[i]), "signal and background masks overlap");
        if (signal[i]) {
            s_sum += v[i];
            ++s_n;
        }
        if (background[i]) {
            b_sum += v[i];
            ++b_n;
        }
    }
    detail::require(s_n > 0, "signal mask is empty");
    detail::require(b_n > 0, "background mask is empty");
    const double mu_s = s_sum / static_cast<double>(s_n);
    const double mu_b = b_sum / static_cast<double>(b_n);
    double var = 0.0, b_lo = std::numeric_limits<double>::infinity(), b_hi = -b_lo;
    for (std::size_t i = 0; i < M; ++i)
        if (background[i]) {
            var += (v[i] - mu_b) * (v[i] - mu_b);
            b_lo = std::min(b_lo, v[i]);
            b_hi = std::max(b_hi, v[i]);
        }
    const double sd = std::sqrt(var / static_cast<double>(b_n));
    if (!(b_hi > b_lo) || !(sd > 0.0)) throw InvalidArgument("background has zero variance");

    auto val = [&](int ix, int iy, int iz) { return v[g.index(ix, iy, iz)]; };
    auto diff = [&](int ix, int iy, int iz, int ax) {
        std::array<int, 3> lo{ix, iy, iz}, hi{ix, iy, iz};
        if (lo[ax] > 0) --lo[ax];
        if (hi[ax] < g.dims[ax] - 1) ++hi[ax];
        const int span = hi[ax] - lo[ax];
        return span == 0 ? 0.0 : (val(hi[0], hi[1], hi[2]) - val(lo[0], lo[1], lo[2])) / span;
    };
    double sharp = 0.0;
    std::size_t shell = 0;
    for (std::size_t i = 0; i < M; ++i) {
        if (!signal[i]) continue;
        const auto c = g.coords(i);
        bool edge = false;
        for (int ax = 0; ax < 3 && !edge; ++ax)
            for (int s = -1; s <= 1; s += 2) {
                std::array<int, 3> n = c;
                n[ax] += s;
                if (g.contains(n[0], n[1], n[2]) && !signal[g.index(n[0], n[1], n[2])]) edge = true;
            }
        if (!edge) continue;
        const double gx = diff(c[0], c[1], c[2], 0), gy = diff(c[0], c[1], c[2], 1), gz = diff(c[0], c[1], c[2], 2);
        sharp += std::sqrt(gx * gx + gy * gy + gz * gz);
        ++shell;
    }
    ReferenceFreeMetrics out;
    out.cnr = (mu_s - mu_b) / sd;
    out.snr = mu_s / sd;
    out.bg_std = sd;
    out.sharpness = shell ? sharp / static_cast<double>(shell) : 0.0;
    return out;
}

/// Voxels at or above frac * max.
template <class Real>
VolumeMask threshold_mask(const VoxelImage<Real>& x, double frac = 0.1) {
    double peak = 0.0;
    for (const Real e : x.values) peak = std::max(peak, static_cast<double>(e));
    VolumeMask m(x.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) m[i] = static_cast<double>(x.values[i]) >= frac * peak && peak > 0.0;
    return m;
}

} // namespace gpair
