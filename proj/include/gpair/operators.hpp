#pragma once

// Discrete forward operator A = S_down o (h *) o P_up and its transpose
//   A^T = P_up^T o (h_bar *) o S_down^T.
// Forward work is partitioned by detector and adjoint work by voxel, so no
// two threads ever write the same element.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "gpair/assa.hpp"
#include "gpair/error.hpp"
#include "gpair/geometry.hpp"
#include "gpair/parallel.hpp"

namespace gpair {

/// Detector-major traces, shape (n_detectors x n_samples).
template <class Real>
struct SignalSet {
    AcousticConfig acoustic;
    std::size_t n_detectors = 0;
    std::vector<Real> data;

    SignalSet() = default;
    SignalSet(const AcousticConfig& ac, std::size_t n_det)
        : acoustic(ac), n_detectors(n_det), data(n_det * static_cast<std::size_t>(ac.n_samples), Real(0)) {}

    std::size_t n_samples() const { return static_cast<std::size_t>(acoustic.n_samples); }
    std::span<Real> trace(std::size_t j) { return {data.data() + j * n_samples(), n_samples()}; }
    std::span<const Real> trace(std::size_t j) const { return {data.data() + j * n_samples(), n_samples()}; }
    Real& operator()(std::size_t j, std::size_t n) { return data[j * n_samples() + n]; }
    const Real& operator()(std::size_t j, std::size_t n) const { return data[j * n_samples() + n]; }
};

template <class Real>
struct UpsampledBuffer {
    std::size_t n_detectors = 0;
    std::size_t length = 0;
    std::vector<Real> data;

    UpsampledBuffer() = default;
    UpsampledBuffer(std::size_t n_det, std::size_t len) : n_detectors(n_det), length(len), data(n_det * len, Real(0)) {}

    std::span<Real> trace(std::size_t j) { return {data.data() + j * length, length}; }
    std::span<const Real> trace(std::size_t j) const { return {data.data() + j * length, length}; }
};

template <class Real>
UpsampledBuffer<Real> project_up(const VoxelImage<Real>& image, const ToFTable& tof, const AssaParams& assa) {
    detail::require(image.size() == tof.n_voxels, "image does not match time-of-flight table");
    const std::size_t M = tof.n_voxels;
    UpsampledBuffer<Real> z(tof.n_detectors, static_cast<std::size_t>(assa.n_t_up));
    parallel_for(0, tof.n_detectors, [&](std::size_t j0, std::size_t j1) {
        for (std::size_t j = j0; j < j1; ++j) {
            Real* zj = z.data.data() + j * z.length;
            const std::size_t base = j * M;
            for (std::size_t i = 0; i < M; ++i) {
                if (!tof.valid[base + i]) continue;
                zj[tof.aligned_indices[base + i]] += image.values[i] / static_cast<Real>(tof.distances[base + i]);
            }
        }
    });
    return z;
}

/// out_j[k] = sum_m z_j[m] h[k - m]; samples landing outside the record are dropped.
template <class Real>
UpsampledBuffer<Real> scatter_convolve(const UpsampledBuffer<Real>& z, const KernelTaps& taps) {
    UpsampledBuffer<Real> out(z.n_detectors, z.length);
    const int K = taps.half_width();
    std::vector<Real> h(taps.size());
    std::transform(taps.values().begin(), taps.values().end(), h.begin(), [](double v) { return static_cast<Real>(v); });
    const auto L = static_cast<std::int64_t>(z.length);
    parallel_for(0, z.n_detectors, [&](std::size_t j0, std::size_t j1) {
        for (std::size_t j = j0; j < j1; ++j) {
            const Real* in = z.data.data() + j * z.length;
            Real* o = out.data.data() + j * z.length;
            for (std::int64_t m = 0; m < L; ++m) {
                const Real a = in[m];
                if (a == Real(0)) continue;
                const std::int64_t q0 = std::max<std::int64_t>(-K, -m);
                const std::int64_t q1 = std::min<std::int64_t>(K, L - 1 - m);
                for (std::int64_t q = q0; q <= q1; ++q) o[m + q] += a * h[static_cast<std::size_t>(q + K)];
            }
        }
    });
    return out;
}

/// out_j[k] = sum_m h[m - k] u_j[m], the transpose of scatter_convolve.
template <class Real>
UpsampledBuffer<Real> correlate(const UpsampledBuffer<Real>& u, const KernelTaps& taps) {
    UpsampledBuffer<Real> out(u.n_detectors, u.length);
    const int K = taps.half_width();
    std::vector<Real> h(taps.size());
    std::transform(taps.values().begin(), taps.values().end(), h.begin(), [](double v) { return static_cast<Real>(v); });
    const auto L = static_cast<std::int64_t>(u.length);
    parallel_for(0, u.n_detectors, [&](std::size_t j0, std::size_t j1) {
        for (std::size_t j = j0; j < j1; ++j) {
            const Real* in = u.data.data() + j * u.length;
            Real* o = out.data.data() + j * u.length;
            for (std::int64_t k = 0; k < L; ++k) {
                const std::int64_t q0 = std::max<std::int64_t>(-K, -k);
                const std::int64_t q1 = std::min<std::int64_t>(K, L - 1 - k);
                Real acc(0);
                for (std::int64_t q = q0; q <= q1; ++q) acc += h[static_cast<std::size_t>(q + K)] * in[k + q];
                o[k] = acc;
            }
        }
    });
    return out;
}

template <class Real>
SignalSet<Real> decimate(const UpsampledBuffer<Real>& buf, const AssaParams& assa, const AcousticConfig& acoustic) {
    detail::require(buf.length == static_cast<std::size_t>(assa.alpha) * static_cast<std::size_t>(acoustic.n_samples),
                    "buffer length must equal alpha * n_samples");
    SignalSet<Real> y(acoustic, buf.n_detectors);
    const std::size_t Nt = y.n_samples();
    const auto a = static_cast<std::size_t>(assa.alpha);
    for (std::size_t j = 0; j < buf.n_detectors; ++j)
        for (std::size_t n = 0; n < Nt; ++n) y.data[j * Nt + n] = buf.data[j * buf.length + a * n];
    return y;
}

template <class Real>
UpsampledBuffer<Real> zero_fill(const SignalSet<Real>& y, const AssaParams& assa) {
    detail::require(static_cast<std::int64_t>(y.n_samples()) * assa.alpha == assa.n_t_up,
                    "signal length does not match ASSA parameters");
    UpsampledBuffer<Real> up(y.n_detectors, static_cast<std::size_t>(assa.n_t_up));
    const std::size_t Nt = y.n_samples();
    const auto a = static_cast<std::size_t>(assa.alpha);
    for (std::size_t j = 0; j < y.n_detectors; ++j)
        for (std::size_t n = 0; n < Nt; ++n) up.data[j * up.length + a * n] = y.data[j * Nt + n];
    return up;
}

/// g_i = sum_j buf_j[k_ij] / r_ij over valid pairs, accumulated in ascending j per voxel.
template <class Real>
VoxelImage<Real> backproject(const UpsampledBuffer<Real>& buf, const ToFTable& tof, const VoxelGrid& grid) {
    detail::require(grid.size() == tof.n_voxels && buf.n_detectors == tof.n_detectors,
                    "buffer/grid do not match time-of-flight table");
    const std::size_t M = tof.n_voxels;
    VoxelImage<Real> g(grid);
    parallel_for(
        0, M,
        [&](std::size_t i0, std::size_t i1) {
            Real* out = g.values.data();
            for (std::size_t j = 0; j < tof.n_detectors; ++j) {
                const Real* bj = buf.data.data() + j * buf.length;
                const std::size_t base = j * M;
                for (std::size_t i = i0; i < i1; ++i) {
                    if (!tof.valid[base + i]) continue;
                    out[i] += bj[tof.aligned_indices[base + i]] / static_cast<Real>(tof.distances[base + i]);
                }
            }
        },
        256);
    return g;
}

template <class Real>
SignalSet<Real> forward(const VoxelImage<Real>& image, const ToFTable& tof, const KernelTaps& taps,
                        const AssaParams& assa, const AcousticConfig& acoustic) {
    return decimate(scatter_convolve(project_up(image, tof, assa), taps), assa, acoustic);
}

template <class Real>
VoxelImage<Real> adjoint(const SignalSet<Real>& residual, const ToFTable& tof, const KernelTaps& taps,
                         const AssaParams& assa, const VoxelGrid& grid) {
    detail::require(residual.n_detectors == tof.n_detectors, "residual does not match detector count");
    return backproject(correlate(zero_fill(residual, assa), taps), tof, grid);
}

/// Bundles the precomputed artifacts shared by every forward/adjoint call.
class ForwardModel {
public:
    ForwardModel(const VoxelGrid& grid, const DetectorArray& array, const AcousticConfig& acoustic, double sigma,
                 int n_min = 25, std::size_t max_pairs = kDefaultMaxPairs)
        : ForwardModel(grid, array, acoustic, compute_assa(sigma, acoustic, n_min), max_pairs) {}

    ForwardModel(const VoxelGrid& grid, const DetectorArray& array, const AcousticConfig& acoustic,
                 const AssaParams& assa, std::size_t max_pairs = kDefaultMaxPairs)
        : grid_(grid), array_(array), acoustic_(acoustic), assa_(assa),
          taps_(make_kernel_taps(assa, assa.sigma, acoustic)),
          tof_(build_tof_table(grid, array, acoustic, assa, max_pairs)) {}

    const VoxelGrid& grid() const { return grid_; }
    const DetectorArray& array() const { return array_; }
    const AcousticConfig& acoustic() const { return acoustic_; }
    const AssaParams& assa() const { return assa_; }
    const KernelTaps& taps() const { return taps_; }
    const ToFTable& tof() const { return tof_; }
    std::size_t n_data() const { return array_.size() * static_cast<std::size_t>(acoustic_.n_samples); }

    template <class Real>
    SignalSet<Real> forward(const VoxelImage<Real>& x) const {
        return gpair::forward(x, tof_, taps_, assa_, acoustic_);
    }

    template <class Real>
    VoxelImage<Real> adjoint(const SignalSet<Real>& r) const {
        return gpair::adjoint(r, tof_, taps_, assa_, grid_);
    }

private:
    VoxelGrid grid_;
    DetectorArray array_;
    AcousticConfig acoustic_;
    AssaParams assa_;
    KernelTaps taps_;
    ToFTable tof_;
};

template <class T>
double inner_product(std::span<const T> a, std::span<const T> b) {
    detail::require(a.size() == b.size(), "inner product of mismatched lengths");
    return parallel_sum(a.size(), [&](std::size_t i) { return static_cast<double>(a[i]) * static_cast<double>(b[i]); });
}

template <class T>
double l2_norm(std::span<const T> a) {
    return std::sqrt(inner_product(a, a));
}

struct DotTestReport {
    std::vector<double> discrepancies;
    double max_discrepancy = 0.0;
};

namespace detail {

// Uniform double in [0, 1) from the top 53 bits; stable across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double standard_normal(std::mt19937_64& rng) {
    double u1 = unit_uniform(rng);
    while (u1 <= 0.0) u1 = unit_uniform(rng);
    const double u2 = unit_uniform(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

} // namespace detail

/// Relative discrepancy |<Ax, d> - <x, A^T d>| / (|Ax| |d|) over random (x, d) pairs.
template <class Real = double>
DotTestReport adjoint_dot_test(const ForwardModel& model, int trials, std::uint64_t seed) {
    detail::require(trials >= 1, "dot test needs at least one trial");
    std::mt19937_64 rng(seed);
    DotTestReport rep;
    for (int t = 0; t < trials; ++t) {
        VoxelImage<Real> x(model.grid());
        for (auto& v : x.values) v = static_cast<Real>(detail::unit_uniform(rng));
        SignalSet<Real> d(model.acoustic(), model.array().size());
        for (auto& v : d.data) v = static_cast<Real>(detail::standard_normal(rng));
        const auto ax = model.forward(x);
        const auto atd = model.adjoint(d);
        const double lhs = inner_product<Real>(ax.data, d.data);
        const double rhs = inner_product<Real>(x.values, atd.values);
        const double scale = l2_norm<Real>(ax.data) * l2_norm<Real>(d.data);
        const double disc = scale > 0.0 ? std::abs(lhs - rhs) / scale : std::abs(lhs - rhs);
        rep.discrepancies.push_back(disc);
        rep.max_discrepancy = std::max(rep.max_discrepancy, disc);
    }
    return rep;
}

template <class Real = double>
DotTestReport adjoint_dot_test(const VoxelGrid& grid, const DetectorArray& array, const AcousticConfig& acoustic,
                               const AssaParams& assa, int trials, std::uint64_t seed) {
    detail::require(trials >= 1, "dot test needs at least one trial");
    return adjoint_dot_test<Real>(ForwardModel(grid, array, acoustic, assa), trials, seed);
}

} // namespace gpair
