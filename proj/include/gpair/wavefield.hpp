#pragma once

// Continuous-time pressure of a single Gaussian source in a homogeneous,
// lossless medium, plus slow reference implementations of the forward model.

#include <cmath>
#include <numbers>
#include <vector>

#include "gpair/acoustic.hpp"
#include "gpair/error.hpp"
#include "gpair/geometry.hpp"
#include "gpair/operators.hpp"
#include "gpair/parallel.hpp"

namespace gpair {

/// Integral of the Gaussian over the sphere of radius r_prime centred on the
/// detector, where r is the detector-to-source distance.
inline double spherical_integral(const GaussianSource& s, double r, double r_prime) {
    detail::require(r > 0.0, "detector must not coincide with the source center");
    detail::require(r_prime >= 0.0, "sphere radius must be non-negative");
    const double two_var = 2.0 * s.sigma * s.sigma;
    const double dm = r - r_prime;
    const double dp = r + r_prime;
    return s.amplitude * 2.0 * std::numbers::pi * s.sigma * s.sigma * (r_prime / r) *
           (std::exp(-dm * dm / two_var) - std::exp(-dp * dp / two_var));
}

/// Outgoing plus incoming wave, (A / 2r) [(r - vt) e^{-(r-vt)^2/2s^2} + (r + vt) e^{-(r+vt)^2/2s^2}].
inline double pressure_full(const GaussianSource& s, double r, double t, const AcousticConfig& ac) {
    detail::require(r > 0.0, "detector must not coincide with the source center");
    detail::require(t >= 0.0, "time must be non-negative");
    const double two_var = 2.0 * s.sigma * s.sigma;
    const double vt = ac.speed_of_sound * t;
    const double dm = r - vt;
    const double dp = r + vt;
    return s.amplitude / (2.0 * r) * (dm * std::exp(-dm * dm / two_var) + dp * std::exp(-dp * dp / two_var));
}

/// Outgoing N-shaped wave only, truncated to |r - vt| < 3 sigma.
inline double pressure_outgoing(const GaussianSource& s, double r, double t, const AcousticConfig& ac) {
    detail::require(r > 0.0, "detector must not coincide with the source center");
    const double d = r - ac.speed_of_sound * t;
    if (!(std::abs(d) < 3.0 * s.sigma)) return 0.0;
    return s.amplitude / (2.0 * r) * d * std::exp(-d * d / (2.0 * s.sigma * s.sigma));
}

/// Direct enumeration of every source-detector pair in double precision.
/// Each sample accumulates sources in ascending voxel order.
inline SignalSet<double> oracle_forward(const VoxelImage<double>& image, const DetectorArray& array,
                                        const AcousticConfig& ac, double sigma) {
    ac.validate();
    array.validate();
    detail::require(sigma > 0.0, "sigma must be positive");
    SignalSet<double> y(ac, array.size());
    const std::size_t M = image.size();
    const auto Nt = static_cast<std::int64_t>(ac.n_samples);
    const double v = ac.speed_of_sound;
    const double fs = ac.sampling_rate;
    parallel_for(0, array.size(), [&](std::size_t j0, std::size_t j1) {
        for (std::size_t j = j0; j < j1; ++j) {
            auto tr = y.trace(j);
            for (std::size_t i = 0; i < M; ++i) {
                const double r = distance(image.grid.position(i), array.positions[j]);
                if (r == 0.0) throw GeometryConflict(i, j);
                const double a = image.values[i];
                if (a == 0.0) continue;
                const GaussianSource src{image.grid.position(i), a, sigma};
                // Samples with |r - v t_n| < 3 sigma, padded by one on each side.
                const double t_lo = (r - 3.0 * sigma) / v - ac.t0;
                const double t_hi = (r + 3.0 * sigma) / v - ac.t0;
                const std::int64_t n0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(t_lo * fs)) - 1);
                const std::int64_t n1 = std::min<std::int64_t>(Nt - 1, static_cast<std::int64_t>(std::ceil(t_hi * fs)) + 1);
                for (std::int64_t n = n0; n <= n1; ++n)
                    tr[static_cast<std::size_t>(n)] += pressure_outgoing(src, r, ac.time(n), ac);
            }
        }
    });
    return y;
}

/// Column-major dense matrix; column i is forward(e_i) flattened detector-major.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double operator()(std::size_t r, std::size_t c) const { return values[c * rows + r]; }

    std::vector<double> multiply(std::span<const double> x) const {
        detail::require(x.size() == cols, "matrix-vector size mismatch");
        std::vector<double> y(rows, 0.0);
        for (std::size_t c = 0; c < cols; ++c) {
            const double xc = x[c];
            const double* col = values.data() + c * rows;
            for (std::size_t r = 0; r < rows; ++r) y[r] += col[r] * xc;
        }
        return y;
    }

    std::vector<double> multiply_transpose(std::span<const double> y) const {
        detail::require(y.size() == rows, "matrix-vector size mismatch");
        std::vector<double> x(cols, 0.0);
        for (std::size_t c = 0; c < cols; ++c) {
            const double* col = values.data() + c * rows;
            double acc = 0.0;
            for (std::size_t r = 0; r < rows; ++r) acc += col[r] * y[r];
            x[c] = acc;
        }
        return x;
    }
};

inline constexpr std::size_t kDefaultDenseCap = 10'000'000;

inline DenseMatrix build_dense_matrix(const VoxelGrid& grid, const DetectorArray& array, const AcousticConfig& ac,
                                      const AssaParams& assa, std::size_t cap = kDefaultDenseCap) {
    const std::size_t M = grid.size();
    const std::size_t rows = array.size() * static_cast<std::size_t>(ac.n_samples);
    if (static_cast<double>(M) * static_cast<double>(rows) > static_cast<double>(cap))
        throw ResourceLimit("dense matrix of " + std::to_string(rows) + " x " + std::to_string(M) +
                            " exceeds cap of " + std::to_string(cap) + " entries");
    const ForwardModel model(grid, array, ac, assa);
    DenseMatrix A{rows, M, std::vector<double>(rows * M, 0.0)};
    VoxelImage<double> e(grid);
    for (std::size_t i = 0; i < M; ++i) {
        e.values[i] = 1.0;
        const auto col = model.forward(e);
        std::copy(col.data.begin(), col.data.end(), A.values.begin() + static_cast<std::ptrdiff_t>(i * rows));
        e.values[i] = 0.0;
    }
    return A;
}

} // namespace gpair
