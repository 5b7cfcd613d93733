#pragma once

// Deterministic synthetic phantoms. Random draws use raw mt19937_64 bits so
// a (kind, seed, params) triple produces the same volume on every platform.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gpair/error.hpp"
#include "gpair/geometry.hpp"
#include "gpair/operators.hpp"

namespace gpair {

enum class PhantomKind { blobs, tubes, grid_of_points };

inline PhantomKind phantom_kind_from_string(const std::string& s) {
    if (s == "blobs") return PhantomKind::blobs;
    if (s == "tubes") return PhantomKind::tubes;
    if (s == "grid-of-points" || s == "points") return PhantomKind::grid_of_points;
    throw InvalidArgument("unknown phantom kind '" + s + "'");
}

inline std::string to_string(PhantomKind k) {
    switch (k) {
    case PhantomKind::blobs: return "blobs";
    case PhantomKind::tubes: return "tubes";
    case PhantomKind::grid_of_points: return "grid-of-points";
    }
    return "blobs";
}

struct PhantomSpec {
    PhantomKind kind = PhantomKind::blobs;
    std::uint64_t seed = 0;
    int count = 5;
    // Gaussian width of blobs / tube cross-sections, in voxels.
    double radius_min = 1.5;
    double radius_max = 3.0;
    double amplitude_min = 0.5;
    double amplitude_max = 1.0;
    // Fraction of the grid (per axis, centred) in which features are placed.
    double extent = 0.6;
    int segments = 4; // tubes: polyline segments per tube

    void validate() const {
        detail::require(count >= 1, "phantom count must be >= 1");
        detail::require(radius_min > 0.0 && radius_min <= radius_max, "need 0 < radius_min <= radius_max");
        detail::require(amplitude_min >= 0.0 && amplitude_min <= amplitude_max, "need 0 <= amplitude_min <= amplitude_max");
        detail::require(extent > 0.0 && extent <= 1.0, "extent must be in (0, 1]");
        detail::require(segments >= 1, "tube segments must be >= 1");
    }
};

namespace detail {

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }

// Voxel-unit point inside the centred placement box.
inline std::array<double, 3> draw_point(std::mt19937_64& rng, const VoxelGrid& g, double extent) {
    std::array<double, 3> p{};
    for (int a = 0; a < 3; ++a) {
        const double c = 0.5 * (g.dims[a] - 1);
        const double h = 0.5 * extent * (g.dims[a] - 1);
        p[a] = uniform_in(rng, c - h, c + h);
    }
    return p;
}

inline double segment_distance_sq(const std::array<double, 3>& p, const std::array<double, 3>& a,
                                  const std::array<double, 3>& b) {
    std::array<double, 3> ab{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    std::array<double, 3> ap{p[0] - a[0], p[1] - a[1], p[2] - a[2]};
    const double len2 = ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2];
    double t = len2 > 0.0 ? (ap[0] * ab[0] + ap[1] * ab[1] + ap[2] * ab[2]) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double e = ap[k] - t * ab[k];
        d2 += e * e;
    }
    return d2;
}

} // namespace detail

/// Non-negative phantom volume; values are in arbitrary pressure units.
///  - blobs: sum of isotropic Gaussian blobs.
///  - tubes: a branching tree of piecewise-linear tubes with Gaussian
///    cross-section (each new tube starts on an existing vertex, so the
///    network is connected); the volume takes the max over tubes.
///  - grid-of-points: count^3 single-voxel impulses on a regular lattice.
inline VoxelImage<double> generate_phantom(const PhantomSpec& spec, const VoxelGrid& grid) {
    spec.validate();
    grid.validate();
    std::mt19937_64 rng(spec.seed);
    VoxelImage<double> out(grid);
    const std::size_t M = grid.size();

    switch (spec.kind) {
    case PhantomKind::blobs: {
        for (int b = 0; b < spec.count; ++b) {
            const auto c = detail::draw_point(rng, grid, spec.extent);
            const double s = detail::uniform_in(rng, spec.radius_min, spec.radius_max);
            const double a = detail::uniform_in(rng, spec.amplitude_min, spec.amplitude_max);
            for (std::size_t i = 0; i < M; ++i) {
                const auto q = grid.coords(i);
                const double dx = q[0] - c[0], dy = q[1] - c[1], dz = q[2] - c[2];
                out.values[i] += a * std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * s * s));
            }
        }
        break;
    }
    case PhantomKind::tubes: {
        std::vector<std::array<double, 3>> vertices;
        const double step = 0.35 * spec.extent * *std::min_element(grid.dims.begin(), grid.dims.end());
        for (int t = 0; t < spec.count; ++t) {
            std::array<double, 3> p = vertices.empty()
                                          ? detail::draw_point(rng, grid, spec.extent)
                                          : vertices[static_cast<std::size_t>(rng() % vertices.size())];
            const double s = detail::uniform_in(rng, spec.radius_min, spec.radius_max);
            const double a = detail::uniform_in(rng, spec.amplitude_min, spec.amplitude_max);
            if (vertices.empty()) vertices.push_back(p);
            for (int k = 0; k < spec.segments; ++k) {
                // Random direction, clamped into the placement box.
                std::array<double, 3> dir{detail::standard_normal(rng), detail::standard_normal(rng),
                                          detail::standard_normal(rng)};
                const double n = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
                std::array<double, 3> q{};
                for (int ax = 0; ax < 3; ++ax) {
                    const double c = 0.5 * (grid.dims[ax] - 1);
                    const double h = 0.5 * spec.extent * (grid.dims[ax] - 1);
                    q[ax] = std::clamp(p[ax] + step * dir[ax] / (n > 0 ? n : 1.0), c - h, c + h);
                }
                for (std::size_t i = 0; i < M; ++i) {
                    const auto c = grid.coords(i);
                    const std::array<double, 3> pt{double(c[0]), double(c[1]), double(c[2])};
                    const double d2 = detail::segment_distance_sq(pt, p, q);
                    out.values[i] = std::max(out.values[i], a * std::exp(-d2 / (2.0 * s * s)));
                }
                vertices.push_back(q);
                p = q;
            }
        }
        break;
    }
    case PhantomKind::grid_of_points: {
        const double a = spec.amplitude_max;
        std::array<std::vector<int>, 3> idx;
        for (int ax = 0; ax < 3; ++ax) {
            const double c = 0.5 * (grid.dims[ax] - 1);
            const double h = 0.5 * spec.extent * (grid.dims[ax] - 1);
            for (int k = 0; k < spec.count; ++k) {
                const double f = spec.count == 1 ? 0.5 : static_cast<double>(k) / (spec.count - 1);
                idx[ax].push_back(static_cast<int>(std::lround(c - h + 2.0 * h * f)));
            }
        }
        for (int z : idx[2])
            for (int y : idx[1])
                for (int x : idx[0]) out.at(x, y, z) = a;
        break;
    }
    }
    return out;
}

} // namespace gpair

namespace gpair {

/// Adds zero-mean Gaussian noise with std = max|signal| / snr (amplitude SNR).
template <class Real>
void add_noise_snr(SignalSet<Real>& s, double snr, std::uint64_t seed) {
    detail::require(snr > 0.0, "noise SNR must be positive");
    double peak = 0.0;
    for (const Real v : s.data) peak = std::max(peak, std::abs(static_cast<double>(v)));
    const double sd = peak / snr;
    std::mt19937_64 rng(seed);
    for (auto& v : s.data) v = static_cast<Real>(static_cast<double>(v) + sd * detail::standard_normal(rng));
}

} // namespace gpair
