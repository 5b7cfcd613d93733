#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "gpair/acoustic.hpp"
#include "gpair/assa.hpp"
#include "gpair/error.hpp"
#include "gpair/geometry_types.hpp"
#include "gpair/parallel.hpp"

namespace gpair {

/// Regular lattice of voxel centers. Linear index i = ix + nx * (iy + ny * iz).
struct VoxelGrid {
    std::array<int, 3> dims{1, 1, 1};
    double spacing = 1e-4;
    Vec3 origin{}; // center of voxel (0, 0, 0)

    int nx() const { return dims[0]; }
    int ny() const { return dims[1]; }
    int nz() const { return dims[2]; }
    std::size_t size() const {
        return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
               static_cast<std::size_t>(dims[2]);
    }

    std::size_t index(int ix, int iy, int iz) const {
        return static_cast<std::size_t>(ix) +
               static_cast<std::size_t>(dims[0]) *
                   (static_cast<std::size_t>(iy) + static_cast<std::size_t>(dims[1]) * iz);
    }

    std::array<int, 3> coords(std::size_t i) const {
        const auto nx_ = static_cast<std::size_t>(dims[0]);
        const auto ny_ = static_cast<std::size_t>(dims[1]);
        return {static_cast<int>(i % nx_), static_cast<int>((i / nx_) % ny_),
                static_cast<int>(i / (nx_ * ny_))};
    }

    Vec3 position(std::size_t i) const {
        const auto c = coords(i);
        return {origin.x + spacing * c[0], origin.y + spacing * c[1], origin.z + spacing * c[2]};
    }

    bool contains(int ix, int iy, int iz) const {
        return ix >= 0 && iy >= 0 && iz >= 0 && ix < dims[0] && iy < dims[1] && iz < dims[2];
    }

    void validate() const {
        detail::require(dims[0] >= 1 && dims[1] >= 1 && dims[2] >= 1, "grid dims must be >= 1");
        detail::require(spacing > 0.0, "grid spacing must be positive");
        const double m = static_cast<double>(dims[0]) * dims[1] * dims[2];
        detail::require(m < static_cast<double>(std::numeric_limits<std::int64_t>::max()),
                        "grid too large");
    }

    friend bool operator==(const VoxelGrid&, const VoxelGrid&) = default;
};

/// Grid whose center lies at `center`.
inline VoxelGrid centered_grid(std::array<int, 3> dims, double spacing, Vec3 center = {}) {
    VoxelGrid g{dims, spacing, {}};
    g.origin = {center.x - 0.5 * spacing * (dims[0] - 1), center.y - 0.5 * spacing * (dims[1] - 1),
                center.z - 0.5 * spacing * (dims[2] - 1)};
    g.validate();
    return g;
}

template <class Real>
struct VoxelImage {
    VoxelGrid grid;
    std::vector<Real> values;

    VoxelImage() = default;
    explicit VoxelImage(const VoxelGrid& g, Real fill = Real(0)) : grid(g), values(g.size(), fill) {}
    VoxelImage(const VoxelGrid& g, std::vector<Real> v) : grid(g), values(std::move(v)) {
        detail::require(values.size() == grid.size(), "image length does not match grid");
    }

    std::size_t size() const { return values.size(); }
    Real& operator[](std::size_t i) { return values[i]; }
    const Real& operator[](std::size_t i) const { return values[i]; }
    Real& at(int ix, int iy, int iz) { return values[grid.index(ix, iy, iz)]; }
    const Real& at(int ix, int iy, int iz) const { return values[grid.index(ix, iy, iz)]; }
};

template <class To, class From>
VoxelImage<To> image_cast(const VoxelImage<From>& in) {
    VoxelImage<To> out(in.grid);
    std::transform(in.values.begin(), in.values.end(), out.values.begin(),
                   [](From v) { return static_cast<To>(v); });
    return out;
}

enum class ArrayKind { planar, hemispherical, custom };

inline std::string to_string(ArrayKind k) {
    switch (k) {
    case ArrayKind::planar: return "planar";
    case ArrayKind::hemispherical: return "hemispherical";
    case ArrayKind::custom: return "custom";
    }
    return "custom";
}

inline ArrayKind array_kind_from_string(const std::string& s) {
    if (s == "planar") return ArrayKind::planar;
    if (s == "hemispherical" || s == "hemi") return ArrayKind::hemispherical;
    if (s == "custom") return ArrayKind::custom;
    throw InvalidArgument("unknown array kind '" + s + "'");
}

struct DetectorArray {
    std::vector<Vec3> positions;
    ArrayKind label = ArrayKind::custom;

    std::size_t size() const { return positions.size(); }

    void validate() const {
        detail::require(!positions.empty(), "detector array is empty");
        std::vector<Vec3> sorted = positions;
        std::sort(sorted.begin(), sorted.end(), [](const Vec3& a, const Vec3& b) {
            return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
        });
        auto dup = std::adjacent_find(sorted.begin(), sorted.end());
        detail::require(dup == sorted.end(), "detector array contains duplicate positions");
    }
};

inline DetectorArray build_planar_array(double aperture_x, double aperture_y, int n_per_side,
                                        double plane_z) {
    detail::require(aperture_x > 0.0 && aperture_y > 0.0, "aperture must be positive");
    detail::require(n_per_side >= 1, "n_per_side must be >= 1");
    DetectorArray a;
    a.label = ArrayKind::planar;
    a.positions.reserve(static_cast<std::size_t>(n_per_side) * n_per_side);
    const double px = n_per_side > 1 ? aperture_x / (n_per_side - 1) : 0.0;
    const double py = n_per_side > 1 ? aperture_y / (n_per_side - 1) : 0.0;
    const double x0 = n_per_side > 1 ? -0.5 * aperture_x : 0.0;
    const double y0 = n_per_side > 1 ? -0.5 * aperture_y : 0.0;
    for (int iy = 0; iy < n_per_side; ++iy)
        for (int ix = 0; ix < n_per_side; ++ix)
            a.positions.push_back({x0 + px * ix, y0 + py * iy, plane_z});
    return a;
}

/// Fibonacci spiral over the lower hemisphere (z <= center.z); point 0 is the pole.
inline DetectorArray build_hemispherical_array(double radius, const Vec3& center, int n) {
    detail::require(radius > 0.0, "radius must be positive");
    detail::require(n >= 1, "detector count must be >= 1");
    DetectorArray a;
    a.label = ArrayKind::hemispherical;
    a.positions.reserve(static_cast<std::size_t>(n));
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        // Equal-area spacing in cos(polar angle) over (0, 1].
        const double c = 1.0 - static_cast<double>(i) / n;
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        const double phi = golden_angle * i;
        a.positions.push_back(
            {center.x + radius * s * std::cos(phi), center.y + radius * s * std::sin(phi), center.z - radius * c});
    }
    return a;
}

inline constexpr std::size_t kDefaultMaxPairs = std::size_t{1} << 28;

/// Precomputed source-detector distances and aligned upsampled-clock indices.
/// Pair (i, j) is stored at j * M + i so each detector's pairs are contiguous.
struct ToFTable {
    std::size_t n_voxels = 0;
    std::size_t n_detectors = 0;
    std::vector<double> distances;
    std::vector<std::int32_t> aligned_indices;
    std::vector<std::uint8_t> valid;

    std::size_t pair(std::size_t voxel, std::size_t detector) const { return detector * n_voxels + voxel; }
    std::size_t valid_count() const {
        return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
    }
};

/// Nearest upsampled index of arrival time r / v (shifted by the acquisition offset t0).
inline std::int64_t aligned_index(double r, const AcousticConfig& acoustic, const AssaParams& assa) {
    double x = r / acoustic.speed_of_sound * assa.f_s_up;
    if (acoustic.t0 != 0.0) x -= acoustic.t0 * assa.f_s_up;
    return static_cast<std::int64_t>(std::floor(x + 0.5));
}

inline ToFTable build_tof_table(const VoxelGrid& grid, const DetectorArray& array,
                                const AcousticConfig& acoustic, const AssaParams& assa,
                                std::size_t max_pairs = kDefaultMaxPairs) {
    grid.validate();
    array.validate();
    acoustic.validate();
    detail::require(assa.n_t_up == static_cast<std::int64_t>(assa.alpha) * acoustic.n_samples,
                    "ASSA parameters were built for a different acquisition");
    detail::require(assa.n_t_up < std::numeric_limits<std::int32_t>::max(),
                    "upsampled record length must be < 2^31");
    const std::size_t M = grid.size();
    const std::size_t Nd = array.size();
    if (static_cast<double>(M) * static_cast<double>(Nd) > static_cast<double>(max_pairs))
        throw ResourceLimit("time-of-flight table would hold " + std::to_string(M) + " x " +
                            std::to_string(Nd) + " pairs, cap is " + std::to_string(max_pairs));

    ToFTable t;
    t.n_voxels = M;
    t.n_detectors = Nd;
    t.distances.resize(M * Nd);
    t.aligned_indices.resize(M * Nd);
    t.valid.resize(M * Nd);
    const std::int64_t lo = assa.K;
    const std::int64_t hi = assa.n_t_up - 1 - assa.K;
    parallel_for(0, M, [&](std::size_t i0, std::size_t i1) {
        for (std::size_t i = i0; i < i1; ++i) {
            const Vec3 r_i = grid.position(i);
            for (std::size_t j = 0; j < Nd; ++j) {
                const double r = distance(r_i, array.positions[j]);
                if (r == 0.0) throw GeometryConflict(i, j);
                const std::int64_t k = aligned_index(r, acoustic, assa);
                const std::size_t p = j * M + i;
                t.distances[p] = r;
                const bool ok = k >= lo && k <= hi;
                t.aligned_indices[p] = ok ? static_cast<std::int32_t>(k) : -1;
                t.valid[p] = ok ? 1 : 0;
            }
        }
    });
    return t;
}

} // namespace gpair
