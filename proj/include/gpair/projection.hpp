#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "gpair/error.hpp"
#include "gpair/geometry.hpp"

namespace gpair {

enum class Axis { x = 0, y = 1, z = 2 };

inline Axis axis_from_string(const std::string& s) {
    if (s == "x") return Axis::x;
    if (s == "y") return Axis::y;
    if (s == "z") return Axis::z;
    throw InvalidArgument("axis must be x, y or z");
}

/// Row-major plane. Rows/cols are the two remaining axes in (z, y, x) order
/// of significance: z-view is (y, x), y-view is (z, x), x-view is (z, y).
struct Image2D {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    double& operator()(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

namespace detail {

inline std::array<int, 2> plane_axes(Axis a) {
    switch (a) {
    case Axis::x: return {2, 1};
    case Axis::y: return {2, 0};
    case Axis::z: return {1, 0};
    }
    return {1, 0};
}

} // namespace detail

/// Maximum amplitude projection along `axis`.
template <class Real>
Image2D max_projection(const VoxelImage<Real>& x, Axis axis) {
    const auto& d = x.grid.dims;
    const auto [ra, ca] = detail::plane_axes(axis);
    Image2D out{d[ra], d[ca], std::vector<double>(static_cast<std::size_t>(d[ra]) * d[ca], -std::numeric_limits<double>::infinity())};
    for (int iz = 0; iz < d[2]; ++iz)
        for (int iy = 0; iy < d[1]; ++iy)
            for (int ix = 0; ix < d[0]; ++ix) {
                const std::array<int, 3> c{ix, iy, iz};
                double& o = out(c[ra], c[ca]);
                o = std::max(o, static_cast<double>(x.at(ix, iy, iz)));
            }
    return out;
}

template <class Real>
Image2D slice_extract(const VoxelImage<Real>& x, Axis axis, int index) {
    const auto& d = x.grid.dims;
    const int a = static_cast<int>(axis);
    if (index < 0 || index >= d[a]) throw InvalidArgument("slice index out of range");
    const auto [ra, ca] = detail::plane_axes(axis);
    Image2D out{d[ra], d[ca], std::vector<double>(static_cast<std::size_t>(d[ra]) * d[ca])};
    for (int r = 0; r < d[ra]; ++r)
        for (int c = 0; c < d[ca]; ++c) {
            std::array<int, 3> p{};
            p[a] = index;
            p[ra] = r;
            p[ca] = c;
            out(r, c) = static_cast<double>(x.at(p[0], p[1], p[2]));
        }
    return out;
}

template <class Real>
void slice_insert(VoxelImage<Real>& x, Axis axis, int index, const Image2D& plane) {
    const auto& d = x.grid.dims;
    const int a = static_cast<int>(axis);
    if (index < 0 || index >= d[a]) throw InvalidArgument("slice index out of range");
    const auto [ra, ca] = detail::plane_axes(axis);
    detail::require(plane.rows == d[ra] && plane.cols == d[ca], "plane shape does not match volume");
    for (int r = 0; r < d[ra]; ++r)
        for (int c = 0; c < d[ca]; ++c) {
            std::array<int, 3> p{};
            p[a] = index;
            p[ra] = r;
            p[ca] = c;
            x.at(p[0], p[1], p[2]) = static_cast<Real>(plane(r, c));
        }
}

/// 8-bit binary PGM, linearly mapped from [min, max].
inline void write_pgm(const std::string& path, const Image2D& img) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "'");
    const auto [lo_it, hi_it] = std::minmax_element(img.values.begin(), img.values.end());
    const double lo = img.values.empty() ? 0.0 : *lo_it;
    const double hi = img.values.empty() ? 1.0 : *hi_it;
    os << "P5\n" << img.cols << ' ' << img.rows << "\n255\n";
    for (double v : img.values) {
        const double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
        os.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)))));
    }
}

} // namespace gpair
