#pragma once

// Smoothed total variation and Hessian-Frobenius penalties,
//   R(x) = sum_i sqrt( sum_s w_s (L_s x)_i^2 + eps ),
// where each L_s is a finite-difference stencil. A stencil evaluates to zero
// at any voxel where one of its taps would leave the volume, which is the
// replicate-boundary convention (differences across the face vanish).

#include <array>
#include <cmath>
#include <vector>

#include "gpair/error.hpp"
#include "gpair/geometry.hpp"
#include "gpair/parallel.hpp"

namespace gpair {

struct RegConfig {
    double lambda = 0.0;
    double beta = 0.0;
    double eps_reg = 1e-8;

    void validate() const {
        detail::require(lambda >= 0.0 && beta >= 0.0, "regularization weights must be non-negative");
        detail::require(eps_reg > 0.0, "eps_reg must be positive");
    }
};

template <class Real>
struct RegResult {
    double value = 0.0;
    VoxelImage<Real> grad;
};

namespace detail {

struct StencilTap {
    int dx, dy, dz;
    double coef;
};

struct Stencil {
    std::array<StencilTap, 4> taps;
    int n_taps;
    double weight; // multiplicity in the squared norm
};

inline std::vector<Stencil> gradient_stencils() {
    return {
        {{{{0, 0, 0, -1.0}, {1, 0, 0, 1.0}}}, 2, 1.0},
        {{{{0, 0, 0, -1.0}, {0, 1, 0, 1.0}}}, 2, 1.0},
        {{{{0, 0, 0, -1.0}, {0, 0, 1, 1.0}}}, 2, 1.0},
    };
}

// Pure second differences are centred [1, -2, 1]; mixed ones are
// forward-forward cross differences and appear twice (pq and qp).
inline std::vector<Stencil> hessian_stencils() {
    return {
        {{{{-1, 0, 0, 1.0}, {0, 0, 0, -2.0}, {1, 0, 0, 1.0}}}, 3, 1.0},
        {{{{0, -1, 0, 1.0}, {0, 0, 0, -2.0}, {0, 1, 0, 1.0}}}, 3, 1.0},
        {{{{0, 0, -1, 1.0}, {0, 0, 0, -2.0}, {0, 0, 1, 1.0}}}, 3, 1.0},
        {{{{0, 0, 0, 1.0}, {1, 0, 0, -1.0}, {0, 1, 0, -1.0}, {1, 1, 0, 1.0}}}, 4, 2.0},
        {{{{0, 0, 0, 1.0}, {1, 0, 0, -1.0}, {0, 0, 1, -1.0}, {1, 0, 1, 1.0}}}, 4, 2.0},
        {{{{0, 0, 0, 1.0}, {0, 1, 0, -1.0}, {0, 0, 1, -1.0}, {0, 1, 1, 1.0}}}, 4, 2.0},
    };
}

inline bool stencil_fits(const VoxelGrid& g, const Stencil& s, int ix, int iy, int iz) {
    for (int t = 0; t < s.n_taps; ++t)
        if (!g.contains(ix + s.taps[t].dx, iy + s.taps[t].dy, iz + s.taps[t].dz)) return false;
    return true;
}

template <class Real>
RegResult<Real> stencil_penalty(const VoxelImage<Real>& image, const std::vector<Stencil>& stencils, double eps) {
    detail::require(eps > 0.0, "eps_reg must be positive");
    const VoxelGrid& g = image.grid;
    const std::size_t M = g.size();
    const std::size_t S = stencils.size();
    // u[s * M + i] = w_s (L_s x)_i / sqrt(...), the outer derivative per stencil.
    std::vector<double> u(S * M, 0.0);
    std::vector<double> root(M, 0.0);
    parallel_for(0, M, [&](std::size_t i0, std::size_t i1) {
        std::vector<double> diff(S);
        for (std::size_t i = i0; i < i1; ++i) {
            const auto c = g.coords(i);
            double sq = 0.0;
            for (std::size_t s = 0; s < S; ++s) {
                const Stencil& st = stencils[s];
                double d = 0.0;
                if (stencil_fits(g, st, c[0], c[1], c[2]))
                    for (int t = 0; t < st.n_taps; ++t)
                        d += st.taps[t].coef *
                             static_cast<double>(image.at(c[0] + st.taps[t].dx, c[1] + st.taps[t].dy, c[2] + st.taps[t].dz));
                diff[s] = d;
                sq += st.weight * d * d;
            }
            const double r = std::sqrt(sq + eps);
            root[i] = r;
            for (std::size_t s = 0; s < S; ++s) u[s * M + i] = stencils[s].weight * diff[s] / r;
        }
    });

    RegResult<Real> out{parallel_sum(M, [&](std::size_t i) { return root[i]; }), VoxelImage<Real>(g)};
    // Transpose by gathering: voxel j receives coef_t * u_s(j - offset_t).
    parallel_for(0, M, [&](std::size_t j0, std::size_t j1) {
        for (std::size_t j = j0; j < j1; ++j) {
            const auto c = g.coords(j);
            double acc = 0.0;
            for (std::size_t s = 0; s < S; ++s) {
                const Stencil& st = stencils[s];
                for (int t = 0; t < st.n_taps; ++t) {
                    const int cx = c[0] - st.taps[t].dx, cy = c[1] - st.taps[t].dy, cz = c[2] - st.taps[t].dz;
                    if (!g.contains(cx, cy, cz) || !stencil_fits(g, st, cx, cy, cz)) continue;
                    acc += st.taps[t].coef * u[s * M + g.index(cx, cy, cz)];
                }
            }
            out.grad.values[j] = static_cast<Real>(acc);
        }
    });
    return out;
}

} // namespace detail

template <class Real>
RegResult<Real> tv_value_grad(const VoxelImage<Real>& image, double eps_reg) {
    static const auto stencils = detail::gradient_stencils();
    return detail::stencil_penalty(image, stencils, eps_reg);
}

template <class Real>
RegResult<Real> hessian_value_grad(const VoxelImage<Real>& image, double eps_reg) {
    static const auto stencils = detail::hessian_stencils();
    return detail::stencil_penalty(image, stencils, eps_reg);
}

/// R_H + beta * R_TV.
template <class Real>
RegResult<Real> vcr_value_grad(const VoxelImage<Real>& image, const RegConfig& cfg) {
    cfg.validate();
    RegResult<Real> h = hessian_value_grad(image, cfg.eps_reg);
    if (cfg.beta == 0.0) return h;
    const RegResult<Real> tv = tv_value_grad(image, cfg.eps_reg);
    h.value += cfg.beta * tv.value;
    for (std::size_t i = 0; i < h.grad.size(); ++i)
        h.grad.values[i] = static_cast<Real>(static_cast<double>(h.grad.values[i]) +
                                             cfg.beta * static_cast<double>(tv.grad.values[i]));
    return h;
}

} // namespace gpair
