#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "gpair/error.hpp"
#include "gpair/geometry.hpp"
#include "gpair/operators.hpp"
#include "gpair/parallel.hpp"
#include "gpair/regularization.hpp"

namespace gpair {

inline constexpr double kDefaultNpcEps = 1e-8;

/// Unconstrained latent z with image x = (z + eps)^2.
template <class Real>
struct LatentImage {
    VoxelImage<Real> z;
    double eps_npc = kDefaultNpcEps;
};

enum class Precision { single, double_ };

struct ReconConfig {
    int i_max = 200;
    double eta_max = 0.1;
    double eta_min = 1e-4;
    int t_0 = 50;
    int t_mult = 2;
    RegConfig reg{};
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double eps_npc = kDefaultNpcEps;
    std::uint64_t seed = 0;
    Precision precision = Precision::double_;
    bool init_backprojection = false;

    void validate() const {
        detail::require(i_max >= 1, "i_max must be >= 1");
        detail::require(eta_min >= 0.0 && eta_min <= eta_max, "need 0 <= eta_min <= eta_max");
        detail::require(t_0 >= 1, "t_0 must be >= 1");
        detail::require(t_mult >= 1, "t_mult must be >= 1");
        reg.validate();
    }
};

template <class Real>
struct AdamState {
    std::vector<Real> m;
    std::vector<Real> v;
    std::int64_t t = 0;

    explicit AdamState(std::size_t n = 0) : m(n, Real(0)), v(n, Real(0)) {}
};

template <class Real>
VoxelImage<Real> npc_apply(const LatentImage<Real>& latent) {
    VoxelImage<Real> x(latent.z.grid);
    const Real eps = static_cast<Real>(latent.eps_npc);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Real s = latent.z.values[i] + eps;
        x.values[i] = s * s;
    }
    return x;
}

/// dL/dz = dL/dx * 2 (z + eps).
template <class Real>
std::vector<Real> npc_backprop(const VoxelImage<Real>& grad_x, const LatentImage<Real>& latent) {
    detail::require(grad_x.size() == latent.z.size(), "gradient does not match latent size");
    std::vector<Real> g(grad_x.size());
    const Real eps = static_cast<Real>(latent.eps_npc);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = grad_x.values[i] * Real(2) * (latent.z.values[i] + eps);
    return g;
}

/// Cosine annealing with warm restarts exactly as
///   eta_t = eta_min + (eta_max - eta_min) (1 + cos(pi T_cur / T_i)) / 2,
///   T_cur = t mod T_0,  T_i = T_0 T_mult^floor(t / T_0).
/// Note that T_cur wraps every T_0 steps even when T_i grows.
inline double cawr_lr(std::int64_t t, const ReconConfig& cfg) {
    detail::require(t >= 0, "iteration index must be non-negative");
    const std::int64_t t_cur = t % cfg.t_0;
    const double t_i = cfg.t_0 * std::pow(static_cast<double>(cfg.t_mult), static_cast<double>(t / cfg.t_0));
    return cfg.eta_min +
           0.5 * (cfg.eta_max - cfg.eta_min) * (1.0 + std::cos(std::numbers::pi * static_cast<double>(t_cur) / t_i));
}

/// One bias-corrected Adam update of z in place.
template <class Real>
void adam_step(std::vector<Real>& z, std::span<const Real> grad, AdamState<Real>& state, double lr,
               const ReconConfig& cfg) {
    detail::require(z.size() == grad.size() && state.m.size() == z.size(), "Adam state size mismatch");
    state.t += 1;
    const double b1 = cfg.adam_beta1;
    const double b2 = cfg.adam_beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.t));
    parallel_for(0, z.size(), [&](std::size_t i0, std::size_t i1) {
        for (std::size_t i = i0; i < i1; ++i) {
            const double g = grad[i];
            const double m = b1 * state.m[i] + (1.0 - b1) * g;
            const double v = b2 * state.v[i] + (1.0 - b2) * g * g;
            state.m[i] = static_cast<Real>(m);
            state.v[i] = static_cast<Real>(v);
            const double m_hat = m / c1;
            const double v_hat = v / c2;
            z[i] = static_cast<Real>(static_cast<double>(z[i]) - lr * m_hat / (std::sqrt(v_hat) + cfg.adam_eps));
        }
    }, 1024);
}

template <class Real>
struct LossEval {
    double loss = 0.0;
    double data_term = 0.0; // |A x - b|^2 / N
    double reg_term = 0.0;  // lambda * R_VCR(x)
    std::vector<Real> grad_z;
};

/// L(z) = |A(phi(z)) - b|^2 / N + lambda R_VCR(phi(z)) and its exact gradient in z.
template <class Real>
LossEval<Real> loss_and_grad(const LatentImage<Real>& latent, const SignalSet<Real>& b, const ForwardModel& model,
                             const ReconConfig& cfg, long iteration = -1) {
    detail::require(b.n_detectors == model.array().size() && b.n_samples() == static_cast<std::size_t>(model.acoustic().n_samples),
                    "observed signals do not match the forward model");
    const VoxelImage<Real> x = npc_apply(latent);
    SignalSet<Real> resid = model.forward(x);
    const double N = static_cast<double>(resid.data.size());
    for (std::size_t k = 0; k < resid.data.size(); ++k) resid.data[k] -= b.data[k];
    LossEval<Real> out;
    out.data_term = parallel_sum(resid.data.size(), [&](std::size_t k) {
                        const double r = resid.data[k];
                        return r * r;
                    }) / N;
    const Real scale = static_cast<Real>(2.0 / N);
    for (auto& r : resid.data) r *= scale;
    VoxelImage<Real> grad_x = model.adjoint(resid);
    if (cfg.reg.lambda > 0.0) {
        const RegResult<Real> reg = vcr_value_grad(x, cfg.reg);
        out.reg_term = cfg.reg.lambda * reg.value;
        const Real lam = static_cast<Real>(cfg.reg.lambda);
        for (std::size_t i = 0; i < grad_x.size(); ++i) grad_x.values[i] += lam * reg.grad.values[i];
    }
    out.loss = out.data_term + out.reg_term;
    if (!std::isfinite(out.loss)) throw NumericalFailure("non-finite loss", iteration);
    out.grad_z = npc_backprop(grad_x, latent);
    for (const Real g : out.grad_z)
        if (!std::isfinite(static_cast<double>(g))) throw NumericalFailure("non-finite gradient", iteration);
    return out;
}

struct TraceRow {
    int iter = 0;
    double loss = 0.0;
    double data_term = 0.0;
    double reg_term = 0.0;
    double lr = 0.0;
    double wall_ms = 0.0;
};

template <class Real>
struct ReconResult {
    VoxelImage<Real> image;
    std::vector<TraceRow> trace;
    double final_loss = 0.0; // loss evaluated at the returned image
};

/// Thrown by gpair_reconstruct when an iteration goes non-finite; carries the
/// last finite iterate and the trace up to that point.
template <class Real>
class ReconAborted : public NumericalFailure {
public:
    ReconAborted(const NumericalFailure& cause, ReconResult<Real> last_good)
        : NumericalFailure(cause), last_good_(std::move(last_good)) {}

    const ReconResult<Real>& last_good() const { return last_good_; }

private:
    ReconResult<Real> last_good_;
};

template <class Real>
using IterationCallback = std::function<void(const TraceRow&)>;

/// A^T b, optionally divided by its maximum absolute value.
template <class Real>
VoxelImage<Real> single_pass_reconstruct(const SignalSet<Real>& b, const ForwardModel& model, bool normalize = true) {
    VoxelImage<Real> g = model.adjoint(b);
    if (normalize) {
        Real peak(0);
        for (const Real v : g.values) peak = std::max(peak, static_cast<Real>(std::abs(v)));
        if (peak > Real(0))
            for (auto& v : g.values) v /= peak;
    }
    return g;
}

/// Adam on the NPC latent with the cosine warm-restart schedule for a fixed
/// number of iterations, starting from z = 0.
template <class Real>
ReconResult<Real> gpair_reconstruct(const SignalSet<Real>& b, const ForwardModel& model, const ReconConfig& cfg,
                                    const IterationCallback<Real>& on_iteration = {}) {
    cfg.validate();
    using clock = std::chrono::steady_clock;
    LatentImage<Real> latent{VoxelImage<Real>(model.grid()), cfg.eps_npc};
    if (cfg.init_backprojection) {
        const VoxelImage<Real> bp = model.adjoint(b);
        for (std::size_t i = 0; i < bp.size(); ++i)
            latent.z.values[i] = static_cast<Real>(std::sqrt(std::max(0.0, static_cast<double>(bp.values[i]))));
    }
    AdamState<Real> adam(latent.z.size());
    ReconResult<Real> result;
    result.trace.reserve(static_cast<std::size_t>(cfg.i_max));
    const auto start = clock::now();
    std::vector<Real> last_good_z = latent.z.values;
    for (int t = 0; t < cfg.i_max; ++t) {
        LossEval<Real> ev;
        try {
            ev = loss_and_grad(latent, b, model, cfg, t);
        } catch (const NumericalFailure& e) {
            latent.z.values = std::move(last_good_z);
            result.image = npc_apply(latent);
            result.final_loss = std::numeric_limits<double>::quiet_NaN();
            throw ReconAborted<Real>(e, std::move(result));
        }
        last_good_z = latent.z.values;
        const double lr = cawr_lr(t, cfg);
        adam_step(latent.z.values, std::span<const Real>(ev.grad_z), adam, lr, cfg);
        TraceRow row{t, ev.loss, ev.data_term, ev.reg_term, lr,
                     std::chrono::duration<double, std::milli>(clock::now() - start).count()};
        result.trace.push_back(row);
        if (on_iteration) on_iteration(row);
    }
    result.final_loss = loss_and_grad(latent, b, model, cfg, cfg.i_max).loss;
    result.image = npc_apply(latent);
    return result;
}

} // namespace gpair
