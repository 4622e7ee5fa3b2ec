#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "aqc/circuit.hpp"
#include "aqc/engine.hpp"
#include "aqc/parallel.hpp"
#include "aqc/rng.hpp"
#include "aqc/sketch.hpp"
#include "aqc/state.hpp"

namespace aqc {

/// Columns processed per work unit. Fixed so chunked accumulation sums
/// partials in a fixed order and results are bit-identical for any thread
/// count.
inline constexpr std::size_t kColumnChunk = 64;

/// Immutable bundle of circuit engine, target angles, and the sketch the
/// objective is restricted to. Holds the engine by reference: the caller
/// keeps one engine alive per (n, L) and shares it across contexts.
class ObjectiveContext {
  public:
    ObjectiveContext(const GateEngine& engine, std::vector<double> theta_u, SketchOperator sketch)
        : engine_(engine), theta_u_(std::move(theta_u)), sketch_(std::move(sketch)) {
        if (static_cast<int>(theta_u_.size()) != engine_.structure().param_count)
            throw std::invalid_argument("ObjectiveContext: target parameter length mismatch");
        if (sketch_.kind != SketchKind::Full) {
            if (sketch_.columns.rows != engine_.dim())
                throw std::invalid_argument("ObjectiveContext: sketch row count != state dimension");
            if (sketch_.columns.cols < 1)
                throw std::invalid_argument("ObjectiveContext: sketch has no columns");
        }
    }

    const GateEngine& engine() const { return engine_; }
    const std::vector<double>& theta_u() const { return theta_u_; }
    const SketchOperator& sketch() const { return sketch_; }
    std::size_t sketch_width() const { return sketch_.width(engine_.dim()); }

    void check_theta(const std::vector<double>& theta) const {
        if (static_cast<int>(theta.size()) != engine_.structure().param_count)
            throw std::invalid_argument("ObjectiveContext: parameter length mismatch");
    }

    /// Columns [j0, j0+cols) of the sketch as a working batch; the full
    /// column set materializes basis columns on demand and never stores d^2.
    StateBatch sketch_chunk(std::size_t j0, std::size_t cols) const {
        const std::size_t d = engine_.dim();
        if (sketch_.kind == SketchKind::Full) return StateBatch::basis(d, j0, cols);
        StateBatch b(d, cols);
        std::copy(sketch_.columns.a.begin() + static_cast<std::ptrdiff_t>(j0 * d),
                  sketch_.columns.a.begin() + static_cast<std::ptrdiff_t>((j0 + cols) * d), b.data.begin());
        return b;
    }

  private:
    const GateEngine& engine_;
    std::vector<double> theta_u_;
    SketchOperator sketch_;
};

/// sum_j <V(theta) s_j, U s_j> over the sketch columns.
inline cplx sketched_inner_sum(const ObjectiveContext& ctx, const std::vector<double>& theta,
                               int threads = 1) {
    const GateEngine& eng = ctx.engine();
    const std::size_t d = eng.dim();
    const std::size_t m = ctx.sketch_width();
    const std::size_t nchunks = (m + kColumnChunk - 1) / kColumnChunk;
    std::vector<cplx> partial(nchunks, cplx{0.0, 0.0});
    parallel_for_chunks(nchunks, threads, [&](std::size_t ci) {
        const std::size_t j0 = ci * kColumnChunk;
        const std::size_t cols = std::min(kColumnChunk, m - j0);
        StateBatch v = ctx.sketch_chunk(j0, cols);
        StateBatch u = v;
        Scratch scr(d);
        eng.apply_ansatz(theta, v, scr);
        eng.apply_ansatz(ctx.theta_u(), u, scr);
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < cols; ++j) acc += col_dot(v.col(j), u.col(j), d);
        partial[ci] = acc;
    });
    cplx total{0.0, 0.0};
    for (const cplx& p : partial) total += p;
    return total;
}

/// -(1/m) Re <V(theta) S, U S>; in [-1, 1] for unit sketch columns.
inline double objective_sketched(const ObjectiveContext& ctx, const std::vector<double>& theta,
                                 int threads = 1) {
    ctx.check_theta(theta);
    return -sketched_inner_sum(ctx, theta, threads).real() / static_cast<double>(ctx.sketch_width());
}

/// 1 - (1/d) Re <V(theta), U> over the whole basis; equals the scaled squared
/// Frobenius distance (1/2d) ||V - U||_F^2, in [0, 2].
inline double objective_full(const ObjectiveContext& ctx, const std::vector<double>& theta,
                             int threads = 1) {
    if (ctx.sketch().kind != SketchKind::Full)
        throw std::invalid_argument("objective_full: context must use the full column set");
    return 1.0 + objective_sketched(ctx, theta, threads);
}

/// Analytic gradient of objective_sketched via the forward/backward sweep:
/// per column x, w_0 = x and z_0 = (adjoint chain) U x; advancing both
/// through gate k gives the slot-k derivative from <sigma_k w_k, z_k>. Cost
/// is a small constant multiple of one objective evaluation.
inline std::vector<double> gradient_sketched(const ObjectiveContext& ctx, const std::vector<double>& theta,
                                             int threads = 1) {
    ctx.check_theta(theta);
    const GateEngine& eng = ctx.engine();
    const CircuitStructure& s = eng.structure();
    const std::size_t d = eng.dim();
    const std::size_t m = ctx.sketch_width();
    const std::size_t nslots = static_cast<std::size_t>(s.param_count);
    const std::size_t nchunks = (m + kColumnChunk - 1) / kColumnChunk;
    std::vector<std::vector<double>> partial(nchunks);
    parallel_for_chunks(nchunks, threads, [&](std::size_t ci) {
        const std::size_t j0 = ci * kColumnChunk;
        const std::size_t cols = std::min(kColumnChunk, m - j0);
        StateBatch w = ctx.sketch_chunk(j0, cols);
        StateBatch z = w;
        Scratch scr(d);
        eng.apply_ansatz(ctx.theta_u(), z, scr);               // y = U x
        eng.apply_ansatz(theta, z, scr, Direction::Adjoint);   // z_0
        std::vector<double> acc(nslots, 0.0);
        for (const GateSpec& g : s.gates) {
            if (g.kind == GateKind::Cnot) {
                eng.apply_cnot(g.qubit, g.qubit2, w);
                eng.apply_cnot(g.qubit, g.qubit2, z);
                continue;
            }
            const Axis ax = rotation_axis(g.kind);
            const double ang = theta[static_cast<std::size_t>(g.param_slot)];
            eng.apply_rotation(ax, ang, g.qubit, w, scr);
            eng.apply_rotation(ax, ang, g.qubit, z, scr);
            // <sigma w_k, z_k>: apply sigma in place, dot, apply again to
            // restore (Pauli factors round-trip exactly).
            eng.apply_pauli(ax, g.qubit, w, scr);
            double im = 0.0;
            for (std::size_t j = 0; j < cols; ++j) im += col_dot(w.col(j), z.col(j), d).imag();
            eng.apply_pauli(ax, g.qubit, w, scr);
            acc[static_cast<std::size_t>(g.param_slot)] = im;
        }
        partial[ci] = std::move(acc);
    });
    std::vector<double> grad(nslots, 0.0);
    for (const std::vector<double>& p : partial)
        for (std::size_t k = 0; k < nslots; ++k) grad[k] += p[k];
    const double scale = 1.0 / (2.0 * static_cast<double>(m));
    for (double& g : grad) g *= scale;
    return grad;
}

struct FidelityResult {
    double value = 0.0;
    double std_error = 0.0;  // zero in exact mode
};

/// Average-case closeness of V(theta_v) to the target on uniformly random
/// inputs: (1 + |<V, U>|^2 / d) / (d + 1), with the overlap trace computed
/// exactly over the whole basis.
inline FidelityResult fidelity_exact(const GateEngine& eng, const std::vector<double>& theta_v,
                                     const std::vector<double>& theta_u, int threads = 1) {
    const ObjectiveContext ctx(eng, theta_u, SketchOperator{});
    const cplx t = sketched_inner_sum(ctx, theta_v, threads);
    const double d = static_cast<double>(eng.dim());
    return {(1.0 + std::norm(t) / d) / (d + 1.0), 0.0};
}

/// Same quantity from k random unit columns: the overlap trace is estimated
/// by d * mean_j <V x_j, U x_j>, and the standard error of the plugged-in
/// value comes from leave-one-out resampling.
inline FidelityResult fidelity_estimated(const GateEngine& eng, const std::vector<double>& theta_v,
                                         const std::vector<double>& theta_u, int k, std::uint64_t seed,
                                         int threads = 1) {
    if (k < 2) throw std::invalid_argument("fidelity_estimated: need at least 2 samples");
    const std::size_t d = eng.dim();
    const std::size_t chunk_cols = std::min(d, kColumnChunk);
    const std::size_t total = static_cast<std::size_t>(k);
    const std::size_t nchunks = (total + chunk_cols - 1) / chunk_cols;
    std::vector<cplx> samples(total);
    parallel_for_chunks(nchunks, threads, [&](std::size_t ci) {
        const std::size_t j0 = ci * chunk_cols;
        const std::size_t cols = std::min(chunk_cols, total - j0);
        const SketchOperator sk = sample_normalized_sketch(d, cols, derive_seed(seed, {seed_tag::sample, ci}));
        StateBatch v(d, cols);
        v.data = sk.columns.a;
        StateBatch u = v;
        Scratch scr(d);
        eng.apply_ansatz(theta_v, v, scr);
        eng.apply_ansatz(theta_u, u, scr);
        for (std::size_t j = 0; j < cols; ++j) samples[j0 + j] = col_dot(v.col(j), u.col(j), d);
    });

    cplx sum{0.0, 0.0};
    for (const cplx& t : samples) sum += t;
    const double dk = static_cast<double>(k);
    const auto plug_in = [&](cplx mean_overlap) {
        const cplx t_hat = static_cast<double>(d) * mean_overlap;
        return (1.0 + std::norm(t_hat) / static_cast<double>(d)) / (static_cast<double>(d) + 1.0);
    };
    const double value = plug_in(sum / dk);

    std::vector<double> loo(total);
    double loo_mean = 0.0;
    for (std::size_t j = 0; j < total; ++j) {
        loo[j] = plug_in((sum - samples[j]) / (dk - 1.0));
        loo_mean += loo[j];
    }
    loo_mean /= dk;
    double ss = 0.0;
    for (const double v : loo) ss += (v - loo_mean) * (v - loo_mean);
    const double se = std::sqrt((dk - 1.0) / dk * ss);
    return {value, se};
}

}  // namespace aqc
