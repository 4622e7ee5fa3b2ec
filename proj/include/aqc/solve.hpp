#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "aqc/engine.hpp"
#include "aqc/lbfgs.hpp"
#include "aqc/objective.hpp"
#include "aqc/rng.hpp"
#include "aqc/sgd.hpp"
#include "aqc/sketch.hpp"

namespace aqc {

/// A run counts as a success when the exact average-case fidelity of the
/// compiled circuit reaches this threshold.
inline constexpr double kSuccessFidelity = 0.999;

/// Uniform[0, 2pi) angles; deterministic per seed.
inline std::vector<double> init_theta(int param_count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> t(static_cast<std::size_t>(param_count));
    for (double& v : t) v = rng.uniform(0.0, 2.0 * M_PI);
    return t;
}

struct SolveSeeds {
    std::uint64_t init = 0;    // initial-angle stream
    std::uint64_t sketch = 0;  // base for per-epoch (or per-iteration) sketch streams
};

struct EpochReport {
    std::uint64_t sketch_seed = 0;
    int iterations = 0;
    double final_objective = 0.0;  // sketched objective at epoch end
    int line_search_failures = 0;
    bool qr_fallback = false;
    std::string status;         // optimizer termination reason
    std::vector<double> trace;  // accepted objective values within the epoch
};

struct RunReport {
    std::string method;  // "sgd" | "ss1" | "ss2"
    int n = 0, L = 0;
    std::size_t m = 0;
    int epochs = 0;
    int epoch_iters = 0;
    std::uint64_t init_seed = 0;
    bool forced_init = false;
    std::vector<EpochReport> epoch_reports;
    std::vector<double> theta;  // final angles (not serialized)
    double final_sketched_objective = 0.0;
    double fidelity = 0.0;
    bool success = false;
    double wall_seconds = 0.0;
    std::string status = "ok";  // "ok" | "deadline" | "non_finite_gradient"
};

namespace detail {

class WallTimer {
  public:
    WallTimer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

inline void finish_report(RunReport& rep, const GateEngine& eng, const std::vector<double>& theta_u,
                          const WallTimer& timer, int threads) {
    rep.fidelity = fidelity_exact(eng, rep.theta, theta_u, threads).value;
    rep.success = rep.fidelity >= kSuccessFidelity;
    if (!rep.epoch_reports.empty()) rep.final_sketched_objective = rep.epoch_reports.back().final_objective;
    rep.wall_seconds = timer.seconds();
}

}  // namespace detail

/// Multi-epoch sketched solve with a fixed unit-column sketch per epoch:
/// each epoch draws fresh normalized Gaussian columns and runs the
/// quasi-Newton solver on the resulting restricted objective from the
/// previous epoch's angles.
inline RunReport sketch_and_solve_1(const GateEngine& eng, const std::vector<double>& theta_u,
                                    std::size_t m, int epochs, const SolveSeeds& seeds,
                                    const LbfgsConfig& lcfg, int epoch_iters, int threads = 1,
                                    const std::vector<double>* theta0_override = nullptr,
                                    double deadline_seconds = std::numeric_limits<double>::infinity()) {
    if (epochs < 1) throw std::invalid_argument("sketch_and_solve_1: epochs must be >= 1");
    const detail::WallTimer timer;
    const CircuitStructure& s = eng.structure();

    RunReport rep;
    rep.method = "ss1";
    rep.n = s.n;
    rep.L = s.L;
    rep.m = m;
    rep.epochs = epochs;
    rep.epoch_iters = epoch_iters;
    rep.init_seed = seeds.init;
    rep.forced_init = theta0_override != nullptr;
    rep.theta = theta0_override ? *theta0_override : init_theta(s.param_count, seeds.init);

    for (int e = 0; e < epochs; ++e) {
        const std::uint64_t sketch_seed =
            derive_seed(seeds.sketch, {seed_tag::sketch, static_cast<std::uint64_t>(e)});
        const SketchOperator sk = sample_normalized_sketch(eng.dim(), m, sketch_seed);
        const ObjectiveContext ctx(eng, theta_u, sk);
        LbfgsConfig cfg = lcfg;
        cfg.max_iters = epoch_iters;
        LbfgsResult lr = lbfgs_minimize(
            [&](const std::vector<double>& t, std::vector<double>& g) {
                g = gradient_sketched(ctx, t, threads);
                return objective_sketched(ctx, t, threads);
            },
            std::move(rep.theta), cfg);
        rep.theta = std::move(lr.theta);

        EpochReport er;
        er.sketch_seed = sketch_seed;
        er.iterations = lr.iterations;
        er.final_objective = lr.f;
        er.line_search_failures = lr.line_search_failures;
        er.status = to_string(lr.status);
        er.trace = std::move(lr.trace);
        rep.epoch_reports.push_back(std::move(er));

        if (timer.seconds() > deadline_seconds) {
            rep.status = "deadline";
            break;
        }
    }
    detail::finish_report(rep, eng, theta_u, timer, threads);
    return rep;
}

/// Multi-epoch sketched solve with an adaptive orthonormal sketch: each
/// epoch re-sketches at the current angles (range of the residual block
/// applied to a fresh Gaussian), then runs at most epoch_iters quasi-Newton
/// iterations on the projected objective.
inline RunReport sketch_and_solve_2(const GateEngine& eng, const std::vector<double>& theta_u,
                                    std::size_t m, int epochs, const SolveSeeds& seeds,
                                    const LbfgsConfig& lcfg, int epoch_iters, int threads = 1,
                                    const std::vector<double>* theta0_override = nullptr,
                                    double deadline_seconds = std::numeric_limits<double>::infinity()) {
    if (epochs < 1) throw std::invalid_argument("sketch_and_solve_2: epochs must be >= 1");
    const detail::WallTimer timer;
    const CircuitStructure& s = eng.structure();

    RunReport rep;
    rep.method = "ss2";
    rep.n = s.n;
    rep.L = s.L;
    rep.m = m;
    rep.epochs = epochs;
    rep.epoch_iters = epoch_iters;
    rep.init_seed = seeds.init;
    rep.forced_init = theta0_override != nullptr;
    rep.theta = theta0_override ? *theta0_override : init_theta(s.param_count, seeds.init);

    for (int e = 0; e < epochs; ++e) {
        const std::uint64_t sketch_seed =
            derive_seed(seeds.sketch, {seed_tag::sketch, static_cast<std::uint64_t>(e)});
        const CMat omega = sample_gaussian(eng.dim(), m, sketch_seed);
        const SketchOperator q = qr_sketch(eng, rep.theta, theta_u, omega);
        const ObjectiveContext ctx(eng, theta_u, q);
        LbfgsConfig cfg = lcfg;
        cfg.max_iters = epoch_iters;
        LbfgsResult lr = lbfgs_minimize(
            [&](const std::vector<double>& t, std::vector<double>& g) {
                g = gradient_sketched(ctx, t, threads);
                return objective_sketched(ctx, t, threads);
            },
            std::move(rep.theta), cfg);
        rep.theta = std::move(lr.theta);

        EpochReport er;
        er.sketch_seed = sketch_seed;
        er.iterations = lr.iterations;
        er.final_objective = lr.f;
        er.line_search_failures = lr.line_search_failures;
        er.qr_fallback = q.qr_fallback;
        er.status = to_string(lr.status);
        er.trace = std::move(lr.trace);
        rep.epoch_reports.push_back(std::move(er));

        if (timer.seconds() > deadline_seconds) {
            rep.status = "deadline";
            break;
        }
    }
    detail::finish_report(rep, eng, theta_u, timer, threads);
    return rep;
}

/// Plain stochastic-descent driver reported in the same shape: each of
/// `epochs` blocks runs epoch_iters iterations; the block's final held-out
/// objective stands in for the per-epoch sketched objective.
inline RunReport run_sgd(const GateEngine& eng, const std::vector<double>& theta_u, std::size_t m,
                         int epochs, const SolveSeeds& seeds, const SgdConfig& base_cfg, int epoch_iters,
                         int threads = 1, const std::vector<double>* theta0_override = nullptr,
                         double deadline_seconds = std::numeric_limits<double>::infinity()) {
    if (epochs < 1) throw std::invalid_argument("run_sgd: epochs must be >= 1");
    const detail::WallTimer timer;
    const CircuitStructure& s = eng.structure();

    RunReport rep;
    rep.method = "sgd";
    rep.n = s.n;
    rep.L = s.L;
    rep.m = m;
    rep.epochs = epochs;
    rep.epoch_iters = epoch_iters;
    rep.init_seed = seeds.init;
    rep.forced_init = theta0_override != nullptr;
    rep.theta = theta0_override ? *theta0_override : init_theta(s.param_count, seeds.init);

    for (int e = 0; e < epochs; ++e) {
        SgdConfig cfg = base_cfg;
        cfg.m = m;
        cfg.iters = epoch_iters;
        cfg.seed = derive_seed(seeds.sketch, {seed_tag::sketch, static_cast<std::uint64_t>(e)});
        SgdResult sr = sgd_minimize(eng, theta_u, std::move(rep.theta), cfg, threads);
        rep.theta = std::move(sr.theta);

        EpochReport er;
        er.sketch_seed = cfg.seed;
        er.iterations = sr.iterations_done;
        er.final_objective = sr.monitor_trace.back();
        er.status = sr.status;
        er.trace = std::move(sr.monitor_trace);
        rep.epoch_reports.push_back(std::move(er));

        if (sr.status != "ok") {
            rep.status = sr.status;
            break;
        }
        if (timer.seconds() > deadline_seconds) {
            rep.status = "deadline";
            break;
        }
    }
    detail::finish_report(rep, eng, theta_u, timer, threads);
    return rep;
}

}  // namespace aqc
