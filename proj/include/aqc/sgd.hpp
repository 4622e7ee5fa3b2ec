#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "aqc/engine.hpp"
#include "aqc/objective.hpp"
#include "aqc/rng.hpp"
#include "aqc/sketch.hpp"

namespace aqc {

enum class StepSchedule { Constant, InvSqrt };

struct SgdConfig {
    std::size_t m = 8;    // sketch width per iteration
    int iters = 100;      // T
    double eta0 = 1.0;    // step size; InvSqrt uses eta0 / sqrt(t+1)
    StepSchedule schedule = StepSchedule::InvSqrt;
    std::uint64_t seed = 0;
    std::size_t monitor_m = 0;  // held-out monitoring sketch width; 0 means m
};

struct SgdResult {
    std::vector<double> theta;
    std::vector<double> monitor_trace;  // held-out objective at theta_0 .. theta_T
    int iterations_done = 0;
    std::string status = "ok";  // "ok" | "non_finite_gradient"
};

/// Plain stochastic descent: every iteration draws a fresh normalized
/// Gaussian sketch, takes the analytic gradient of the sketched objective,
/// and steps against it. Progress is tracked on a fixed held-out sketch so
/// the trace is comparable across iterations.
inline SgdResult sgd_minimize(const GateEngine& eng, const std::vector<double>& theta_u,
                              std::vector<double> theta0, const SgdConfig& cfg, int threads = 1) {
    if (cfg.iters < 1) throw std::invalid_argument("sgd_minimize: iteration count must be >= 1");
    if (cfg.m < 1) throw std::invalid_argument("sgd_minimize: sketch width must be >= 1");
    if (cfg.eta0 < 0.0) throw std::invalid_argument("sgd_minimize: step size must be >= 0");

    const std::size_t d = eng.dim();
    const std::size_t monitor_m = cfg.monitor_m == 0 ? cfg.m : cfg.monitor_m;
    const ObjectiveContext monitor_ctx(
        eng, theta_u, sample_normalized_sketch(d, monitor_m, derive_seed(cfg.seed, {seed_tag::monitor})));

    SgdResult res;
    res.theta = std::move(theta0);
    res.monitor_trace.reserve(static_cast<std::size_t>(cfg.iters) + 1);
    res.monitor_trace.push_back(objective_sketched(monitor_ctx, res.theta, threads));

    for (int t = 0; t < cfg.iters; ++t) {
        const SketchOperator sk = sample_normalized_sketch(
            d, cfg.m, derive_seed(cfg.seed, {seed_tag::sketch, static_cast<std::uint64_t>(t)}));
        const ObjectiveContext ctx(eng, theta_u, sk);
        const std::vector<double> g = gradient_sketched(ctx, res.theta, threads);
        if (!std::all_of(g.begin(), g.end(), [](double v) { return std::isfinite(v); })) {
            res.status = "non_finite_gradient";
            return res;
        }
        const double eta = cfg.schedule == StepSchedule::Constant
                               ? cfg.eta0
                               : cfg.eta0 / std::sqrt(static_cast<double>(t) + 1.0);
        for (std::size_t k = 0; k < res.theta.size(); ++k) res.theta[k] -= eta * g[k];
        res.monitor_trace.push_back(objective_sketched(monitor_ctx, res.theta, threads));
        ++res.iterations_done;
    }
    return res;
}

}  // namespace aqc
