#pragma once

// Experiment grid harness: targets x trials x sketch widths, one CSV row per
// trial plus per-width summary statistics. Row content (minus wall time) is a
// pure function of (master seed, target id, trial id, m), so grids can be
// re-run, resumed, or parallelized freely without changing results.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqc/engine.hpp"
#include "aqc/io.hpp"
#include "aqc/parallel.hpp"
#include "aqc/rng.hpp"
#include "aqc/solve.hpp"

namespace aqc {

struct BenchGrid {
    int n = 0;
    int L = 0;
    std::string method;  // "ss1" | "ss2"
    std::vector<int> sketch_dims;
    int targets = 10;
    int trials = 24;
    int epochs = 3;
    int epoch_iters = 1000;
    std::uint64_t seed = 0;            // master seed
    int threads = 1;                   // concurrent trials
    double trial_deadline_s = 7200.0;  // wall cap per trial
};

struct BenchRow {
    int n = 0;
    int L = 0;
    int m = 0;
    std::string method;
    int target_id = 0;
    int trial_id = 0;
    std::uint64_t seed = 0;  // per-trial seed; re-runs this row in isolation
    int epochs = 0;
    double final_sketched_objective = 0.0;
    double fidelity = 0.0;
    bool success = false;
    double wall_time_s = 0.0;
    std::string status = "ok";  // reported in the summary, not a CSV column
};

struct BenchResult {
    std::vector<BenchRow> rows;  // sorted by (m, target_id, trial_id)
    std::string csv;
    std::string summary_json;
};

inline constexpr char kBenchCsvHeader[] =
    "n,L,m,method,target_id,trial_id,seed,epochs,final_sketched_objective,fidelity,success,"
    "wall_time_s";

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string s(kBenchCsvHeader);
    s += "\n";
    for (const BenchRow& r : rows) {
        s += std::to_string(r.n) + "," + std::to_string(r.L) + "," + std::to_string(r.m) + ",";
        s += r.method + ",";
        s += std::to_string(r.target_id) + "," + std::to_string(r.trial_id) + ",";
        s += std::to_string(r.seed) + "," + std::to_string(r.epochs) + ",";
        s += format_double(r.final_sketched_objective) + ",";
        s += format_double(r.fidelity) + ",";
        s += std::string(r.success ? "1" : "0") + ",";
        s += format_double(r.wall_time_s) + "\n";
    }
    return s;
}

namespace detail {

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation
};

inline MeanSd mean_sd(const std::vector<double>& v) {
    MeanSd r;
    if (v.empty()) return r;
    double acc = 0.0;
    for (const double x : v) acc += x;
    r.mean = acc / static_cast<double>(v.size());
    if (v.size() < 2) return r;
    double m2 = 0.0;
    for (const double x : v) m2 += (x - r.mean) * (x - r.mean);
    r.sd = std::sqrt(m2 / static_cast<double>(v.size() - 1));
    return r;
}

}  // namespace detail

/// Per-width statistics over the grid rows: each target's success rate, the
/// mean and spread of those rates across targets, and wall-time statistics
/// over every trial at that width.
inline std::string bench_summary_json(const BenchGrid& grid, const std::vector<BenchRow>& rows) {
    std::string s;
    s += "{\n";
    s += "  \"version\": \"bench-summary-v1\",\n";
    s += "  \"n\": " + std::to_string(grid.n) + ",\n";
    s += "  \"L\": " + std::to_string(grid.L) + ",\n";
    s += "  \"method\": \"" + detail::json_escape(grid.method) + "\",\n";
    s += "  \"targets\": " + std::to_string(grid.targets) + ",\n";
    s += "  \"trials\": " + std::to_string(grid.trials) + ",\n";
    s += "  \"epochs\": " + std::to_string(grid.epochs) + ",\n";
    s += "  \"epoch_iters\": " + std::to_string(grid.epoch_iters) + ",\n";
    s += "  \"seed\": " + std::to_string(grid.seed) + ",\n";
    s += "  \"per_m\": [\n";
    for (std::size_t mi = 0; mi < grid.sketch_dims.size(); ++mi) {
        const int m = grid.sketch_dims[mi];
        std::vector<double> rates;
        std::vector<double> walls;
        std::string failed;
        for (int tid = 0; tid < grid.targets; ++tid) {
            int hits = 0;
            int count = 0;
            for (const BenchRow& r : rows) {
                if (r.m != m || r.target_id != tid) continue;
                ++count;
                if (r.success) ++hits;
                walls.push_back(r.wall_time_s);
                if (r.status != "ok") {
                    if (!failed.empty()) failed += ",\n";
                    failed += "        {\"target_id\": " + std::to_string(r.target_id) +
                              ", \"trial_id\": " + std::to_string(r.trial_id) + ", \"status\": \"" +
                              detail::json_escape(r.status) + "\"}";
                }
            }
            rates.push_back(count > 0 ? static_cast<double>(hits) / static_cast<double>(count)
                                      : 0.0);
        }
        const detail::MeanSd rate = detail::mean_sd(rates);
        const detail::MeanSd wall = detail::mean_sd(walls);
        s += "    {\n";
        s += "      \"m\": " + std::to_string(m) + ",\n";
        s += "      \"per_target_success_rate\": [";
        for (std::size_t t = 0; t < rates.size(); ++t) {
            s += format_double(rates[t]);
            if (t + 1 < rates.size()) s += ", ";
        }
        s += "],\n";
        s += "      \"success_rate_mean\": " + format_double(rate.mean) + ",\n";
        s += "      \"success_rate_sd\": " + format_double(rate.sd) + ",\n";
        s += "      \"wall_time_mean_s\": " + format_double(wall.mean) + ",\n";
        s += "      \"wall_time_sd_s\": " + format_double(wall.sd) + ",\n";
        s += "      \"failed_trials\": [";
        if (!failed.empty()) s += "\n" + failed + "\n      ";
        s += "]\n";
        s += (mi + 1 < grid.sketch_dims.size()) ? "    },\n" : "    }\n";
    }
    s += "  ]\n";
    s += "}\n";
    return s;
}

/// Runs the full grid. Trials are independent jobs pulled from a shared
/// queue; each runs single-threaded so results never depend on the worker
/// count. Failures (deadline, non-finite gradients, unexpected errors) land
/// in their row's status and never abort the remaining trials.
inline BenchResult run_bench(const BenchGrid& grid) {
    if (grid.method != "ss1" && grid.method != "ss2")
        throw std::invalid_argument("run_bench: method must be ss1 or ss2");
    if (grid.targets < 1 || grid.trials < 1 || grid.epochs < 1 || grid.epoch_iters < 1)
        throw std::invalid_argument("run_bench: all counts must be >= 1");
    if (grid.sketch_dims.empty())
        throw std::invalid_argument("run_bench: need at least one sketch width");
    const CircuitStructure structure = build_structure(grid.n, grid.L);
    const GateEngine eng(structure);
    const std::size_t d = eng.dim();
    for (const int m : grid.sketch_dims)
        if (m < 1 || static_cast<std::size_t>(m) > d)
            throw std::invalid_argument("run_bench: sketch width out of range");

    std::vector<std::vector<double>> theta_u(static_cast<std::size_t>(grid.targets));
    for (int tid = 0; tid < grid.targets; ++tid)
        theta_u[static_cast<std::size_t>(tid)] = init_theta(
            structure.param_count,
            derive_seed(grid.seed, {seed_tag::target, static_cast<std::uint64_t>(tid)}));

    const std::size_t per_m = static_cast<std::size_t>(grid.targets) *
                              static_cast<std::size_t>(grid.trials);
    const std::size_t total = per_m * grid.sketch_dims.size();
    std::vector<BenchRow> rows(total);

    const LbfgsConfig lcfg;
    parallel_for_chunks(total, std::max(1, grid.threads), [&](std::size_t job) {
        const std::size_t mi = job / per_m;
        const int tid = static_cast<int>((job % per_m) / static_cast<std::size_t>(grid.trials));
        const int trial = static_cast<int>(job % static_cast<std::size_t>(grid.trials));
        const int m = grid.sketch_dims[mi];

        BenchRow& row = rows[job];
        row.n = grid.n;
        row.L = grid.L;
        row.m = m;
        row.method = grid.method;
        row.target_id = tid;
        row.trial_id = trial;
        row.epochs = grid.epochs;
        row.seed = derive_seed(grid.seed,
                               {seed_tag::trial, static_cast<std::uint64_t>(tid),
                                static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(m)});
        const SolveSeeds seeds{derive_seed(row.seed, {seed_tag::init}),
                               derive_seed(row.seed, {seed_tag::sketch})};
        try {
            const std::vector<double>& tu = theta_u[static_cast<std::size_t>(tid)];
            const RunReport rep =
                grid.method == "ss1"
                    ? sketch_and_solve_1(eng, tu, static_cast<std::size_t>(m), grid.epochs, seeds,
                                         lcfg, grid.epoch_iters, 1, nullptr,
                                         grid.trial_deadline_s)
                    : sketch_and_solve_2(eng, tu, static_cast<std::size_t>(m), grid.epochs, seeds,
                                         lcfg, grid.epoch_iters, 1, nullptr,
                                         grid.trial_deadline_s);
            row.final_sketched_objective = rep.final_sketched_objective;
            row.fidelity = rep.fidelity;
            row.success = rep.success;
            row.wall_time_s = rep.wall_seconds;
            row.status = rep.status;
        } catch (const std::exception& e) {
            row.final_sketched_objective = std::numeric_limits<double>::quiet_NaN();
            row.fidelity = std::numeric_limits<double>::quiet_NaN();
            row.success = false;
            row.status = std::string("error: ") + e.what();
        }
    });

    BenchResult res;
    res.rows = std::move(rows);
    res.csv = bench_csv(res.rows);
    res.summary_json = bench_summary_json(grid, res.rows);
    return res;
}

}  // namespace aqc
