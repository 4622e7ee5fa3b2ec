#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aqc/bench.hpp"
#include "aqc/circuit.hpp"
#include "aqc/engine.hpp"
#include "aqc/io.hpp"
#include "aqc/solve.hpp"

using namespace aqc;

namespace {

// Splits one CSV line into fields; no quoting in this format.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

// The CSV minus its wall-time column (the only run-to-run varying field).
std::string strip_wall_column(const std::string& csv) {
    std::string out;
    for (const std::string& line : csv_lines(csv)) {
        const std::size_t cut = line.rfind(',');
        out += line.substr(0, cut);
        out += "\n";
    }
    return out;
}

BenchGrid small_grid() {
    BenchGrid g;
    g.n = 3;
    g.L = 3;
    g.method = "ss1";
    g.sketch_dims = {4, 8};
    g.targets = 2;
    g.trials = 3;
    g.epochs = 2;
    g.epoch_iters = 60;
    g.seed = 97;
    return g;
}

}  // namespace

TEST_CASE("target files round-trip bit-exactly") {
    TargetFile t;
    t.n = 3;
    t.L = 2;
    t.seed = 0xfeedface12345678ULL;
    const CircuitStructure s = build_structure(t.n, t.L);
    t.theta_u.resize(static_cast<std::size_t>(s.param_count));
    Rng rng(7);
    for (double& v : t.theta_u) v = rng.uniform(0.0, 2.0 * M_PI);
    t.theta_u[0] = 1.0 / 3.0;
    t.theta_u[1] = 1e-17;
    t.theta_u[2] = M_PI;

    const std::string text = target_file_json(t);
    CHECK(text == target_file_json(t));

    const TargetFile back = parse_target_file(text);
    CHECK(back.n == t.n);
    CHECK(back.L == t.L);
    CHECK(back.seed == t.seed);
    REQUIRE(back.theta_u.size() == t.theta_u.size());
    for (std::size_t i = 0; i < t.theta_u.size(); ++i) CHECK(back.theta_u[i] == t.theta_u[i]);
}

TEST_CASE("malformed target files are rejected") {
    CHECK_THROWS_AS(parse_target_file("not json at all"), std::runtime_error);
    CHECK_THROWS_AS(parse_target_file("{}"), std::runtime_error);

    TargetFile t;
    t.n = 2;
    t.L = 1;
    t.theta_u.assign(10, 0.5);
    const std::string good = target_file_json(t);

    std::string wrong_version = good;
    wrong_version.replace(wrong_version.find("target-v1"), 9, "target-v9");
    CHECK_THROWS_AS(parse_target_file(wrong_version), std::runtime_error);

    TargetFile short_theta = t;
    short_theta.theta_u.pop_back();
    CHECK_THROWS_AS(parse_target_file(target_file_json(short_theta)), std::runtime_error);

    TargetFile bad_shape = t;
    bad_shape.n = 1;
    CHECK_THROWS_AS(parse_target_file(target_file_json(bad_shape)), std::invalid_argument);
}

TEST_CASE("run reports serialize every trial detail") {
    const CircuitStructure s = build_structure(3, 3);
    const GateEngine eng(s);
    const std::vector<double> tu = init_theta(s.param_count, 11);
    const SolveSeeds seeds{derive_seed(12, {seed_tag::init}), derive_seed(12, {seed_tag::sketch})};
    const RunReport rep = sketch_and_solve_1(eng, tu, 4, 2, seeds, LbfgsConfig{}, 50);

    const std::string text = run_report_json(rep);
    const nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j.at("version") == "run-report-v1");
    CHECK(j.at("method") == "ss1");
    CHECK(j.at("n") == 3);
    CHECK(j.at("L") == 3);
    CHECK(j.at("m") == 4);
    CHECK(j.at("epochs") == 2);
    CHECK(j.at("init_seed") == seeds.init);
    CHECK(j.at("forced_init") == false);
    CHECK(j.at("status") == "ok");
    REQUIRE(j.at("epoch_reports").size() == 2);
    for (std::size_t e = 0; e < 2; ++e) {
        const auto& je = j.at("epoch_reports").at(e);
        const EpochReport& er = rep.epoch_reports[e];
        CHECK(je.at("sketch_seed") == er.sketch_seed);
        CHECK(je.at("iterations") == er.iterations);
        CHECK(je.at("final_objective").get<double>() == er.final_objective);
        CHECK(je.at("line_search_failures") == er.line_search_failures);
        CHECK(je.at("qr_fallback") == er.qr_fallback);
    }
    CHECK(j.at("final_sketched_objective").get<double>() == rep.final_sketched_objective);
    CHECK(j.at("fidelity").get<double>() == rep.fidelity);
    CHECK(j.at("success") == rep.success);
    CHECK(j.at("wall_time_s").get<double>() == rep.wall_seconds);
}

TEST_CASE("csv header and row layout are pinned") {
    CHECK(std::string(kBenchCsvHeader) ==
          "n,L,m,method,target_id,trial_id,seed,epochs,final_sketched_objective,fidelity,"
          "success,wall_time_s");

    BenchRow r;
    r.n = 4;
    r.L = 8;
    r.m = 16;
    r.method = "ss2";
    r.target_id = 1;
    r.trial_id = 2;
    r.seed = 42;
    r.epochs = 3;
    r.final_sketched_objective = -0.5;
    r.fidelity = 0.25;
    r.success = false;
    r.wall_time_s = 1.5;
    const std::string csv = bench_csv({r});
    const std::vector<std::string> lines = csv_lines(csv);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == kBenchCsvHeader);
    CHECK(lines[1] == "4,8,16,ss2,1,2,42,3,-0.5,0.25,0,1.5");
}

TEST_CASE("a one-cell grid produces exactly one data row") {
    BenchGrid g = small_grid();
    g.sketch_dims = {4};
    g.targets = 1;
    g.trials = 1;
    const BenchResult res = run_bench(g);
    REQUIRE(res.rows.size() == 1);
    CHECK(csv_lines(res.csv).size() == 2);
    CHECK(res.rows[0].status == "ok");
    CHECK(res.rows[0].success == (res.rows[0].fidelity >= kSuccessFidelity));
}

TEST_CASE("grid rows are ordered and reproducible") {
    const BenchGrid g = small_grid();
    const BenchResult a = run_bench(g);
    const BenchResult b = run_bench(g);
    REQUIRE(a.rows.size() == 12);

    // Same content except wall time, in (m, target, trial) order.
    CHECK(strip_wall_column(a.csv) == strip_wall_column(b.csv));
    for (std::size_t i = 1; i < a.rows.size(); ++i) {
        const BenchRow& p = a.rows[i - 1];
        const BenchRow& q = a.rows[i];
        CHECK(std::make_tuple(p.m, p.target_id, p.trial_id) <
              std::make_tuple(q.m, q.target_id, q.trial_id));
    }
}

TEST_CASE("grid content does not depend on the worker count") {
    BenchGrid g = small_grid();
    g.threads = 1;
    const BenchResult serial = run_bench(g);
    g.threads = 3;
    const BenchResult parallel = run_bench(g);
    CHECK(strip_wall_column(serial.csv) == strip_wall_column(parallel.csv));
}

TEST_CASE("summary statistics match an independent recomputation") {
    const BenchGrid g = small_grid();
    const BenchResult res = run_bench(g);

    const std::vector<std::string> lines = csv_lines(res.csv);
    REQUIRE(lines.size() == res.rows.size() + 1);
    const nlohmann::json j = nlohmann::json::parse(res.summary_json);
    REQUIRE(j.at("per_m").size() == g.sketch_dims.size());

    for (std::size_t mi = 0; mi < g.sketch_dims.size(); ++mi) {
        const int m = g.sketch_dims[mi];
        std::vector<double> rates;
        std::vector<double> walls;
        for (int tid = 0; tid < g.targets; ++tid) {
            int hits = 0;
            int count = 0;
            for (std::size_t li = 1; li < lines.size(); ++li) {
                const std::vector<std::string> f = split_csv(lines[li]);
                REQUIRE(f.size() == 12);
                if (std::stoi(f[2]) != m || std::stoi(f[4]) != tid) continue;
                ++count;
                hits += std::stoi(f[10]);
                walls.push_back(std::stod(f[11]));
            }
            rates.push_back(static_cast<double>(hits) / static_cast<double>(count));
        }
        double rate_mean = 0.0;
        for (const double r : rates) rate_mean += r;
        rate_mean /= static_cast<double>(rates.size());
        double rate_sd = 0.0;
        for (const double r : rates) rate_sd += (r - rate_mean) * (r - rate_mean);
        rate_sd = std::sqrt(rate_sd / static_cast<double>(rates.size() - 1));
        double wall_mean = 0.0;
        for (const double w : walls) wall_mean += w;
        wall_mean /= static_cast<double>(walls.size());

        const auto& jm = j.at("per_m").at(mi);
        CHECK(jm.at("m") == m);
        REQUIRE(jm.at("per_target_success_rate").size() == rates.size());
        for (std::size_t t = 0; t < rates.size(); ++t)
            CHECK(jm.at("per_target_success_rate").at(t).get<double>() == rates[t]);
        CHECK(jm.at("success_rate_mean").get<double>() == Catch::Approx(rate_mean).epsilon(1e-14));
        CHECK(jm.at("success_rate_sd").get<double>() == Catch::Approx(rate_sd).margin(1e-14));
        CHECK(jm.at("wall_time_mean_s").get<double>() == Catch::Approx(wall_mean).epsilon(1e-9));
    }
}

TEST_CASE("expired deadlines mark rows without aborting the grid") {
    BenchGrid g = small_grid();
    g.sketch_dims = {4};
    g.targets = 1;
    g.trials = 2;
    g.trial_deadline_s = 0.0;
    const BenchResult res = run_bench(g);
    REQUIRE(res.rows.size() == 2);
    for (const BenchRow& r : res.rows) {
        CHECK(r.status == "deadline");
        CHECK(std::isfinite(r.fidelity));
        CHECK(r.success == (r.fidelity >= kSuccessFidelity));
    }
    const nlohmann::json j = nlohmann::json::parse(res.summary_json);
    CHECK(j.at("per_m").at(0).at("failed_trials").size() == 2);
}

TEST_CASE("grid validation rejects bad configurations") {
    BenchGrid g = small_grid();
    g.method = "sgd";
    CHECK_THROWS_AS(run_bench(g), std::invalid_argument);
    g = small_grid();
    g.sketch_dims = {};
    CHECK_THROWS_AS(run_bench(g), std::invalid_argument);
    g = small_grid();
    g.sketch_dims = {9};  // wider than the 8-dimensional space
    CHECK_THROWS_AS(run_bench(g), std::invalid_argument);
    g = small_grid();
    g.targets = 0;
    CHECK_THROWS_AS(run_bench(g), std::invalid_argument);
}

TEST_CASE("text files round-trip through disk") {
    const std::string path = "build_test_roundtrip.json";
    const std::string payload = "{\"k\": 1}\n";
    write_text_file(path, payload);
    CHECK(read_text_file(path) == payload);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file("no/such/dir/file.json"), std::runtime_error);
    CHECK_THROWS_AS(write_text_file("no/such/dir/file.json", "x"), std::runtime_error);
}
