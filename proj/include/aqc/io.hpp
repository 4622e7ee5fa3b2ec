#pragma once

// On-disk formats: target descriptions and run reports as JSON, benchmark
// rows as CSV. Emission is hand-rolled with a fixed key order and floats at
// 17 significant digits, so identical inputs give byte-identical files;
// parsing goes through nlohmann::json.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aqc/circuit.hpp"
#include "aqc/solve.hpp"

namespace aqc {

/// A target description: the angles that generate U = V(theta_u).
struct TargetFile {
    std::string version = "target-v1";
    int n = 0;
    int L = 0;
    std::vector<double> theta_u;
    std::uint64_t seed = 0;  // seed the angles were drawn from
};

/// Shortest decimal form that round-trips a double (17 significant digits).
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

namespace detail {

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

inline void require_finite(const std::vector<double>& v, const char* what) {
    for (const double x : v)
        if (!std::isfinite(x)) throw std::runtime_error(std::string(what) + ": non-finite value");
}

}  // namespace detail

inline std::string target_file_json(const TargetFile& t) {
    std::string s;
    s += "{\n";
    s += "  \"version\": \"" + detail::json_escape(t.version) + "\",\n";
    s += "  \"n\": " + std::to_string(t.n) + ",\n";
    s += "  \"L\": " + std::to_string(t.L) + ",\n";
    s += "  \"seed\": " + std::to_string(t.seed) + ",\n";
    s += "  \"theta_u\": [\n";
    for (std::size_t i = 0; i < t.theta_u.size(); ++i) {
        s += "    " + format_double(t.theta_u[i]);
        s += (i + 1 < t.theta_u.size()) ? ",\n" : "\n";
    }
    s += "  ]\n";
    s += "}\n";
    return s;
}

inline TargetFile parse_target_file(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("target file: invalid JSON: ") + e.what());
    }
    TargetFile t;
    try {
        t.version = j.at("version").get<std::string>();
        t.n = j.at("n").get<int>();
        t.L = j.at("L").get<int>();
        t.seed = j.at("seed").get<std::uint64_t>();
        t.theta_u = j.at("theta_u").get<std::vector<double>>();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("target file: missing or mistyped field: ") +
                                 e.what());
    }
    if (t.version != "target-v1")
        throw std::runtime_error("target file: unsupported version '" + t.version + "'");
    const CircuitStructure s = build_structure(t.n, t.L);  // validates (n, L)
    if (t.theta_u.size() != static_cast<std::size_t>(s.param_count))
        throw std::runtime_error("target file: expected " + std::to_string(s.param_count) +
                                 " angles, got " + std::to_string(t.theta_u.size()));
    detail::require_finite(t.theta_u, "target file");
    return t;
}

inline std::string run_report_json(const RunReport& r) {
    std::string s;
    s += "{\n";
    s += "  \"version\": \"run-report-v1\",\n";
    s += "  \"method\": \"" + detail::json_escape(r.method) + "\",\n";
    s += "  \"n\": " + std::to_string(r.n) + ",\n";
    s += "  \"L\": " + std::to_string(r.L) + ",\n";
    s += "  \"m\": " + std::to_string(r.m) + ",\n";
    s += "  \"epochs\": " + std::to_string(r.epochs) + ",\n";
    s += "  \"epoch_iters\": " + std::to_string(r.epoch_iters) + ",\n";
    s += "  \"init_seed\": " + std::to_string(r.init_seed) + ",\n";
    s += "  \"forced_init\": " + std::string(r.forced_init ? "true" : "false") + ",\n";
    s += "  \"status\": \"" + detail::json_escape(r.status) + "\",\n";
    s += "  \"epoch_reports\": [\n";
    for (std::size_t e = 0; e < r.epoch_reports.size(); ++e) {
        const EpochReport& er = r.epoch_reports[e];
        s += "    {\n";
        s += "      \"sketch_seed\": " + std::to_string(er.sketch_seed) + ",\n";
        s += "      \"iterations\": " + std::to_string(er.iterations) + ",\n";
        s += "      \"final_objective\": " + format_double(er.final_objective) + ",\n";
        s += "      \"line_search_failures\": " + std::to_string(er.line_search_failures) + ",\n";
        s += "      \"qr_fallback\": " + std::string(er.qr_fallback ? "true" : "false") + ",\n";
        s += "      \"status\": \"" + detail::json_escape(er.status) + "\"\n";
        s += (e + 1 < r.epoch_reports.size()) ? "    },\n" : "    }\n";
    }
    s += "  ],\n";
    s += "  \"final_sketched_objective\": " + format_double(r.final_sketched_objective) + ",\n";
    s += "  \"fidelity\": " + format_double(r.fidelity) + ",\n";
    s += "  \"success\": " + std::string(r.success ? "true" : "false") + ",\n";
    s += "  \"wall_time_s\": " + format_double(r.wall_seconds) + "\n";
    s += "}\n";
    return s;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw std::runtime_error("read failed: " + path);
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace aqc
