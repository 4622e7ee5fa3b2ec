#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <vector>

#include "aqc/dense.hpp"
#include "aqc/engine.hpp"
#include "aqc/objective.hpp"
#include "aqc/qr.hpp"
#include "aqc/rng.hpp"
#include "aqc/sketch.hpp"

using namespace aqc;

namespace {

std::vector<double> random_theta(const CircuitStructure& s, Rng& rng) {
    std::vector<double> t(static_cast<std::size_t>(s.param_count));
    for (double& v : t) v = rng.uniform(0.0, 2.0 * M_PI);
    return t;
}

// Independent slow oracle: central differences of an arbitrary scalar field.
template <class F>
std::vector<double> fd_gradient(F&& f, std::vector<double> theta, double h) {
    std::vector<double> g(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        theta[k] += h;
        const double fp = f(theta);
        theta[k] -= 2.0 * h;
        const double fm = f(theta);
        theta[k] += h;
        g[k] = (fp - fm) / (2.0 * h);
    }
    return g;
}

double worst_component_error(const std::vector<double>& got, const std::vector<double>& want) {
    double inf_norm = 0.0;
    for (const double v : want) inf_norm = std::max(inf_norm, std::abs(v));
    double worst = 0.0;
    for (std::size_t k = 0; k < got.size(); ++k) {
        const double denom = std::max({std::abs(want[k]), 1e-3 * inf_norm, 1e-12});
        worst = std::max(worst, std::abs(got[k] - want[k]) / denom);
    }
    return worst;
}

CMat identity_columns(std::size_t d) { return CMat::identity(d); }

double grad_norm(const std::vector<double>& g) {
    double s = 0.0;
    for (const double v : g) s += v * v;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("full objective vanishes at the target angles") {
    Rng rng(1001);
    const CircuitStructure s = build_structure(3, 3);
    const GateEngine eng(s);
    const std::vector<double> theta_u = random_theta(s, rng);
    const ObjectiveContext ctx(eng, theta_u, SketchOperator{});
    CHECK(std::abs(objective_full(ctx, theta_u)) <= 1e-10);
}

TEST_CASE("full objective equals the scaled Frobenius distance") {
    Rng rng(1002);
    const CircuitStructure s = build_structure(3, 3);
    const GateEngine eng(s);
    const std::size_t d = s.dim();
    const std::vector<double> theta_u = random_theta(s, rng);
    const std::vector<double> theta = random_theta(s, rng);
    const ObjectiveContext ctx(eng, theta_u, SketchOperator{});

    const CMat vd = dense_ansatz(s, theta);
    const CMat ud = dense_ansatz(s, theta_u);
    double fro2 = 0.0;
    for (std::size_t k = 0; k < vd.a.size(); ++k) fro2 += std::norm(vd.a[k] - ud.a[k]);
    const double want = fro2 / (2.0 * static_cast<double>(d));

    CHECK(std::abs(objective_full(ctx, theta) - want) <= 1e-10);
}

TEST_CASE("full objective stays within its bounds") {
    Rng rng(1003);
    const CircuitStructure s = build_structure(3, 4);
    const GateEngine eng(s);
    const std::vector<double> theta_u = random_theta(s, rng);
    const ObjectiveContext ctx(eng, theta_u, SketchOperator{});
    for (int t = 0; t < 20; ++t) {
        const double v = objective_full(ctx, random_theta(s, rng));
        CHECK(v >= -1e-12);
        CHECK(v <= 2.0 + 1e-12);
    }
}

TEST_CASE("identity-column sketch reproduces the full objective minus one") {
    Rng rng(1004);
    const CircuitStructure s = build_structure(3, 2);
    const GateEngine eng(s);
    const std::vector<double> theta_u = random_theta(s, rng);
    const std::vector<double> theta = random_theta(s, rng);

    SketchOperator id_sketch;
    id_sketch.kind = SketchKind::NormalizedGaussian;  // unit columns by construction
    id_sketch.columns = identity_columns(s.dim());

    const ObjectiveContext full_ctx(eng, theta_u, SketchOperator{});
    const ObjectiveContext id_ctx(eng, theta_u, id_sketch);
    CHECK(std::abs(objective_full(full_ctx, theta) - (1.0 + objective_sketched(id_ctx, theta))) <= 1e-10);
}

TEST_CASE("sketched objective attains its floor at the target") {
    Rng rng(1005);
    const CircuitStructure s = build_structure(3, 3);
    const GateEngine eng(s);
    const std::vector<double> theta_u = random_theta(s, rng);
    const SketchOperator sk = sample_normalized_sketch(s.dim(), 4, 77);
    const ObjectiveContext ctx(eng, theta_u, sk);
    CHECK(std::abs(objective_sketched(ctx, theta_u) - (-1.0)) <= 1e-10);
}

TEST_CASE("sketched objective matches dense evaluation") {
    Rng rng(1006);
    const CircuitStructure s = build_structure(4, 4);
    const GateEngine eng(s);
    const std::size_t d = s.dim(), m = 3;
    const std::vector<double> theta_u = random_theta(s, rng);
    const std::vector<double> theta = random_theta(s, rng);
    const SketchOperator sk = sample_normalized_sketch(d, m, 88);
    const ObjectiveContext ctx(eng, theta_u, sk);

    const CMat vx = matmul(dense_ansatz(s, theta), sk.columns);
    const CMat ux = matmul(dense_ansatz(s, theta_u), sk.columns);
    const double want = -trace_inner(vx, ux).real() / static_cast<double>(m);
    CHECK(std::abs(objective_sketched(ctx, theta) - want) <= 1e-10);
}

TEST_CASE("sketched objective respects unit-column bounds") {
    Rng rng(1007);
    const CircuitStructure s = build_structure(4, 5);
    const GateEngine eng(s);
    const std::vector<double> theta_u = random_theta(s, rng);
    for (int t = 0; t < 10; ++t) {
        const SketchOperator sk = sample_normalized_sketch(s.dim(), 1 + t % 6, 500 + t);
        const ObjectiveContext ctx(eng, theta_u, sk);
        const double v = objective_sketched(ctx, random_theta(s, rng));
        CHECK(v >= -1.0 - 1e-12);
        CHECK(v <= 1.0 + 1e-12);
    }
}

TEST_CASE("gradient vanishes at the target angles") {
    Rng rng(1008);
    const CircuitStructure s = build_structure(3, 3);
    const GateEngine eng(s);
    const std::vector<double> theta_u = random_theta(s, rng);
    const SketchOperator sk = sample_normalized_sketch(s.dim(), 4, 99);
    const ObjectiveContext ctx(eng, theta_u, sk);
    CHECK(grad_norm(gradient_sketched(ctx, theta_u)) <= 1e-8);
}

TEST_CASE("gradient matches central finite differences") {
    Rng rng(1009);
    const CircuitStructure s = build_structure(4, 4);
    const GateEngine eng(s);
    const std::vector<double> theta_u = random_theta(s, rng);
    const std::vector<double> theta = random_theta(s, rng);
    const SketchOperator sk = sample_normalized_sketch(s.dim(), 5, 111);
    const ObjectiveContext ctx(eng, theta_u, sk);

    const std::vector<double> g = gradient_sketched(ctx, theta);
    const std::vector<double> fd =
        fd_gradient([&](const std::vector<double>& t) { return objective_sketched(ctx, t); }, theta, 1e-5);
    CHECK(worst_component_error(g, fd) <= 1e-6);
}

TEST_CASE("full-column gradient equals finite differences of the full objective") {
    Rng rng(1010);
    const CircuitStructure s = build_structure(2, 1);
    const GateEngine eng(s);
    const std::vector<double> theta_u = random_theta(s, rng);
    const std::vector<double> theta = random_theta(s, rng);
    const ObjectiveContext ctx(eng, theta_u, SketchOperator{});

    const std::vector<double> g = gradient_sketched(ctx, theta);
    const std::vector<double> fd =
        fd_gradient([&](const std::vector<double>& t) { return objective_full(ctx, t); }, theta, 1e-5);
    CHECK(worst_component_error(g, fd) <= 1e-6);
}

TEST_CASE("gradient and finite differences agree across many instances") {
    int instances = 0;
    for (int n = 2; n <= 6; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            Rng rng(derive_seed(3000, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)}));
            const int L = 1 + trial % (2 * n);
            const CircuitStructure s = build_structure(n, L);
            const GateEngine eng(s);
            const std::size_t m = 1 + static_cast<std::size_t>(trial) % std::min<std::size_t>(s.dim(), 8);
            const std::vector<double> theta_u = random_theta(s, rng);
            const std::vector<double> theta = random_theta(s, rng);
            const SketchOperator sk = sample_normalized_sketch(s.dim(), m, derive_seed(3001, {static_cast<std::uint64_t>(instances)}));
            const ObjectiveContext ctx(eng, theta_u, sk);
            const std::vector<double> g = gradient_sketched(ctx, theta);
            const std::vector<double> fd =
                fd_gradient([&](const std::vector<double>& t) { return objective_sketched(ctx, t); }, theta, 1e-5);
            REQUIRE(worst_component_error(g, fd) <= 1e-6);
            ++instances;
        }
    }
    CHECK(instances == 50);
}

TEST_CASE("projection identity for orthonormal sketches") {
    // (1/2m) || (V-U) Q Q^dagger ||_F^2 = 1 - (1/m) Re <VQ, UQ>, dense left
    // side against the engine-computed right side.
    for (int n = 2; n <= 5; ++n) {
        Rng rng(derive_seed(4000, {static_cast<std::uint64_t>(n)}));
        const CircuitStructure s = build_structure(n, n);
        const GateEngine eng(s);
        const std::size_t d = s.dim();
        const std::size_t m = std::min<std::size_t>(d, static_cast<std::size_t>(3 + n));
        const std::vector<double> theta_u = random_theta(s, rng);
        const std::vector<double> theta = random_theta(s, rng);

        SketchOperator q;
        q.kind = SketchKind::Orthonormal;
        q.columns = householder_qr(sample_gaussian(d, m, derive_seed(4001, {static_cast<std::uint64_t>(n)}))).q;

        const CMat vd = dense_ansatz(s, theta);
        const CMat ud = dense_ansatz(s, theta_u);
        CMat diff(d, d);
        for (std::size_t k = 0; k < diff.a.size(); ++k) diff.a[k] = vd.a[k] - ud.a[k];
        const CMat proj = matmul(diff, matmul(q.columns, adjoint(q.columns)));
        double fro2 = 0.0;
        for (const cplx& v : proj.a) fro2 += std::norm(v);
        const double lhs = fro2 / (2.0 * static_cast<double>(m));

        const ObjectiveContext ctx(eng, theta_u, q);
        const double rhs = 1.0 + objective_sketched(ctx, theta);
        REQUIRE(std::abs(lhs - rhs) <= 1e-9);
    }
}

TEST_CASE("chunk boundaries do not change the column sum") {
    Rng rng(1012);
    const CircuitStructure s = build_structure(7, 4);
    const GateEngine eng(s);
    const std::size_t d = s.dim();  // 128: crosses the 64-column chunk edge
    const std::size_t m = 65;
    const std::vector<double> theta_u = random_theta(s, rng);
    const std::vector<double> theta = random_theta(s, rng);

    SketchOperator sk;
    sk.kind = SketchKind::NormalizedGaussian;
    sk.columns = CMat(d, m);
    for (std::size_t j = 0; j < m; ++j) sk.columns.at(j, j) = cplx{1.0, 0.0};
    const ObjectiveContext ctx(eng, theta_u, sk);

    // Same sum accumulated one column at a time.
    Scratch scr(d);
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < m; ++j) {
        StateBatch v = StateBatch::basis(d, j, 1);
        StateBatch u = v;
        eng.apply_ansatz(theta, v, scr);
        eng.apply_ansatz(theta_u, u, scr);
        acc += col_dot(v.col(0), u.col(0), d);
    }
    const double want = -acc.real() / static_cast<double>(m);
    CHECK(std::abs(objective_sketched(ctx, theta) - want) <= 1e-12);
}

TEST_CASE("results are identical across thread counts") {
    Rng rng(1013);
    const CircuitStructure s = build_structure(7, 7);
    const GateEngine eng(s);
    const std::vector<double> theta_u = random_theta(s, rng);
    const std::vector<double> theta = random_theta(s, rng);

    const ObjectiveContext full_ctx(eng, theta_u, SketchOperator{});
    CHECK(objective_full(full_ctx, theta, 1) == objective_full(full_ctx, theta, 3));

    const SketchOperator sk = sample_normalized_sketch(s.dim(), 100, 131);
    const ObjectiveContext ctx(eng, theta_u, sk);
    const std::vector<double> g1 = gradient_sketched(ctx, theta, 1);
    const std::vector<double> g3 = gradient_sketched(ctx, theta, 3);
    REQUIRE(g1.size() == g3.size());
    for (std::size_t k = 0; k < g1.size(); ++k) REQUIRE(g1[k] == g3[k]);

    const FidelityResult f1 = fidelity_estimated(eng, theta, theta_u, 150, 9090, 1);
    const FidelityResult f3 = fidelity_estimated(eng, theta, theta_u, 150, 9090, 3);
    CHECK(f1.value == f3.value);
    CHECK(f1.std_error == f3.std_error);
}

TEST_CASE("fidelity facts") {
    Rng rng(1014);
    const CircuitStructure s = build_structure(3, 2);
    const GateEngine eng(s);
    const std::size_t d = s.dim();
    const std::vector<double> theta_u = random_theta(s, rng);

    SECTION("coincident angles give one") {
        const FidelityResult f = fidelity_exact(eng, theta_u, theta_u);
        CHECK(std::abs(f.value - 1.0) <= 1e-12);
    }

    SECTION("orthogonal-in-trace circuits hit the floor") {
        // Advancing one initial-layer z-rotation by pi makes V^dagger U a
        // traceless diagonal, so the overlap term drops out entirely.
        std::vector<double> theta_v = theta_u;
        theta_v[0] += M_PI;
        const FidelityResult f = fidelity_exact(eng, theta_v, theta_u);
        CHECK(std::abs(f.value - 1.0 / (static_cast<double>(d) + 1.0)) <= 1e-12);
    }

    SECTION("matches the dense trace evaluation") {
        const std::vector<double> theta_v = random_theta(s, rng);
        const cplx t = trace_inner(dense_ansatz(s, theta_v), dense_ansatz(s, theta_u));
        const double want = (1.0 + std::norm(t) / static_cast<double>(d)) / (static_cast<double>(d) + 1.0);
        const FidelityResult f = fidelity_exact(eng, theta_v, theta_u);
        CHECK(std::abs(f.value - want) <= 1e-10);
    }
}

TEST_CASE("estimated fidelity") {
    Rng rng(1015);
    const CircuitStructure s = build_structure(4, 4);
    const GateEngine eng(s);
    const std::vector<double> theta_u = random_theta(s, rng);
    const std::vector<double> theta_v = random_theta(s, rng);

    SECTION("deterministic per seed and chunk-split across large sample counts") {
        const int k = 2 * static_cast<int>(s.dim()) + 3;
        const FidelityResult a = fidelity_estimated(eng, theta_v, theta_u, k, 2717);
        const FidelityResult b = fidelity_estimated(eng, theta_v, theta_u, k, 2717);
        CHECK(a.value == b.value);
        CHECK(a.std_error == b.std_error);
        CHECK(a.std_error > 0.0);
    }

    SECTION("agrees with the exact value within its own error bars") {
        const FidelityResult exact = fidelity_exact(eng, theta_v, theta_u);
        const FidelityResult est = fidelity_estimated(eng, theta_v, theta_u, 400, 555);
        CHECK(std::abs(est.value - exact.value) <= 5.0 * est.std_error + 1e-3);
    }

    SECTION("coincident angles estimate one with zero spread") {
        const FidelityResult f = fidelity_estimated(eng, theta_u, theta_u, 32, 777);
        CHECK(std::abs(f.value - 1.0) <= 1e-12);
        CHECK(f.std_error <= 1e-12);
    }

    SECTION("rejects degenerate sample counts") {
        CHECK_THROWS_AS(fidelity_estimated(eng, theta_v, theta_u, 1, 1), std::invalid_argument);
    }
}

TEST_CASE("context validation") {
    Rng rng(1016);
    const CircuitStructure s = build_structure(3, 1);
    const GateEngine eng(s);
    const std::vector<double> theta_u = random_theta(s, rng);

    std::vector<double> short_theta(theta_u.size() - 1, 0.0);
    CHECK_THROWS_AS(ObjectiveContext(eng, short_theta, SketchOperator{}), std::invalid_argument);

    SketchOperator bad;
    bad.kind = SketchKind::NormalizedGaussian;
    bad.columns = CMat(4, 2);  // wrong row count for d=8
    CHECK_THROWS_AS(ObjectiveContext(eng, theta_u, bad), std::invalid_argument);

    const SketchOperator sk = sample_normalized_sketch(s.dim(), 2, 1);
    const ObjectiveContext ctx(eng, theta_u, sk);
    CHECK_THROWS_AS(objective_full(ctx, theta_u), std::invalid_argument);
    CHECK_THROWS_AS(objective_sketched(ctx, short_theta), std::invalid_argument);
}

TEST_CASE("gradient cost stays near the objective cost", "[.][perf]") {
    Rng rng(1017);
    const CircuitStructure s = build_structure(10, 30);
    const GateEngine eng(s);
    const std::vector<double> theta_u = random_theta(s, rng);
    const std::vector<double> theta = random_theta(s, rng);
    const SketchOperator sk = sample_normalized_sketch(s.dim(), 32, 2222);
    const ObjectiveContext ctx(eng, theta_u, sk);

    const auto time_min = [](auto&& fn) {
        double best = 1e300;
        for (int rep = 0; rep < 3; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            fn();
            const auto t1 = std::chrono::steady_clock::now();
            best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
        }
        return best;
    };
    volatile double sink = 0.0;
    const double t_obj = time_min([&] { sink = sink + objective_sketched(ctx, theta); });
    const double t_grad = time_min([&] { sink = sink + gradient_sketched(ctx, theta)[0]; });
    const double ratio = t_grad / std::max(t_obj, 1e-12);
    INFO("gradient/objective wall-time ratio: " << ratio);
    if (ratio > 8.0) WARN("gradient evaluation exceeded 8x the objective cost: ratio = " << ratio);
    SUCCEED();
}
