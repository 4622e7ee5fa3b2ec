#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "aqc/lbfgs.hpp"
#include "aqc/rng.hpp"

using namespace aqc;

namespace {

// f(x) = ||Ax - b||^2 with dense A; gradient 2 A^T (Ax - b).
struct Quadratic {
    int dim;
    std::vector<double> a;  // row-major dim x dim
    std::vector<double> b;

    static Quadratic random(int dim, std::uint64_t seed) {
        Quadratic q;
        q.dim = dim;
        q.a.resize(static_cast<std::size_t>(dim) * dim);
        q.b.resize(static_cast<std::size_t>(dim));
        Rng rng(seed);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                q.a[static_cast<std::size_t>(i) * dim + j] = (i == j ? 1.0 : 0.0) + 0.1 * rng.normal();
        for (double& v : q.b) v = rng.normal();
        return q;
    }

    double operator()(const std::vector<double>& x, std::vector<double>& grad) const {
        std::vector<double> r(static_cast<std::size_t>(dim), 0.0);
        for (int i = 0; i < dim; ++i) {
            double s = -b[static_cast<std::size_t>(i)];
            for (int j = 0; j < dim; ++j) s += a[static_cast<std::size_t>(i) * dim + j] * x[static_cast<std::size_t>(j)];
            r[static_cast<std::size_t>(i)] = s;
        }
        double f = 0.0;
        for (const double v : r) f += v * v;
        for (int j = 0; j < dim; ++j) {
            double s = 0.0;
            for (int i = 0; i < dim; ++i) s += a[static_cast<std::size_t>(i) * dim + j] * r[static_cast<std::size_t>(i)];
            grad[static_cast<std::size_t>(j)] = 2.0 * s;
        }
        return f;
    }
};

double rosenbrock(const std::vector<double>& x, std::vector<double>& g) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
}

}  // namespace

TEST_CASE("quasi-Newton solve drives a quadratic to stationarity") {
    const Quadratic q = Quadratic::random(10, 51);
    LbfgsConfig cfg;
    cfg.max_iters = 50;
    cfg.f_tol = 0.0;  // stop on stationarity alone
    const LbfgsResult res = lbfgs_minimize(q, std::vector<double>(10, 0.0), cfg);

    CHECK(res.status == LbfgsStatus::GradTol);
    CHECK(res.iterations <= 50);
    double gnorm = 0.0;
    for (const double v : res.grad) gnorm += v * v;
    CHECK(std::sqrt(gnorm) <= 1e-8);

    // Stationarity means the normal equations hold: A^T A x = A^T b.
    std::vector<double> grad_check(10, 0.0);
    q(res.theta, grad_check);
    double resid = 0.0;
    for (const double v : grad_check) resid = std::max(resid, std::abs(v));
    CHECK(resid <= 1e-6);
}

TEST_CASE("quasi-Newton solve crosses the banana valley") {
    LbfgsConfig cfg;
    cfg.max_iters = 500;
    const LbfgsResult res = lbfgs_minimize(rosenbrock, {-1.2, 1.0}, cfg);
    CHECK(std::abs(res.theta[0] - 1.0) <= 1e-6);
    CHECK(std::abs(res.theta[1] - 1.0) <= 1e-6);
}

TEST_CASE("starting at the minimizer returns without stepping") {
    const auto bowl = [](const std::vector<double>& x, std::vector<double>& g) {
        double f = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = x[i] - 3.0;
            g[i] = 2.0 * r;
            f += r * r;
        }
        return f;
    };
    const LbfgsResult res = lbfgs_minimize(bowl, std::vector<double>(4, 3.0), LbfgsConfig{});
    CHECK(res.iterations == 0);
    CHECK(res.status == LbfgsStatus::GradTol);
    CHECK(res.trace.size() == 1u);
}

TEST_CASE("accepted objective values never increase") {
    const Quadratic q = Quadratic::random(10, 52);
    LbfgsConfig cfg;
    cfg.max_iters = 50;
    const LbfgsResult r1 = lbfgs_minimize(q, std::vector<double>(10, 2.0), cfg);
    for (std::size_t i = 1; i < r1.trace.size(); ++i) REQUIRE(r1.trace[i] <= r1.trace[i - 1]);

    cfg.max_iters = 500;
    const LbfgsResult r2 = lbfgs_minimize(rosenbrock, {-1.2, 1.0}, cfg);
    for (std::size_t i = 1; i < r2.trace.size(); ++i) REQUIRE(r2.trace[i] <= r2.trace[i - 1]);
}

TEST_CASE("an unbounded direction exhausts the line search and stops") {
    // Strong-curvature condition can never hold on a linear function, so
    // both the regular search and the steepest-descent retry fail.
    const auto linear = [](const std::vector<double>& x, std::vector<double>& g) {
        double f = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            f -= x[i];
            g[i] = -1.0;
        }
        return f;
    };
    const LbfgsResult res = lbfgs_minimize(linear, std::vector<double>(3, 0.0), LbfgsConfig{});
    CHECK(res.status == LbfgsStatus::LineSearchFail);
    CHECK(res.line_search_failures == 2);
    CHECK(res.iterations == 0);
}

TEST_CASE("iteration cap reports as such") {
    LbfgsConfig cfg;
    cfg.max_iters = 3;
    const LbfgsResult res = lbfgs_minimize(rosenbrock, {-1.2, 1.0}, cfg);
    CHECK(res.status == LbfgsStatus::MaxIters);
    CHECK(res.iterations == 3);
    CHECK(res.trace.size() == 4u);
}
