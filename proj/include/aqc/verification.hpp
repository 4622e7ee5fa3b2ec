#pragma once

// Statistical and exact checks behind the estimators: variance bounds for
// quadratic ratios and sketched objectives, gradient-noise scaling, overlap
// concentration under uniformly random unitaries, and the exact worst-case
// sketch construction. Monte-Carlo pass rules are "within three standard
// errors of the stated bound or target"; nothing here compares noisy
// floating-point values bare.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aqc/dense.hpp"
#include "aqc/engine.hpp"
#include "aqc/objective.hpp"
#include "aqc/qr.hpp"
#include "aqc/rng.hpp"
#include "aqc/sketch.hpp"
#include "aqc/state.hpp"

namespace aqc {

/// One seeded check: an empirical quantity against a theoretical upper bound
/// (one-sided) or target value (two-sided).
struct StatCheckReport {
    std::string quantity;
    std::size_t samples = 0;
    double empirical = 0.0;
    double bound = 0.0;  // upper bound, or the target when two_sided
    double std_error = 0.0;
    bool two_sided = false;
    bool pass = false;
    std::uint64_t seed = 0;
};

namespace detail {

struct MomentSummary {
    double mean = 0.0;
    double se_mean = 0.0;
    double var = 0.0;     // unbiased sample variance
    double se_var = 0.0;  // standard error of the variance estimate
};

inline MomentSummary summarize(const std::vector<double>& y) {
    const std::size_t n = y.size();
    if (n < 2) throw std::invalid_argument("summarize: need at least two samples");
    MomentSummary s;
    double acc = 0.0;
    for (double v : y) acc += v;
    s.mean = acc / static_cast<double>(n);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : y) {
        const double z = (v - s.mean) * (v - s.mean);
        m2 += z;
        m4 += z * z;
    }
    s.var = m2 / static_cast<double>(n - 1);
    s.se_mean = std::sqrt(s.var / static_cast<double>(n));
    // The error bar on the variance is the spread of the squared deviations.
    const double zbar = m2 / static_cast<double>(n);
    const double zvar = std::max(0.0, m4 / static_cast<double>(n) - zbar * zbar);
    s.se_var = std::sqrt(zvar / static_cast<double>(n));
    return s;
}

// Absolute floor added to every tolerance so that exactly-zero spread cases
// (constant samples) do not degenerate into 0 <= 0 comparisons.
inline constexpr double kStatFloor = 1e-12;

}  // namespace detail

/// Monte-Carlo check for the ratio Y(a) = sum_i a_i X_i^2 / sum_i X_i^2 with
/// independent standard-normal X_i: asserts the variance bound
/// var(Y) <= 4(n-1)/(n^2(n+2)) sum_i a_i^2 and the mean identity
/// E[Y] = mean(a), both to three standard errors.
inline StatCheckReport check_ratio_variance(const std::vector<double>& a, std::size_t samples,
                                            std::uint64_t seed) {
    if (a.empty()) throw std::invalid_argument("check_ratio_variance: empty coefficient vector");
    if (samples < 10000)
        throw std::invalid_argument("check_ratio_variance: need at least 10^4 samples");
    const double n = static_cast<double>(a.size());
    Rng rng(seed);
    std::vector<double> y(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        double num = 0.0;
        double den = 0.0;
        for (const double ai : a) {
            const double x = rng.normal();
            num += ai * x * x;
            den += x * x;
        }
        y[s] = num / den;
    }
    const detail::MomentSummary ms = detail::summarize(y);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const double ai : a) {
        sum += ai;
        sum_sq += ai * ai;
    }

    StatCheckReport rep;
    rep.quantity = "ratio_variance";
    rep.samples = samples;
    rep.empirical = ms.var;
    rep.bound = 4.0 * (n - 1.0) / (n * n * (n + 2.0)) * sum_sq;
    rep.std_error = ms.se_var;
    rep.seed = seed;
    const bool var_ok = ms.var <= rep.bound + 3.0 * ms.se_var + detail::kStatFloor;
    const bool mean_ok = std::abs(ms.mean - sum / n) <= 3.0 * ms.se_mean + detail::kStatFloor;
    rep.pass = var_ok && mean_ok;
    return rep;
}

/// var(Re<V(theta_v) x, V(theta_u) x>) over uniformly random complex unit
/// vectors x, against the closed-form bound 4(d-1)/(d(d+2)).
inline StatCheckReport check_unit_batch_variance(const GateEngine& eng,
                                                 const std::vector<double>& theta_v,
                                                 const std::vector<double>& theta_u,
                                                 std::size_t samples, std::uint64_t seed) {
    if (eng.structure().n > 10)
        throw std::invalid_argument("check_unit_batch_variance: capped at 10 qubits");
    if (samples < 100)
        throw std::invalid_argument("check_unit_batch_variance: need at least 100 samples");
    const std::size_t d = eng.dim();
    const auto p = static_cast<std::size_t>(eng.structure().param_count);
    if (theta_v.size() != p || theta_u.size() != p)
        throw std::invalid_argument("check_unit_batch_variance: parameter length mismatch");

    Rng rng(seed);
    Scratch scr(d);
    std::vector<double> y;
    y.reserve(samples);
    const std::size_t block = 64;
    for (std::size_t done = 0; done < samples;) {
        const std::size_t c = std::min(block, samples - done);
        CMat g(d, c);
        fill_gaussian(g, rng);
        CMat unit = normalize_columns(std::move(g), rng).columns;
        StateBatch v(d, c);
        v.data = unit.a;
        eng.apply_ansatz(theta_v, v, scr, Direction::Forward);
        StateBatch u(d, c);
        u.data = std::move(unit.a);
        eng.apply_ansatz(theta_u, u, scr, Direction::Forward);
        for (std::size_t j = 0; j < c; ++j)
            y.push_back(col_dot(v.col(j), u.col(j), d).real());
        done += c;
    }
    const detail::MomentSummary ms = detail::summarize(y);

    StatCheckReport rep;
    rep.quantity = "unit_batch_variance";
    rep.samples = samples;
    rep.empirical = ms.var;
    rep.bound = 4.0 * (static_cast<double>(d) - 1.0) /
                (static_cast<double>(d) * (static_cast<double>(d) + 2.0));
    rep.std_error = ms.se_var;
    rep.seed = seed;
    rep.pass = ms.var <= rep.bound + 3.0 * ms.se_var + detail::kStatFloor;
    return rep;
}

/// E || g_sketched - g_full ||^2 over fresh m-column sketches, against the
/// noise bound (d-1) p / (m d (d+2)) with p the parameter count. Passing
/// SketchKind::Full (m must equal d) exercises the zero-deviation case.
inline StatCheckReport check_gradient_noise(const GateEngine& eng,
                                            const std::vector<double>& theta_v,
                                            const std::vector<double>& theta_u, int m,
                                            std::size_t sketches, std::uint64_t seed,
                                            SketchKind kind = SketchKind::NormalizedGaussian) {
    if (eng.structure().n > 8)
        throw std::invalid_argument("check_gradient_noise: capped at 8 qubits");
    if (sketches < 2) throw std::invalid_argument("check_gradient_noise: need at least 2 sketches");
    const std::size_t d = eng.dim();
    if (m < 1 || static_cast<std::size_t>(m) > d)
        throw std::invalid_argument("check_gradient_noise: sketch width out of range");
    if (kind == SketchKind::Full && static_cast<std::size_t>(m) != d)
        throw std::invalid_argument("check_gradient_noise: full sketch requires m = d");
    if (kind == SketchKind::Orthonormal)
        throw std::invalid_argument("check_gradient_noise: unsupported sketch kind");

    SketchOperator full;
    full.kind = SketchKind::Full;
    const ObjectiveContext full_ctx(eng, theta_u, full);
    const std::vector<double> g_full = gradient_sketched(full_ctx, theta_v);

    std::vector<double> dev(sketches);
    for (std::size_t s = 0; s < sketches; ++s) {
        SketchOperator sk;
        if (kind == SketchKind::Full) {
            sk = full;
        } else {
            sk = sample_normalized_sketch(d, static_cast<std::size_t>(m),
                                          derive_seed(seed, {seed_tag::sketch, s}));
        }
        const ObjectiveContext ctx(eng, theta_u, sk);
        const std::vector<double> g = gradient_sketched(ctx, theta_v);
        double acc = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double diff = g[k] - g_full[k];
            acc += diff * diff;
        }
        dev[s] = acc;
    }
    const detail::MomentSummary ms = detail::summarize(dev);

    const double p = static_cast<double>(eng.structure().param_count);
    const double dd = static_cast<double>(d);
    StatCheckReport rep;
    rep.quantity = "gradient_noise";
    rep.samples = sketches;
    rep.empirical = ms.mean;
    rep.bound = (dd - 1.0) * p / (static_cast<double>(m) * dd * (dd + 2.0));
    rep.std_error = ms.se_mean;
    rep.seed = seed;
    rep.pass = ms.mean <= rep.bound + 3.0 * ms.se_mean + detail::kStatFloor;
    return rep;
}

/// Overlap concentration for uniformly random V against a fixed random U:
/// E|<V,U>|^2 = 1 (two-sided, three standard errors) and the tail bound
/// P(|<V,U>| > t) <= 1/t^2 at t in {2, 4, 8}.
inline StatCheckReport check_haar_concentration(int d, std::size_t samples, std::uint64_t seed) {
    if (d < 1 || d > 128)
        throw std::invalid_argument("check_haar_concentration: dimension out of range");
    if (samples < 100)
        throw std::invalid_argument("check_haar_concentration: need at least 100 samples");
    const CMat u = haar_unitary(static_cast<std::size_t>(d), derive_seed(seed, {seed_tag::target}));

    std::vector<double> y(samples);
    const double tails[3] = {2.0, 4.0, 8.0};
    std::size_t exceed[3] = {0, 0, 0};
    for (std::size_t s = 0; s < samples; ++s) {
        const CMat v =
            haar_unitary(static_cast<std::size_t>(d), derive_seed(seed, {seed_tag::sample, s}));
        const double abs2 = std::norm(trace_inner(v, u));
        y[s] = abs2;
        for (int t = 0; t < 3; ++t)
            if (abs2 > tails[t] * tails[t]) ++exceed[t];
    }
    const detail::MomentSummary ms = detail::summarize(y);

    StatCheckReport rep;
    rep.quantity = "overlap_concentration";
    rep.samples = samples;
    rep.empirical = ms.mean;
    rep.bound = 1.0;
    rep.std_error = ms.se_mean;
    rep.two_sided = true;
    rep.seed = seed;
    bool ok = std::abs(ms.mean - 1.0) <= 3.0 * ms.se_mean + detail::kStatFloor;
    for (int t = 0; t < 3; ++t) {
        const double phat = static_cast<double>(exceed[t]) / static_cast<double>(samples);
        const double se = std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
        ok = ok && phat <= 1.0 / (tails[t] * tails[t]) + 3.0 * se + detail::kStatFloor;
    }
    rep.pass = ok;
    return rep;
}

/// Worst-case unitary for a fixed sketch: given unit columns x_1..x_m spanning
/// an m-dimensional subspace with orthonormal basis Q, returns
/// V' = U (2 Q Q^dagger - I). V' is unitary, agrees with U on every sketch
/// column (<V' x_k, U x_k> = 1), yet <V', U> = 2m - d: the sketched objective
/// sees a perfect match while the full objective is off by 2(d-m)/d. The three
/// identities are re-verified numerically before returning.
inline CMat adversarial_unitary(const CMat& u, const CMat& xs) {
    const std::size_t d = u.rows;
    if (u.cols != d) throw std::invalid_argument("adversarial_unitary: U must be square");
    if (d > 256) throw std::invalid_argument("adversarial_unitary: dimension capped at 256");
    const std::size_t m = xs.cols;
    if (xs.rows != d || m < 1 || m > d)
        throw std::invalid_argument("adversarial_unitary: bad sketch block shape");
    for (std::size_t j = 0; j < m; ++j) {
        const double nrm = col_norm(xs.a.data() + j * d, d);
        if (std::abs(nrm - 1.0) > 1e-8)
            throw std::invalid_argument("adversarial_unitary: columns must be unit vectors");
    }

    const QrResult qr = householder_qr(xs);
    if (qr.min_pivot < 1e-12)
        throw std::runtime_error("adversarial_unitary: rank-deficient column set");

    // V' = U (Q1 Q1^dagger - Q2 Q2^dagger) = 2 (U Q1) Q1^dagger - U, so the
    // orthogonal complement basis Q2 is never materialized.
    const CMat uq = matmul(u, qr.q);
    CMat vp = matmul(uq, adjoint(qr.q));
    for (std::size_t k = 0; k < vp.a.size(); ++k) vp.a[k] = 2.0 * vp.a[k] - u.a[k];

    const CMat gram = matmul(adjoint(vp), vp);
    const CMat eye = CMat::identity(d);
    for (std::size_t k = 0; k < gram.a.size(); ++k)
        if (std::abs(gram.a[k] - eye.a[k]) > 1e-10)
            throw std::runtime_error("adversarial_unitary: result is not unitary");
    for (std::size_t j = 0; j < m; ++j) {
        const std::vector<cplx> xcol(xs.a.begin() + static_cast<std::ptrdiff_t>(j * d),
                                     xs.a.begin() + static_cast<std::ptrdiff_t>((j + 1) * d));
        const std::vector<cplx> vx = matvec(vp, xcol);
        const std::vector<cplx> ux = matvec(u, xcol);
        if (std::abs(col_dot(vx.data(), ux.data(), d) - cplx{1.0, 0.0}) > 1e-9)
            throw std::runtime_error("adversarial_unitary: sketch-column overlap drifted");
    }
    const double target = 2.0 * static_cast<double>(m) - static_cast<double>(d);
    if (std::abs(trace_inner(vp, u) - cplx{target, 0.0}) > 1e-8)
        throw std::runtime_error("adversarial_unitary: total overlap drifted");
    return vp;
}

// ---------------------------------------------------------------------------
// Deterministic and statistical check drivers.

enum class VerifyLevel { Fast, Full };

/// Injection points for mutation-style self-tests: a deliberately broken
/// gradient must make the finite-difference check fail.
struct VerifyHooks {
    std::function<std::vector<double>(const ObjectiveContext&, const std::vector<double>&)>
        gradient;
};

namespace detail {

inline std::vector<double> uniform_theta(int count, Rng& rng) {
    std::vector<double> t(static_cast<std::size_t>(count));
    for (double& v : t) v = rng.uniform(0.0, 2.0 * M_PI);
    return t;
}

// Ansatz circuits against dense matrix products, small sizes.
inline StatCheckReport engine_oracle_check(std::uint64_t seed) {
    StatCheckReport rep;
    rep.quantity = "engine_oracle";
    rep.bound = 1e-10;
    rep.seed = seed;
    double worst = 0.0;
    std::size_t cases = 0;
    for (int n = 2; n <= 5; ++n) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(n)}));
        const CircuitStructure s = build_structure(n, 2 * n);
        const GateEngine eng(s);
        const std::size_t d = s.dim();
        const std::vector<double> theta = uniform_theta(s.param_count, rng);
        const CMat dense = dense_ansatz(s, theta);

        StateBatch b = StateBatch::basis(d, 0, d);
        Scratch scr(d);
        eng.apply_ansatz(theta, b, scr, Direction::Forward);
        for (std::size_t k = 0; k < b.data.size(); ++k)
            worst = std::max(worst, std::abs(b.data[k] - dense.a[k]));
        ++cases;
    }
    rep.samples = cases;
    rep.empirical = worst;
    rep.pass = worst <= rep.bound;
    return rep;
}

// Analytic gradient against central finite differences of the sketched
// objective; the gradient callable is injectable for mutation tests.
inline StatCheckReport gradient_fd_check(std::uint64_t seed, const VerifyHooks& hooks) {
    const auto grad_fn = hooks.gradient
                             ? hooks.gradient
                             : [](const ObjectiveContext& ctx, const std::vector<double>& th) {
                                   return gradient_sketched(ctx, th);
                               };
    StatCheckReport rep;
    rep.quantity = "gradient_fd";
    rep.bound = 1e-6;
    rep.seed = seed;
    double worst = 0.0;
    std::size_t cases = 0;
    for (int n = 2; n <= 4; ++n) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(n)}));
        const CircuitStructure s = build_structure(n, n);
        const GateEngine eng(s);
        const std::size_t d = s.dim();
        const std::vector<double> theta_u = uniform_theta(s.param_count, rng);
        std::vector<double> theta = uniform_theta(s.param_count, rng);

        const SketchOperator sk = sample_normalized_sketch(
            d, std::min<std::size_t>(d, 3), derive_seed(seed, {static_cast<std::uint64_t>(n), 1}));
        const ObjectiveContext ctx(eng, theta_u, sk);
        const std::vector<double> g = grad_fn(ctx, theta);

        std::vector<double> fd(theta.size());
        const double h = 1e-5;
        double fd_max = 0.0;
        for (std::size_t k = 0; k < theta.size(); ++k) {
            const double orig = theta[k];
            theta[k] = orig + h;
            const double fp = objective_sketched(ctx, theta);
            theta[k] = orig - h;
            const double fm = objective_sketched(ctx, theta);
            theta[k] = orig;
            fd[k] = (fp - fm) / (2.0 * h);
            fd_max = std::max(fd_max, std::abs(fd[k]));
        }
        for (std::size_t k = 0; k < theta.size(); ++k) {
            const double denom = std::max({std::abs(fd[k]), 1e-3 * fd_max, 1e-12});
            worst = std::max(worst, std::abs(g[k] - fd[k]) / denom);
        }
        ++cases;
    }
    rep.samples = cases;
    rep.empirical = worst;
    rep.pass = worst <= rep.bound;
    return rep;
}

// (1/2m) ||(V-U) Q Q^dagger||_F^2 = 1 - (1/m) Re <VQ, UQ>: dense left side
// against the engine-computed right side for orthonormal sketches.
inline StatCheckReport projection_identity_check(std::uint64_t seed) {
    StatCheckReport rep;
    rep.quantity = "projection_identity";
    rep.bound = 1e-9;
    rep.seed = seed;
    double worst = 0.0;
    std::size_t cases = 0;
    for (int n = 2; n <= 4; ++n) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(n)}));
        const CircuitStructure s = build_structure(n, n);
        const GateEngine eng(s);
        const std::size_t d = s.dim();
        const std::size_t m = std::min<std::size_t>(d, static_cast<std::size_t>(3 + n));
        const std::vector<double> theta_u = uniform_theta(s.param_count, rng);
        const std::vector<double> theta = uniform_theta(s.param_count, rng);

        SketchOperator q;
        q.kind = SketchKind::Orthonormal;
        q.columns =
            householder_qr(
                sample_gaussian(d, m, derive_seed(seed, {static_cast<std::uint64_t>(n), 1})))
                .q;

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
        worst = std::max(worst, std::abs(lhs - rhs));
        ++cases;
    }
    rep.samples = cases;
    rep.empirical = worst;
    rep.pass = worst <= rep.bound;
    return rep;
}

// Exercises the worst-case construction end to end; adversarial_unitary
// re-checks its own identities, so any drift surfaces as a throw here.
inline StatCheckReport adversarial_check(std::uint64_t seed) {
    StatCheckReport rep;
    rep.quantity = "adversarial_unitary";
    rep.bound = 1e-8;
    rep.seed = seed;
    double worst = 0.0;
    const std::pair<std::size_t, std::size_t> cases[3] = {{4, 4}, {8, 2}, {16, 8}};
    std::size_t idx = 0;
    for (const auto& [d, m] : cases) {
        const CMat u = haar_unitary(d, derive_seed(seed, {idx, 1}));
        Rng rng(derive_seed(seed, {idx, 2}));
        CMat xs(d, m);
        fill_gaussian(xs, rng);
        xs = normalize_columns(std::move(xs), rng).columns;
        const CMat vp = adversarial_unitary(u, xs);
        const double target = 2.0 * static_cast<double>(m) - static_cast<double>(d);
        worst = std::max(worst, std::abs(trace_inner(vp, u) - cplx{target, 0.0}));
        ++idx;
    }
    rep.samples = idx;
    rep.empirical = worst;
    rep.pass = worst <= rep.bound;
    return rep;
}

}  // namespace detail

/// Runs the self-check battery. Fast covers the deterministic identities
/// (seconds); Full adds the Monte-Carlo bound checks (about a minute).
/// Reports come back in a fixed order and are reproducible given the seed.
inline std::vector<StatCheckReport> run_verification(VerifyLevel level, std::uint64_t seed,
                                                     const VerifyHooks& hooks = {}) {
    std::vector<StatCheckReport> reps;
    reps.push_back(detail::engine_oracle_check(derive_seed(seed, {1})));
    reps.push_back(detail::gradient_fd_check(derive_seed(seed, {2}), hooks));
    reps.push_back(detail::projection_identity_check(derive_seed(seed, {3})));
    reps.push_back(detail::adversarial_check(derive_seed(seed, {4})));
    if (level == VerifyLevel::Fast) return reps;

    {
        StatCheckReport r = check_ratio_variance(std::vector<double>(8, 1.0), 20000,
                                                 derive_seed(seed, {5}));
        r.quantity += "[constant]";
        reps.push_back(std::move(r));
    }
    {
        std::vector<double> e1(4, 0.0);
        e1[0] = 1.0;
        StatCheckReport r = check_ratio_variance(e1, 20000, derive_seed(seed, {6}));
        r.quantity += "[basis]";
        reps.push_back(std::move(r));
    }
    {
        Rng rng(derive_seed(seed, {7}));
        std::vector<double> a(16);
        for (double& v : a) v = 2.0 * rng.uniform01() - 1.0;
        StatCheckReport r = check_ratio_variance(a, 20000, derive_seed(seed, {8}));
        r.quantity += "[random]";
        reps.push_back(std::move(r));
    }
    {
        Rng rng(derive_seed(seed, {9}));
        const CircuitStructure s = build_structure(4, 8);
        const GateEngine eng(s);
        const std::vector<double> tu = detail::uniform_theta(s.param_count, rng);
        StatCheckReport r = check_unit_batch_variance(eng, tu, tu, 20000, derive_seed(seed, {10}));
        r.quantity += "[coincident]";
        reps.push_back(std::move(r));
    }
    {
        Rng rng(derive_seed(seed, {11}));
        const CircuitStructure s = build_structure(4, 8);
        const GateEngine eng(s);
        const std::vector<double> tv = detail::uniform_theta(s.param_count, rng);
        const std::vector<double> tu = detail::uniform_theta(s.param_count, rng);
        StatCheckReport r =
            check_unit_batch_variance(eng, tv, tu, 100000, derive_seed(seed, {12}));
        r.quantity += "[n4]";
        reps.push_back(std::move(r));
    }
    {
        Rng rng(derive_seed(seed, {13}));
        const CircuitStructure s = build_structure(6, 12);
        const GateEngine eng(s);
        const std::vector<double> tv = detail::uniform_theta(s.param_count, rng);
        const std::vector<double> tu = detail::uniform_theta(s.param_count, rng);
        StatCheckReport r = check_unit_batch_variance(eng, tv, tu, 50000, derive_seed(seed, {14}));
        r.quantity += "[n6]";
        reps.push_back(std::move(r));
    }
    {
        Rng rng(derive_seed(seed, {15}));
        const CircuitStructure s = build_structure(4, 4);
        const GateEngine eng(s);
        const std::vector<double> tv = detail::uniform_theta(s.param_count, rng);
        const std::vector<double> tu = detail::uniform_theta(s.param_count, rng);
        StatCheckReport rm =
            check_gradient_noise(eng, tv, tu, 4, 10000, derive_seed(seed, {16}));
        rm.quantity += "[m4]";
        StatCheckReport r2m =
            check_gradient_noise(eng, tv, tu, 8, 10000, derive_seed(seed, {17}));
        r2m.quantity += "[m8]";

        // Doubling the sketch width should halve the deviation (1/m scaling).
        StatCheckReport scale;
        scale.quantity = "gradient_noise_scaling";
        scale.samples = rm.samples + r2m.samples;
        scale.empirical = rm.empirical / r2m.empirical;
        scale.bound = 2.0;
        scale.two_sided = true;
        const double rel =
            std::sqrt(std::pow(rm.std_error / rm.empirical, 2.0) +
                      std::pow(r2m.std_error / r2m.empirical, 2.0));
        scale.std_error = scale.empirical * rel;
        scale.seed = derive_seed(seed, {16});
        scale.pass = std::abs(scale.empirical - 2.0) <= 0.4 + 3.0 * scale.std_error;

        reps.push_back(std::move(rm));
        reps.push_back(std::move(r2m));
        reps.push_back(std::move(scale));
    }
    {
        Rng rng(derive_seed(seed, {18}));
        const CircuitStructure s = build_structure(6, 8);
        const GateEngine eng(s);
        const std::vector<double> tv = detail::uniform_theta(s.param_count, rng);
        const std::vector<double> tu = detail::uniform_theta(s.param_count, rng);
        StatCheckReport r =
            check_gradient_noise(eng, tv, tu, 8, 5000, derive_seed(seed, {19}));
        r.quantity += "[n6]";
        reps.push_back(std::move(r));
    }
    {
        StatCheckReport r = check_haar_concentration(1, 10000, derive_seed(seed, {20}));
        r.quantity += "[d1]";
        reps.push_back(std::move(r));
    }
    {
        StatCheckReport r = check_haar_concentration(64, 20000, derive_seed(seed, {21}));
        r.quantity += "[d64]";
        reps.push_back(std::move(r));
    }
    return reps;
}

}  // namespace aqc
