#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace aqc {

struct LbfgsConfig {
    int history = 10;
    int max_iters = 1000;
    double grad_tol = 1e-8;  // on the gradient 2-norm
    double f_tol = 1e-12;    // objective change relative to max(1, |f|)
    double c1 = 1e-4;
    double c2 = 0.9;
    int max_line_search = 40;  // objective/gradient evaluations per search
};

enum class LbfgsStatus { GradTol, FTol, MaxIters, LineSearchFail, NonFinite };

inline const char* to_string(LbfgsStatus s) {
    switch (s) {
        case LbfgsStatus::GradTol: return "grad_tol";
        case LbfgsStatus::FTol: return "f_tol";
        case LbfgsStatus::MaxIters: return "max_iters";
        case LbfgsStatus::LineSearchFail: return "line_search_failure";
        case LbfgsStatus::NonFinite: return "non_finite";
    }
    return "unknown";
}

struct LbfgsResult {
    std::vector<double> theta;
    double f = 0.0;
    std::vector<double> grad;
    int iterations = 0;  // accepted steps
    int line_search_failures = 0;
    LbfgsStatus status = LbfgsStatus::MaxIters;
    std::vector<double> trace;  // accepted objective values, starting at theta_0
};

namespace detail {

inline double vdot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double vnorm(const std::vector<double>& a) { return std::sqrt(vdot(a, a)); }

}  // namespace detail

/// Limited-memory BFGS with a strong-Wolfe line search (bracket then
/// bisection zoom). fg(theta, grad_out) returns the objective and fills the
/// gradient; it must be deterministic during one solve. Accepted objective
/// values decrease monotonically. A failed line search restarts once along
/// steepest descent; a second consecutive failure stops the solve.
template <class FG>
LbfgsResult lbfgs_minimize(FG&& fg, std::vector<double> theta0, const LbfgsConfig& cfg) {
    const std::size_t dim = theta0.size();
    LbfgsResult res;
    res.theta = std::move(theta0);
    res.grad.assign(dim, 0.0);
    res.f = fg(res.theta, res.grad);
    res.trace.push_back(res.f);
    if (!std::isfinite(res.f) || !std::all_of(res.grad.begin(), res.grad.end(),
                                              [](double v) { return std::isfinite(v); })) {
        res.status = LbfgsStatus::NonFinite;
        return res;
    }
    if (detail::vnorm(res.grad) <= cfg.grad_tol) {
        res.status = LbfgsStatus::GradTol;
        return res;
    }

    struct Pair {
        std::vector<double> s, y;
        double rho;
    };
    std::deque<Pair> hist;

    std::vector<double> p(dim), x_try(dim), g_try(dim), q(dim), alpha_buf;
    double f_try = 0.0;

    // Evaluates theta + a*p into the _try buffers; returns the directional
    // derivative there, or NaN on a non-finite value.
    const auto eval_at = [&](double a, int& evals) -> double {
        for (std::size_t i = 0; i < dim; ++i) x_try[i] = res.theta[i] + a * p[i];
        f_try = fg(x_try, g_try);
        ++evals;
        if (!std::isfinite(f_try)) return std::numeric_limits<double>::quiet_NaN();
        double dd = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            if (!std::isfinite(g_try[i])) return std::numeric_limits<double>::quiet_NaN();
            dd += g_try[i] * p[i];
        }
        return dd;
    };

    // Strong-Wolfe search along p from the current point. On success the
    // accepted point sits in the _try buffers and the step length is returned;
    // on failure returns 0.
    const auto wolfe_search = [&](double a_init) -> double {
        const double phi0 = res.f;
        const double dphi0 = detail::vdot(res.grad, p);
        if (!(dphi0 < 0.0)) return 0.0;
        int evals = 0;

        const auto zoom = [&](double lo, double phi_lo, double hi) -> double {
            while (evals < cfg.max_line_search) {
                const double a = 0.5 * (lo + hi);
                const double dphi = eval_at(a, evals);
                const bool bad = std::isnan(dphi);
                if (bad || f_try > phi0 + cfg.c1 * a * dphi0 || f_try >= phi_lo) {
                    hi = a;
                    continue;
                }
                if (std::abs(dphi) <= -cfg.c2 * dphi0) return a;
                if (dphi * (hi - lo) >= 0.0) hi = lo;
                lo = a;
                phi_lo = f_try;
            }
            return 0.0;
        };

        double a_prev = 0.0, phi_prev = phi0;
        double a = a_init;
        for (int it = 0; evals < cfg.max_line_search; ++it) {
            const double dphi = eval_at(a, evals);
            const bool bad = std::isnan(dphi);
            if (bad || f_try > phi0 + cfg.c1 * a * dphi0 || (it > 0 && f_try >= phi_prev))
                return zoom(a_prev, phi_prev, a);
            if (std::abs(dphi) <= -cfg.c2 * dphi0) return a;
            if (dphi >= 0.0) return zoom(a, f_try, a_prev);
            a_prev = a;
            phi_prev = f_try;
            a *= 2.0;
        }
        return 0.0;
    };

    bool prev_search_failed = false;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        // Two-loop recursion: p = -H g, H seeded with the curvature scale.
        q = res.grad;
        alpha_buf.assign(hist.size(), 0.0);
        for (std::size_t i = hist.size(); i-- > 0;) {
            const Pair& h = hist[i];
            alpha_buf[i] = h.rho * detail::vdot(h.s, q);
            for (std::size_t k = 0; k < dim; ++k) q[k] -= alpha_buf[i] * h.y[k];
        }
        double gamma = 1.0;
        if (!hist.empty()) {
            const Pair& h = hist.back();
            gamma = detail::vdot(h.s, h.y) / detail::vdot(h.y, h.y);
        }
        for (std::size_t k = 0; k < dim; ++k) q[k] *= gamma;
        for (std::size_t i = 0; i < hist.size(); ++i) {
            const Pair& h = hist[i];
            const double beta = h.rho * detail::vdot(h.y, q);
            for (std::size_t k = 0; k < dim; ++k) q[k] += h.s[k] * (alpha_buf[i] - beta);
        }
        for (std::size_t k = 0; k < dim; ++k) p[k] = -q[k];

        if (detail::vdot(p, res.grad) >= 0.0) {  // degenerate history: fall back
            hist.clear();
            for (std::size_t k = 0; k < dim; ++k) p[k] = -res.grad[k];
        }

        const double gnorm = detail::vnorm(res.grad);
        double a = hist.empty() ? std::min(1.0, 1.0 / gnorm) : 1.0;
        double step = wolfe_search(a);
        if (step == 0.0) {
            ++res.line_search_failures;
            if (prev_search_failed) {
                res.status = LbfgsStatus::LineSearchFail;
                return res;
            }
            prev_search_failed = true;
            hist.clear();
            for (std::size_t k = 0; k < dim; ++k) p[k] = -res.grad[k];
            step = wolfe_search(std::min(1.0, 1.0 / gnorm));
            if (step == 0.0) {
                ++res.line_search_failures;
                res.status = LbfgsStatus::LineSearchFail;
                return res;
            }
        }
        prev_search_failed = false;

        Pair pair;
        pair.s.resize(dim);
        pair.y.resize(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            pair.s[k] = x_try[k] - res.theta[k];
            pair.y[k] = g_try[k] - res.grad[k];
        }
        const double f_change = res.f - f_try;
        res.theta = x_try;
        res.f = f_try;
        res.grad = g_try;
        res.trace.push_back(res.f);
        ++res.iterations;

        if (detail::vnorm(res.grad) <= cfg.grad_tol) {
            res.status = LbfgsStatus::GradTol;
            return res;
        }
        if (f_change <= cfg.f_tol * std::max(1.0, std::abs(res.f))) {
            res.status = LbfgsStatus::FTol;
            return res;
        }

        const double sy = detail::vdot(pair.s, pair.y);
        if (sy > 1e-10 * detail::vnorm(pair.s) * detail::vnorm(pair.y)) {
            pair.rho = 1.0 / sy;
            hist.push_back(std::move(pair));
            if (static_cast<int>(hist.size()) > cfg.history) hist.pop_front();
        }
    }
    res.status = LbfgsStatus::MaxIters;
    return res;
}

}  // namespace aqc
