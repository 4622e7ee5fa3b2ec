#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "aqc/dense.hpp"
#include "aqc/engine.hpp"
#include "aqc/qr.hpp"
#include "aqc/rng.hpp"
#include "aqc/state.hpp"

namespace aqc {

enum class SketchKind { NormalizedGaussian, Orthonormal, Full };

/// A set of sketch columns the objective is restricted to. Full means the
/// whole computational basis (columns are implicit, never stored).
struct SketchOperator {
    SketchKind kind = SketchKind::Full;
    CMat columns;  // d x m, column-major; empty for Full
    std::uint64_t seed = 0;
    bool qr_fallback = false;   // rank-deficient difference block; orthonormalized raw Gaussian instead
    int resampled_columns = 0;  // zero-column guard hits during normalization

    std::size_t width(std::size_t d) const { return kind == SketchKind::Full ? d : columns.cols; }
};

inline void fill_gaussian(CMat& g, Rng& rng) {
    for (cplx& v : g.a) v = cplx{rng.normal(), rng.normal()};
}

/// d x m with entries a + bi, a and b i.i.d. standard normal.
inline CMat sample_gaussian(std::size_t d, std::size_t m, std::uint64_t seed) {
    if (m < 1 || m > d) throw std::invalid_argument("sample_gaussian: need 1 <= m <= d");
    Rng rng(seed);
    CMat g(d, m);
    fill_gaussian(g, rng);
    return g;
}

/// Scales every column to unit norm (uniform directions on the complex
/// sphere). A zero column — a probability-zero event — is resampled from
/// `rng` and counted on the returned operator.
inline SketchOperator normalize_columns(CMat omega, Rng& rng) {
    SketchOperator s;
    s.kind = SketchKind::NormalizedGaussian;
    for (std::size_t j = 0; j < omega.cols; ++j) {
        cplx* col = &omega.at(0, j);
        double nm = col_norm(col, omega.rows);
        while (nm == 0.0) {
            for (std::size_t i = 0; i < omega.rows; ++i) col[i] = cplx{rng.normal(), rng.normal()};
            nm = col_norm(col, omega.rows);
            ++s.resampled_columns;
        }
        for (std::size_t i = 0; i < omega.rows; ++i) col[i] /= nm;
    }
    s.columns = std::move(omega);
    return s;
}

/// Gaussian draw plus column normalization from one seeded stream.
inline SketchOperator sample_normalized_sketch(std::size_t d, std::size_t m, std::uint64_t seed) {
    if (m < 1 || m > d) throw std::invalid_argument("sample_normalized_sketch: need 1 <= m <= d");
    Rng rng(seed);
    CMat g(d, m);
    fill_gaussian(g, rng);
    SketchOperator s = normalize_columns(std::move(g), rng);
    s.seed = seed;
    return s;
}

/// Orthonormal basis for the range of B = V(theta_0)^dagger Omega -
/// U(theta_u)^dagger Omega, where both terms are adjoint circuit sweeps over
/// the sketch columns; no d x d matrix is ever formed. A numerically
/// rank-deficient B (theta_0 near theta_u: the difference block vanishes)
/// falls back to orthonormalizing Omega itself and flags the operator.
inline SketchOperator qr_sketch(const GateEngine& eng, const std::vector<double>& theta_0,
                                const std::vector<double>& theta_u, const CMat& omega) {
    const std::size_t d = eng.dim();
    const std::size_t m = omega.cols;
    if (omega.rows != d) throw std::invalid_argument("qr_sketch: sketch row count != state dimension");
    if (m < 1 || m > d) throw std::invalid_argument("qr_sketch: need 1 <= m <= d");

    Scratch scr(d);
    StateBatch vb(d, m);
    vb.data = omega.a;
    StateBatch ub = vb;
    eng.apply_ansatz(theta_0, vb, scr, Direction::Adjoint);
    eng.apply_ansatz(theta_u, ub, scr, Direction::Adjoint);

    CMat b(d, m);
    for (std::size_t k = 0; k < b.a.size(); ++k) b.a[k] = vb.data[k] - ub.data[k];

    SketchOperator s;
    s.kind = SketchKind::Orthonormal;
    QrResult qr = householder_qr(std::move(b));
    if (qr.min_pivot < 1e-12) {
        s.qr_fallback = true;
        s.columns = householder_qr(omega).q;
    } else {
        s.columns = std::move(qr.q);
    }
    return s;
}

/// Uniformly (Haar) distributed d x d unitary: QR of a complex Gaussian with
/// the column phases fixed so the triangular factor's diagonal is real
/// positive. Dense verification work only.
inline CMat haar_unitary(std::size_t d, std::uint64_t seed) {
    if (d < 1 || d > 256) throw std::invalid_argument("haar_unitary: dimension capped at 256");
    Rng rng(seed);
    CMat g(d, d);
    fill_gaussian(g, rng);
    QrResult qr = householder_qr(std::move(g), /*full_q=*/true);
    for (std::size_t j = 0; j < d; ++j) {
        const cplx rjj = qr.r.at(j, j);
        const double a = std::abs(rjj);
        const cplx phase = a > 0.0 ? rjj / a : cplx{1.0, 0.0};
        for (std::size_t i = 0; i < d; ++i) qr.q.at(i, j) *= phase;
    }
    return qr.q;
}

}  // namespace aqc
