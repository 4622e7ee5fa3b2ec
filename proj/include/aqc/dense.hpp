#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aqc/circuit.hpp"
#include "aqc/engine.hpp"
#include "aqc/state.hpp"

// Dense complex matrices for verification-scale work only (d <= 256): the
// Kronecker-product oracles the engine is tested against, and the appendix
// constructions. The optimization path never touches these.

namespace aqc {

struct CMat {
    std::size_t rows = 0, cols = 0;
    std::vector<cplx> a;  // column-major

    CMat() = default;
    CMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, cplx{0.0, 0.0}) {}

    cplx& at(std::size_t i, std::size_t j) { return a[j * rows + i]; }
    const cplx& at(std::size_t i, std::size_t j) const { return a[j * rows + i]; }

    static CMat identity(std::size_t k) {
        CMat m(k, k);
        for (std::size_t i = 0; i < k; ++i) m.at(i, i) = cplx{1.0, 0.0};
        return m;
    }
};

inline CMat matmul(const CMat& A, const CMat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("matmul: shape mismatch");
    CMat C(A.rows, B.cols);
    for (std::size_t j = 0; j < B.cols; ++j)
        for (std::size_t k = 0; k < A.cols; ++k) {
            const cplx b = B.at(k, j);
            if (b == cplx{0.0, 0.0}) continue;
            for (std::size_t i = 0; i < A.rows; ++i) C.at(i, j) += A.at(i, k) * b;
        }
    return C;
}

inline CMat adjoint(const CMat& A) {
    CMat B(A.cols, A.rows);
    for (std::size_t j = 0; j < A.cols; ++j)
        for (std::size_t i = 0; i < A.rows; ++i) B.at(j, i) = std::conj(A.at(i, j));
    return B;
}

inline CMat kron(const CMat& A, const CMat& B) {
    CMat C(A.rows * B.rows, A.cols * B.cols);
    for (std::size_t ja = 0; ja < A.cols; ++ja)
        for (std::size_t ia = 0; ia < A.rows; ++ia) {
            const cplx v = A.at(ia, ja);
            if (v == cplx{0.0, 0.0}) continue;
            for (std::size_t jb = 0; jb < B.cols; ++jb)
                for (std::size_t ib = 0; ib < B.rows; ++ib)
                    C.at(ia * B.rows + ib, ja * B.cols + jb) = v * B.at(ib, jb);
        }
    return C;
}

/// <A, B> = Tr(A^dagger B)
inline cplx trace_inner(const CMat& A, const CMat& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("trace_inner: shape mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t k = 0; k < A.a.size(); ++k) s += std::conj(A.a[k]) * B.a[k];
    return s;
}

inline double fro_norm(const CMat& A) {
    double s = 0.0;
    for (const cplx& v : A.a) s += std::norm(v);
    return std::sqrt(s);
}

inline std::vector<cplx> matvec(const CMat& A, const std::vector<cplx>& x) {
    if (A.cols != x.size()) throw std::invalid_argument("matvec: shape mismatch");
    std::vector<cplx> y(A.rows, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < A.cols; ++j) {
        const cplx v = x[j];
        for (std::size_t i = 0; i < A.rows; ++i) y[i] += A.at(i, j) * v;
    }
    return y;
}

inline CMat mat2_to_cmat(const Mat2& m) {
    CMat c(2, 2);
    c.at(0, 0) = m[0];
    c.at(0, 1) = m[1];
    c.at(1, 0) = m[2];
    c.at(1, 1) = m[3];
    return c;
}

/// kron over qubit positions 1..n of per-qubit 2x2 factors (qubit 1 most
/// significant, so it is the leftmost factor).
inline CMat kron_chain(int n, const std::vector<std::pair<int, CMat>>& factors) {
    CMat m = CMat::identity(1);
    for (int q = 1; q <= n; ++q) {
        const CMat* f = nullptr;
        for (const auto& [fq, fm] : factors)
            if (fq == q) f = &fm;
        m = f ? kron(m, *f) : kron(m, CMat::identity(2));
    }
    return m;
}

inline CMat dense_rotation(int n, Axis axis, double angle, int qubit) {
    return kron_chain(n, {{qubit, mat2_to_cmat(rotation_mat2(axis, angle))}});
}

inline CMat dense_pauli(int n, Axis axis, int qubit) {
    return kron_chain(n, {{qubit, mat2_to_cmat(pauli_mat2(axis))}});
}

/// CNOT = P0_c (x) I + P1_c (x) X_t, built from projector Kronecker chains.
inline CMat dense_cnot(int n, int control, int target) {
    CMat p0(2, 2), p1(2, 2);
    p0.at(0, 0) = cplx{1.0, 0.0};
    p1.at(1, 1) = cplx{1.0, 0.0};
    const CMat term0 = kron_chain(n, {{control, p0}});
    const CMat term1 = kron_chain(n, {{control, p1}, {target, mat2_to_cmat(pauli_mat2(Axis::X))}});
    CMat m(term0.rows, term0.cols);
    for (std::size_t k = 0; k < m.a.size(); ++k) m.a[k] = term0.a[k] + term1.a[k];
    return m;
}

inline CMat dense_gate(int n, const GateSpec& g, const std::vector<double>& theta) {
    if (g.kind == GateKind::Cnot) return dense_cnot(n, g.qubit, g.qubit2);
    return dense_rotation(n, rotation_axis(g.kind), theta[static_cast<std::size_t>(g.param_slot)], g.qubit);
}

/// Explicit product of the dense gate matrices in schedule order (first gate
/// applied first): V = G_p ... G_1.
inline CMat dense_ansatz(const CircuitStructure& s, const std::vector<double>& theta) {
    const std::size_t d = s.dim();
    if (d > 256) throw std::invalid_argument("dense_ansatz: verification oracle capped at d <= 256");
    CMat v = CMat::identity(d);
    for (const GateSpec& g : s.gates) v = matmul(dense_gate(s.n, g, theta), v);
    return v;
}

}  // namespace aqc
