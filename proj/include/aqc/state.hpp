#pragma once

#include <algorithm>
#include <cassert>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace aqc {

using cplx = std::complex<double>;

/// A d x m block of complex amplitudes, column-major; each column is one
/// statevector. This is the unit of all matrix-vector computation.
struct StateBatch {
    std::size_t dim = 0;
    std::size_t cols = 0;
    std::vector<cplx> data;  // data[j*dim + i]

    StateBatch() = default;
    StateBatch(std::size_t d, std::size_t m) : dim(d), cols(m), data(d * m, cplx{0.0, 0.0}) {}

    cplx* col(std::size_t j) { return data.data() + j * dim; }
    const cplx* col(std::size_t j) const { return data.data() + j * dim; }

    /// Batch of computational basis columns e_{j0}, ..., e_{j0+m-1}.
    static StateBatch basis(std::size_t d, std::size_t j0, std::size_t m) {
        StateBatch b(d, m);
        for (std::size_t j = 0; j < m; ++j) b.data[j * d + (j0 + j)] = cplx{1.0, 0.0};
        return b;
    }
};

inline double col_norm(const cplx* x, std::size_t d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += std::norm(x[i]);
    return std::sqrt(s);
}

/// <x, y> = sum_i conj(x_i) y_i
inline cplx col_dot(const cplx* x, const cplx* y, std::size_t d) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < d; ++i) s += std::conj(x[i]) * y[i];
    return s;
}

/// A cached bijection on [0, d): perm maps source position to destination
/// position; inv is its inverse.
struct PermutationPlan {
    std::vector<std::uint32_t> perm;
    std::vector<std::uint32_t> inv;

    std::size_t size() const { return perm.size(); }

    static PermutationPlan from_perm(std::vector<std::uint32_t> p) {
        PermutationPlan plan;
        plan.inv.resize(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) plan.inv[p[i]] = static_cast<std::uint32_t>(i);
        plan.perm = std::move(p);
        return plan;
    }

    bool is_bijection() const {
        std::vector<std::uint32_t> s = perm;
        std::sort(s.begin(), s.end());
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] != i) return false;
        return true;
    }

    /// y[perm[i]] = x[i], via scratch.
    void apply(cplx* x, cplx* scratch) const {
        const std::size_t d = perm.size();
        for (std::size_t i = 0; i < d; ++i) scratch[perm[i]] = x[i];
        std::copy(scratch, scratch + d, x);
    }
};

/// Moves the bit of qubit q (1-based, qubit 1 most significant) to the least
/// significant position, keeping the relative order of the other bits. After
/// this permutation the two amplitudes of qubit q sit in adjacent pairs
/// (2j, 2j+1), which is the (2, 2^{n-1}) column-wise reshape.
inline PermutationPlan make_qubit_plan(int n, int q) {
    if (q < 1 || q > n) throw std::invalid_argument("make_qubit_plan: qubit index out of range");
    const std::size_t d = std::size_t{1} << n;
    const int bp = n - q;  // bit position from LSB
    std::vector<std::uint32_t> p(d);
    const std::uint64_t low_mask = (std::uint64_t{1} << bp) - 1;
    for (std::uint64_t i = 0; i < d; ++i) {
        const std::uint64_t b = (i >> bp) & 1u;
        const std::uint64_t rest = ((i >> (bp + 1)) << bp) | (i & low_mask);
        p[i] = static_cast<std::uint32_t>((rest << 1) | b);
    }
    return PermutationPlan::from_perm(std::move(p));
}

/// CNOT as a single cached permutation: conjugating the swap of the 3rd/4th
/// rows of the (4, 2^{n-2}) reshape by the qubit-reordering permutation
/// collapses to "flip the target bit wherever the control bit is set".
inline PermutationPlan make_cnot_plan(int n, int control, int target) {
    if (control == target) throw std::invalid_argument("make_cnot_plan: control == target");
    if (control < 1 || control > n || target < 1 || target > n)
        throw std::invalid_argument("make_cnot_plan: qubit index out of range");
    const std::size_t d = std::size_t{1} << n;
    const std::uint64_t cbit = std::uint64_t{1} << (n - control);
    const std::uint64_t tbit = std::uint64_t{1} << (n - target);
    std::vector<std::uint32_t> p(d);
    for (std::uint64_t i = 0; i < d; ++i)
        p[i] = static_cast<std::uint32_t>((i & cbit) ? (i ^ tbit) : i);
    return PermutationPlan::from_perm(std::move(p));
}

}  // namespace aqc
