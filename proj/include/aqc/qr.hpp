#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "aqc/dense.hpp"

// Complex Householder QR on tall column-major blocks. Thin Q (d x m) is what
// the sketch projection needs; full accumulation (d x d) exists for the
// random-unitary sampler. Memory stays O(d x m) plus the reflector stack.

namespace aqc {

struct QrResult {
    CMat q;  // d x m, or d x d when fully accumulated
    CMat r;  // m x m upper triangular
    double min_pivot = std::numeric_limits<double>::infinity();  // smallest eliminated-column norm
};

namespace detail {

struct Reflector {
    std::size_t offset = 0;
    std::vector<cplx> v;
    double beta = 0.0;  // 2 / ||v||^2; zero disables the reflector
};

inline void reflect_columns(const Reflector& h, CMat& x, std::size_t j0) {
    if (h.beta == 0.0) return;
    const std::size_t len = h.v.size();
    for (std::size_t j = j0; j < x.cols; ++j) {
        cplx* col = &x.at(h.offset, j);
        cplx s{0.0, 0.0};
        for (std::size_t i = 0; i < len; ++i) s += std::conj(h.v[i]) * col[i];
        s *= h.beta;
        for (std::size_t i = 0; i < len; ++i) col[i] -= s * h.v[i];
    }
}

}  // namespace detail

inline QrResult householder_qr(CMat a, bool full_q = false) {
    const std::size_t d = a.rows, m = a.cols;
    if (m < 1 || m > d) throw std::invalid_argument("householder_qr: need 1 <= cols <= rows");

    std::vector<detail::Reflector> hs;
    hs.reserve(m);
    QrResult res;

    for (std::size_t k = 0; k < m; ++k) {
        double xnorm2 = 0.0;
        for (std::size_t i = k; i < d; ++i) xnorm2 += std::norm(a.at(i, k));
        const double xnorm = std::sqrt(xnorm2);
        res.min_pivot = std::min(res.min_pivot, xnorm);

        // alpha = -phase(x0) * ||x||, so v = x - alpha e1 never cancels.
        const cplx x0 = a.at(k, k);
        const double ax0 = std::abs(x0);
        const cplx phase = ax0 > 0.0 ? x0 / ax0 : cplx{1.0, 0.0};
        const cplx alpha = -phase * xnorm;

        detail::Reflector h;
        h.offset = k;
        h.v.resize(d - k);
        for (std::size_t i = k; i < d; ++i) h.v[i - k] = a.at(i, k);
        h.v[0] -= alpha;
        double vnorm2 = 0.0;
        for (const cplx& v : h.v) vnorm2 += std::norm(v);
        if (vnorm2 > 0.0) h.beta = 2.0 / vnorm2;

        detail::reflect_columns(h, a, k + 1);
        a.at(k, k) = alpha;
        for (std::size_t i = k + 1; i < d; ++i) a.at(i, k) = cplx{0.0, 0.0};
        hs.push_back(std::move(h));
    }

    res.r = CMat(m, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i <= j; ++i) res.r.at(i, j) = a.at(i, j);

    const std::size_t qcols = full_q ? d : m;
    res.q = CMat(d, qcols);
    for (std::size_t j = 0; j < qcols; ++j) res.q.at(j, j) = cplx{1.0, 0.0};
    for (std::size_t k = m; k-- > 0;) detail::reflect_columns(hs[k], res.q, 0);
    return res;
}

}  // namespace aqc
