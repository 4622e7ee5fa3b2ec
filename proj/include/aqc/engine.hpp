#pragma once

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "aqc/circuit.hpp"
#include "aqc/state.hpp"

namespace aqc {

using Mat2 = std::array<cplx, 4>;  // row-major [m00 m01; m10 m11]

/// Rotation conventions:
///   Rz(t) = diag(e^{-it/2}, e^{it/2})
///   Ry(t) = [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]]
///   Rx(t) = [[cos(t/2), -i sin(t/2)], [-i sin(t/2), cos(t/2)]]
/// All three satisfy d/dt R = -(i/2) * sigma * R, which the gradient sweep
/// relies on; R(t)^dagger = R(-t).
inline Mat2 rotation_mat2(Axis axis, double angle) {
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    switch (axis) {
        case Axis::X: return {cplx{c, 0}, cplx{0, -s}, cplx{0, -s}, cplx{c, 0}};
        case Axis::Y: return {cplx{c, 0}, cplx{-s, 0}, cplx{s, 0}, cplx{c, 0}};
        case Axis::Z: return {cplx{c, -s}, cplx{0, 0}, cplx{0, 0}, cplx{c, s}};
    }
    throw std::logic_error("rotation_mat2: bad axis");
}

inline Mat2 pauli_mat2(Axis axis) {
    switch (axis) {
        case Axis::X: return {cplx{0, 0}, cplx{1, 0}, cplx{1, 0}, cplx{0, 0}};
        case Axis::Y: return {cplx{0, 0}, cplx{0, -1}, cplx{0, 1}, cplx{0, 0}};
        case Axis::Z: return {cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{-1, 0}};
    }
    throw std::logic_error("pauli_mat2: bad axis");
}

enum class Direction { Forward, Adjoint };

/// Scratch buffer of size d owned by the caller; one per worker.
struct Scratch {
    std::vector<cplx> buf;
    explicit Scratch(std::size_t d = 0) : buf(d) {}
    void require(std::size_t d) {
        if (buf.size() < d) buf.resize(d);
    }
};

/// Applies gates to a StateBatch with permutation plans and 2x2 block
/// multiplies. Plans are built once per structure (one per qubit, one per
/// CNOT placement) and immutable afterwards, so an engine is shareable
/// read-only across workers.
class GateEngine {
  public:
    explicit GateEngine(const CircuitStructure& s) : structure_(s), n_(s.n), dim_(s.dim()) {
        qubit_plans_.reserve(static_cast<std::size_t>(n_));
        for (int q = 1; q <= n_; ++q) qubit_plans_.push_back(make_qubit_plan(n_, q));
        for (const GateSpec& g : s.gates)
            if (g.kind == GateKind::Cnot) {
                const auto key = std::make_pair(g.qubit, g.qubit2);
                if (!cnot_plans_.count(key)) cnot_plans_.emplace(key, make_cnot_plan(n_, g.qubit, g.qubit2));
            }
    }

    const CircuitStructure& structure() const { return structure_; }
    std::size_t dim() const { return dim_; }
    const PermutationPlan& qubit_plan(int q) const { return qubit_plans_.at(static_cast<std::size_t>(q - 1)); }

    /// Cached plan for a CNOT placement in the schedule, or nullptr.
    const PermutationPlan* find_cnot_plan(int control, int target) const {
        const auto it = cnot_plans_.find(std::make_pair(control, target));
        return it != cnot_plans_.end() ? &it->second : nullptr;
    }

    void apply_rotation(Axis axis, double angle, int qubit, StateBatch& b, Scratch& scr) const {
        apply_2x2(rotation_mat2(axis, angle), qubit, b, scr);
    }

    void apply_pauli(Axis axis, int qubit, StateBatch& b, Scratch& scr) const {
        apply_2x2(pauli_mat2(axis), qubit, b, scr);
    }

    /// Pure index permutation, no arithmetic: swap within the pairs the
    /// cached plan transposes. CNOT plans are involutions. Placements outside
    /// the cached schedule get a one-off local plan.
    void apply_cnot(int control, int target, StateBatch& b) const {
        check_batch(b);
        const PermutationPlan* cached = find_cnot_plan(control, target);
        PermutationPlan local;
        if (!cached) {
            local = make_cnot_plan(n_, control, target);
            cached = &local;
        }
        const PermutationPlan& plan = *cached;
        for (std::size_t j = 0; j < b.cols; ++j) {
            cplx* x = b.col(j);
            for (std::size_t i = 0; i < b.dim; ++i) {
                const std::size_t pi = plan.perm[i];
                if (pi > i) std::swap(x[i], x[pi]);
            }
        }
    }

    /// (I (x) v (x) I) per column: permute qubit q to the pair position,
    /// multiply the 2x2 block, permute back.
    void apply_2x2(const Mat2& v, int qubit, StateBatch& b, Scratch& scr) const {
        check_batch(b);
        if (qubit < 1 || qubit > n_) throw std::invalid_argument("apply_2x2: qubit index out of range");
        scr.require(dim_);
        const PermutationPlan& plan = qubit_plan(qubit);
        cplx* y = scr.buf.data();
        for (std::size_t j = 0; j < b.cols; ++j) {
            cplx* x = b.col(j);
            for (std::size_t i = 0; i < dim_; ++i) y[plan.perm[i]] = x[i];
            for (std::size_t k = 0; k < dim_; k += 2) {
                const cplx a0 = y[k], a1 = y[k + 1];
                y[k] = v[0] * a0 + v[1] * a1;
                y[k + 1] = v[2] * a0 + v[3] * a1;
            }
            for (std::size_t i = 0; i < dim_; ++i) x[i] = y[plan.perm[i]];
        }
    }

    /// Forward applies the schedule in order; Adjoint applies conjugate
    /// transposes in reverse order, so adjoint(forward(x)) = x.
    void apply_ansatz(const std::vector<double>& theta, StateBatch& b, Scratch& scr,
                      Direction dir = Direction::Forward) const {
        if (static_cast<int>(theta.size()) != structure_.param_count)
            throw std::invalid_argument("apply_ansatz: parameter length mismatch");
        check_batch(b);
        const auto& gates = structure_.gates;
        if (dir == Direction::Forward) {
            for (const GateSpec& g : gates) apply_gate(g, theta, b, scr, +1.0);
        } else {
            for (auto it = gates.rbegin(); it != gates.rend(); ++it) apply_gate(*it, theta, b, scr, -1.0);
        }
    }

  private:
    void apply_gate(const GateSpec& g, const std::vector<double>& theta, StateBatch& b, Scratch& scr,
                    double sign) const {
        if (g.kind == GateKind::Cnot)
            apply_cnot(g.qubit, g.qubit2, b);
        else
            apply_rotation(rotation_axis(g.kind), sign * theta[static_cast<std::size_t>(g.param_slot)],
                           g.qubit, b, scr);
    }

    void check_batch(const StateBatch& b) const {
        if (b.dim != dim_) throw std::invalid_argument("GateEngine: batch dimension mismatch");
    }

    CircuitStructure structure_;
    int n_;
    std::size_t dim_;
    std::vector<PermutationPlan> qubit_plans_;
    std::map<std::pair<int, int>, PermutationPlan> cnot_plans_;
};

}  // namespace aqc
