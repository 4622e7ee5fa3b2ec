#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace aqc {

enum class GateKind { Rx, Ry, Rz, Cnot };

enum class Axis { X, Y, Z };

inline Axis rotation_axis(GateKind k) {
    switch (k) {
        case GateKind::Rx: return Axis::X;
        case GateKind::Ry: return Axis::Y;
        case GateKind::Rz: return Axis::Z;
        default: throw std::logic_error("rotation_axis: CNOT has no axis");
    }
}

/// One gate of the ansatz schedule. Qubits are 1-based with qubit 1 the most
/// significant bit of the state index. Rotations use `qubit` and own one
/// parameter slot; CNOTs use `qubit` (control) and `qubit2` (target) and no slot.
struct GateSpec {
    GateKind kind;
    int qubit = 0;
    int qubit2 = -1;      // target for CNOT, unused otherwise
    int param_slot = -1;  // index into the parameter vector, -1 for CNOT

    bool is_rotation() const { return kind != GateKind::Cnot; }
};

/// The fixed spin-ansatz schedule for (n, L): an initial Rz,Ry,Rz layer on
/// every qubit followed by L CNOT units placed on the line topology in
/// alternating odd/even layers, each unit expanding to
/// [CNOT(q,q+1), Ry(q), Rz(q), Ry(q+1), Rx(q+1)].
struct CircuitStructure {
    int n = 0;
    int L = 0;
    std::vector<GateSpec> gates;  // length 3n + 5L
    int param_count = 0;          // 3n + 4L

    std::size_t dim() const { return std::size_t{1} << n; }
};

inline CircuitStructure build_structure(int n, int L, int max_qubits = 24) {
    if (n < 2) throw std::invalid_argument("build_structure: n must be >= 2 (line topology)");
    if (n > max_qubits)
        throw std::invalid_argument("build_structure: n exceeds memory guard (" +
                                    std::to_string(max_qubits) + " qubits)");
    if (L < 0) throw std::invalid_argument("build_structure: L must be >= 0");

    CircuitStructure s;
    s.n = n;
    s.L = L;
    s.param_count = 3 * n + 4 * L;
    s.gates.reserve(static_cast<std::size_t>(3 * n + 5 * L));

    int slot = 0;
    for (int q = 1; q <= n; ++q) {
        s.gates.push_back({GateKind::Rz, q, -1, slot++});
        s.gates.push_back({GateKind::Ry, q, -1, slot++});
        s.gates.push_back({GateKind::Rz, q, -1, slot++});
    }

    // CNOT units: alternate layer A (control q odd) and layer B (control q even),
    // pairs in ascending q, until exactly L units have been emitted.
    int emitted = 0;
    int parity = 1;  // 1 = layer A, 0 = layer B
    while (emitted < L) {
        bool layer_empty = true;
        for (int q = (parity == 1 ? 1 : 2); q + 1 <= n && emitted < L; q += 2) {
            layer_empty = false;
            const int c = q, t = q + 1;
            s.gates.push_back({GateKind::Cnot, c, t, -1});
            s.gates.push_back({GateKind::Ry, c, -1, slot++});
            s.gates.push_back({GateKind::Rz, c, -1, slot++});
            s.gates.push_back({GateKind::Ry, t, -1, slot++});
            s.gates.push_back({GateKind::Rx, t, -1, slot++});
            ++emitted;
        }
        parity ^= 1;
        (void)layer_empty;  // n=2 has an empty B layer; the loop just moves on
    }
    return s;
}

}  // namespace aqc
