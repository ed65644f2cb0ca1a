#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mussti/error.hpp"

namespace mussti {

enum class GateKind { OneQubit, TwoQubit };

/// One gate application. Ids are dense and reflect source order, which the
/// scheduler reuses as the first-come-first-served rank.
struct GateOp {
    int id = -1;
    GateKind kind = GateKind::OneQubit;
    std::array<int, 2> qubits{-1, -1};
    std::string label;

    int arity() const { return kind == GateKind::TwoQubit ? 2 : 1; }
    bool is_two_qubit() const { return kind == GateKind::TwoQubit; }
    bool touches(int q) const { return qubits[0] == q || (kind == GateKind::TwoQubit && qubits[1] == q); }
};

/// Statements the parser accepts but does not schedule.
struct CircuitMeta {
    int measurements = 0;
    int barriers = 0;
    int includes = 0;
    int classical_registers = 0;
};

struct Circuit {
    int num_qubits = 0;
    std::vector<GateOp> gates;
    CircuitMeta meta;

    std::size_t two_qubit_count() const {
        std::size_t c = 0;
        for (const auto& g : gates) c += g.is_two_qubit() ? 1 : 0;
        return c;
    }

    void check_invariants() const {
        if (!gates.empty() && num_qubits < 1) raise(ErrorKind::IndexError, "gates present but no qubits declared");
        for (const auto& g : gates) {
            for (int i = 0; i < g.arity(); ++i) {
                if (g.qubits[i] < 0 || g.qubits[i] >= num_qubits)
                    raise(ErrorKind::IndexError, "gate " + std::to_string(g.id) + " references qubit out of range");
            }
            if (g.is_two_qubit() && g.qubits[0] == g.qubits[1])
                raise(ErrorKind::IndexError, "two-qubit gate " + std::to_string(g.id) + " repeats an operand");
        }
    }
};

inline GateOp make_1q(int id, int q, std::string label = "u") {
    return GateOp{id, GateKind::OneQubit, {q, -1}, std::move(label)};
}

inline GateOp make_2q(int id, int a, int b, std::string label = "cx") {
    return GateOp{id, GateKind::TwoQubit, {a, b}, std::move(label)};
}

/// Gate order reversed, ids renumbered from zero. Used by the two-fold
/// mapping search, which replays the circuit backwards.
inline Circuit reversed(const Circuit& c) {
    Circuit out;
    out.num_qubits = c.num_qubits;
    out.meta = c.meta;
    out.gates.reserve(c.gates.size());
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
        GateOp g = *it;
        g.id = static_cast<int>(out.gates.size());
        out.gates.push_back(std::move(g));
    }
    return out;
}

} // namespace mussti
