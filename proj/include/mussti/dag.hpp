#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "mussti/circuit.hpp"
#include "mussti/error.hpp"

namespace mussti {

/// Gate dependency DAG with a mutable frontier.
///
/// Edges use last-writer-per-qubit linking: gate g_j receives one incoming
/// edge from the most recent earlier gate sharing each operand qubit, so a
/// node carries at most two predecessors and construction is linear in the
/// gate count. Popping a frontier node decrements successor in-degrees and
/// promotes nodes that reach zero.
class DependencyDag {
public:
    DependencyDag() = default;

    explicit DependencyDag(const Circuit& circuit) {
        const auto n_gates = circuit.gates.size();
        in_degree_.assign(n_gates, 0);
        successors_.assign(n_gates, {});
        alive_.assign(n_gates, true);
        std::vector<int> last_writer(static_cast<std::size_t>(circuit.num_qubits), -1);
        for (const auto& gate : circuit.gates) {
            int prev_edge_from = -1;
            for (int i = 0; i < gate.arity(); ++i) {
                ++construction_steps_;
                const int q = gate.qubits[i];
                const int pred = last_writer[static_cast<std::size_t>(q)];
                if (pred >= 0 && pred != prev_edge_from) {
                    successors_[static_cast<std::size_t>(pred)].push_back(gate.id);
                    ++in_degree_[static_cast<std::size_t>(gate.id)];
                    ++edge_count_;
                    prev_edge_from = pred;
                }
                last_writer[static_cast<std::size_t>(q)] = gate.id;
            }
            if (in_degree_[static_cast<std::size_t>(gate.id)] == 0) frontier_.insert(gate.id);
        }
        remaining_ = n_gates;
    }

    const std::set<int>& frontier() const { return frontier_; }
    bool empty() const { return remaining_ == 0; }
    std::size_t remaining() const { return remaining_; }
    std::size_t edge_count() const { return edge_count_; }
    std::size_t construction_steps() const { return construction_steps_; }
    int in_degree(int gate_id) const { return in_degree_.at(static_cast<std::size_t>(gate_id)); }
    const std::vector<int>& successors(int gate_id) const { return successors_.at(static_cast<std::size_t>(gate_id)); }
    bool alive(int gate_id) const { return alive_.at(static_cast<std::size_t>(gate_id)); }

    /// FCFS rank is the source-order gate id.
    static int fcfs_rank(int gate_id) { return gate_id; }

    void pop_gate(int gate_id) {
        auto it = frontier_.find(gate_id);
        if (it == frontier_.end()) raise(ErrorKind::NotInFrontier, "gate " + std::to_string(gate_id) + " is not ready");
        frontier_.erase(it);
        alive_[static_cast<std::size_t>(gate_id)] = false;
        --remaining_;
        for (int succ : successors_[static_cast<std::size_t>(gate_id)]) {
            if (--in_degree_[static_cast<std::size_t>(succ)] == 0) frontier_.insert(succ);
        }
    }

private:
    std::vector<int> in_degree_;
    std::vector<std::vector<int>> successors_;
    std::vector<bool> alive_;
    std::set<int> frontier_; // ordered for deterministic iteration
    std::size_t remaining_ = 0;
    std::size_t edge_count_ = 0;
    std::size_t construction_steps_ = 0;
};

inline DependencyDag build_dag(const Circuit& circuit) { return DependencyDag(circuit); }

} // namespace mussti
