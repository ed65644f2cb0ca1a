#pragma once

#include <algorithm>
#include <vector>

#include <json.hpp>

#include "mussti/device.hpp"
#include "mussti/error.hpp"

namespace mussti {

/// Logical-to-physical assignment: each placed qubit sits at a position in
/// one zone's ion chain. Chains are ordered because shuttling can only enter
/// and leave at the chain edges.
class Placement {
public:
    struct Slot {
        int zone = -1;
        int chain_pos = -1;
        bool placed() const { return zone >= 0; }
    };

    Placement() = default;
    Placement(int num_qubits, const DeviceTopology& topo)
        : slots_(static_cast<std::size_t>(num_qubits)), chains_(static_cast<std::size_t>(topo.zone_count())) {}

    int num_qubits() const { return static_cast<int>(slots_.size()); }
    const Slot& slot(int q) const { return slots_.at(static_cast<std::size_t>(q)); }
    int zone_of(int q) const { return slot(q).zone; }
    int chain_pos_of(int q) const { return slot(q).chain_pos; }
    const std::vector<int>& chain(int zone) const { return chains_.at(static_cast<std::size_t>(zone)); }
    int occupancy(int zone) const { return static_cast<int>(chain(zone).size()); }

    int module_occupancy(const DeviceTopology& topo, int module_id) const {
        int total = 0;
        for (int z : topo.modules.at(static_cast<std::size_t>(module_id)).zone_ids) total += occupancy(z);
        return total;
    }

    /// Append qubit to the back of the zone's chain.
    void push_back(int q, int zone) {
        auto& ch = chains_.at(static_cast<std::size_t>(zone));
        slots_.at(static_cast<std::size_t>(q)) = {zone, static_cast<int>(ch.size())};
        ch.push_back(q);
    }

    /// Remove qubit from its chain edge (front or back). The caller is
    /// responsible for having reordered it to an edge first.
    void remove_from_edge(int q) {
        auto& s = slots_.at(static_cast<std::size_t>(q));
        auto& ch = chains_.at(static_cast<std::size_t>(s.zone));
        if (s.chain_pos == static_cast<int>(ch.size()) - 1) {
            ch.pop_back();
        } else if (s.chain_pos == 0) {
            ch.erase(ch.begin());
            for (std::size_t i = 0; i < ch.size(); ++i) slots_[static_cast<std::size_t>(ch[i])].chain_pos = static_cast<int>(i);
        } else {
            raise(ErrorKind::IndexError, "qubit " + std::to_string(q) + " is not at a chain edge");
        }
        s = {};
    }

    /// Swap a qubit with its chain neighbour one step toward `toward_front`.
    void swap_neighbors(int q, bool toward_front) {
        auto& s = slots_.at(static_cast<std::size_t>(q));
        auto& ch = chains_.at(static_cast<std::size_t>(s.zone));
        const int other_pos = toward_front ? s.chain_pos - 1 : s.chain_pos + 1;
        if (other_pos < 0 || other_pos >= static_cast<int>(ch.size()))
            raise(ErrorKind::IndexError, "chain swap out of range");
        const int other = ch[static_cast<std::size_t>(other_pos)];
        std::swap(ch[static_cast<std::size_t>(s.chain_pos)], ch[static_cast<std::size_t>(other_pos)]);
        slots_[static_cast<std::size_t>(other)].chain_pos = s.chain_pos;
        s.chain_pos = other_pos;
    }

    /// Exchange the physical slots of two logical qubits (the ions stay put,
    /// the labels move). Used by logical SWAP insertion.
    void exchange(int qa, int qb) {
        auto& sa = slots_.at(static_cast<std::size_t>(qa));
        auto& sb = slots_.at(static_cast<std::size_t>(qb));
        chains_.at(static_cast<std::size_t>(sa.zone))[static_cast<std::size_t>(sa.chain_pos)] = qb;
        chains_.at(static_cast<std::size_t>(sb.zone))[static_cast<std::size_t>(sb.chain_pos)] = qa;
        std::swap(sa, sb);
    }

    void check_invariants(const DeviceTopology& topo) const {
        std::vector<int> seen(slots_.size(), 0);
        for (int z = 0; z < topo.zone_count(); ++z) {
            const auto& ch = chain(z);
            if (static_cast<int>(ch.size()) > topo.zone(z).capacity)
                raise(ErrorKind::CapacityExceeded, "zone " + std::to_string(z) + " over capacity");
            for (std::size_t pos = 0; pos < ch.size(); ++pos) {
                const int q = ch[pos];
                if (q < 0 || q >= num_qubits()) raise(ErrorKind::IndexError, "chain holds unknown qubit");
                if (++seen[static_cast<std::size_t>(q)] > 1) raise(ErrorKind::IndexError, "qubit placed twice");
                if (slots_[static_cast<std::size_t>(q)].zone != z ||
                    slots_[static_cast<std::size_t>(q)].chain_pos != static_cast<int>(pos))
                    raise(ErrorKind::IndexError, "slot/chain mismatch for qubit " + std::to_string(q));
            }
        }
        for (const auto& m : topo.modules) {
            if (module_occupancy(topo, m.id) > topo.module_ion_capacity(m.id))
                raise(ErrorKind::CapacityExceeded, "module " + std::to_string(m.id) + " over its ion cap");
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json doc;
        doc["qubits"] = nlohmann::json::array();
        for (std::size_t q = 0; q < slots_.size(); ++q)
            doc["qubits"].push_back({{"qubit", q}, {"zone", slots_[q].zone}, {"chain_pos", slots_[q].chain_pos}});
        return doc;
    }

    bool operator==(const Placement& other) const = default;

private:
    std::vector<Slot> slots_;
    std::vector<std::vector<int>> chains_;
};

} // namespace mussti
