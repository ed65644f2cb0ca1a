#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mussti/error.hpp"

namespace mussti {

enum class EventKind : std::uint8_t {
    Gate1q,
    Gate2q,
    FiberGate,
    Split,
    Move,
    PhysSwap,
    Merge,
    InsertedSwapGate,
};

inline const char* to_string(EventKind k) {
    switch (k) {
    case EventKind::Gate1q: return "gate1q";
    case EventKind::Gate2q: return "gate2q";
    case EventKind::FiberGate: return "fiber_gate";
    case EventKind::Split: return "split";
    case EventKind::Move: return "move";
    case EventKind::PhysSwap: return "phys_swap";
    case EventKind::Merge: return "merge";
    case EventKind::InsertedSwapGate: return "inserted_swap";
    }
    return "unknown";
}

inline EventKind event_kind_from_string(const std::string& s) {
    for (auto k : {EventKind::Gate1q, EventKind::Gate2q, EventKind::FiberGate, EventKind::Split, EventKind::Move,
                   EventKind::PhysSwap, EventKind::Merge, EventKind::InsertedSwapGate}) {
        if (s == to_string(k)) return k;
    }
    raise(ErrorKind::SchemaError, "unknown event kind '" + s + "'");
}

inline bool is_gate_event(EventKind k) {
    return k == EventKind::Gate1q || k == EventKind::Gate2q || k == EventKind::FiberGate ||
           k == EventKind::InsertedSwapGate;
}

inline bool is_shuttle_event(EventKind k) {
    return k == EventKind::Split || k == EventKind::Move || k == EventKind::PhysSwap || k == EventKind::Merge;
}

/// One timed machine event.
///
/// Zone usage by kind: gate events carry the hosting zone in zones[0]
/// (fiber-class events carry both optical zones); Split/PhysSwap carry the
/// source zone; Merge the destination; Move carries the hop endpoints.
struct ScheduleEvent {
    EventKind kind = EventKind::Gate1q;
    int gate_id = -1; // circuit gate id; -1 for shuttle steps and inserted swaps
    std::array<int, 2> qubits{-1, -1};
    std::array<int, 2> zones{-1, -1};
    double start_us = 0.0;
    double duration_us = 0.0;
    int n_ions = 0;        // trap occupancy at execution (2-qubit gates)
    double fidelity = 1.0; // this event's contribution to the product

    double end_us() const { return start_us + duration_us; }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["kind"] = to_string(kind);
        if (gate_id >= 0) j["gate"] = gate_id;
        j["qubits"] = qubits[1] >= 0 ? nlohmann::json{qubits[0], qubits[1]} : nlohmann::json{qubits[0]};
        j["zones"] = zones[1] >= 0 ? nlohmann::json{zones[0], zones[1]} : nlohmann::json{zones[0]};
        j["start_us"] = start_us;
        j["duration_us"] = duration_us;
        if (n_ions > 0) j["n_ions"] = n_ions;
        j["fidelity"] = fidelity;
        return j;
    }

    static ScheduleEvent from_json(const nlohmann::json& j) {
        ScheduleEvent e;
        e.kind = event_kind_from_string(j.at("kind").get<std::string>());
        e.gate_id = j.value("gate", -1);
        const auto& qs = j.at("qubits");
        e.qubits[0] = qs.at(0).get<int>();
        if (qs.size() > 1) e.qubits[1] = qs.at(1).get<int>();
        const auto& zs = j.at("zones");
        e.zones[0] = zs.at(0).get<int>();
        if (zs.size() > 1) e.zones[1] = zs.at(1).get<int>();
        e.start_us = j.at("start_us").get<double>();
        e.duration_us = j.at("duration_us").get<double>();
        e.n_ions = j.value("n_ions", 0);
        e.fidelity = j.at("fidelity").get<double>();
        return e;
    }
};

/// Entry in the scheduler's decision log (evictions and swap insertions).
struct Decision {
    enum class Type { Eviction, SwapInserted, SwapDeclined };
    Type type = Type::Eviction;
    int qubit = -1;
    int partner = -1;   // swap partner, when applicable
    int from_zone = -1;
    int to_zone = -1;
    int weight_home = 0;   // W(qubit, home module) at decision time
    int weight_target = 0; // W(qubit, target module) at decision time
    std::string note;
};

struct Schedule {
    std::vector<ScheduleEvent> events;
    long shuttle_count = 0;
    double makespan_us = 0.0;
    std::vector<Decision> decisions;
    int inserted_swap_count = 0;
    int eviction_count = 0;
    bool eager_drain_violated = false; // set by the scheduler's self-check

    void write_jsonl(std::ostream& out, const nlohmann::json& summary) const {
        for (const auto& e : events) out << e.to_json().dump() << '\n';
        nlohmann::json last;
        last["summary"] = summary;
        out << last.dump() << '\n';
    }

    /// Events plus the trailing summary line, as written by write_jsonl.
    static std::pair<Schedule, nlohmann::json> read_jsonl(std::istream& in) {
        Schedule sched;
        nlohmann::json summary;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line);
            if (j.contains("summary")) {
                summary = j["summary"];
                continue;
            }
            sched.events.push_back(ScheduleEvent::from_json(j));
        }
        if (summary.contains("shuttle_count")) sched.shuttle_count = summary["shuttle_count"].get<long>();
        if (summary.contains("makespan_us")) sched.makespan_us = summary["makespan_us"].get<double>();
        return {std::move(sched), std::move(summary)};
    }
};

} // namespace mussti
