#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "mussti/error.hpp"
#include "mussti/schedule.hpp"

namespace mussti {

enum class HeatLaw { Linear, Multiplicative };

/// Operation pricing: durations, heating quanta and fidelity constants for
/// every event class, plus the two ideal-scenario switches.
struct CostParams {
    double t1_us = 600e6;          // qubit lifetime
    double k_heat = 0.001;         // trap heating rate
    double epsilon = 1.0 / 25600.0; // two-qubit gate decay coefficient

    double split_us = 80.0;
    double merge_us = 80.0;
    double phys_swap_us = 40.0;
    double move_speed_um_per_us = 2.0;

    double split_nbar = 1.0;
    double merge_nbar = 1.0;
    double phys_swap_nbar = 0.3;
    double move_nbar = 0.1;

    double gate1q_us = 5.0;
    double gate2q_us = 40.0;
    double fiber_us = 200.0;

    double oneq_fidelity = 0.9999;
    double fiber_fidelity = 0.99;

    HeatLaw heat_law = HeatLaw::Linear;
    bool idle_decay = false;     // multiply gate events by operand idle decay
    bool perfect_gate = false;   // local 2q fidelity fixed to 0.9999
    bool perfect_shuttle = false; // shuttling deposits no heat

    void validate() const {
        for (double v : {t1_us, epsilon, split_us, merge_us, phys_swap_us, move_speed_um_per_us, gate1q_us, gate2q_us,
                         fiber_us, oneq_fidelity, fiber_fidelity}) {
            if (!(v > 0)) raise(ErrorKind::ConfigError, "cost parameters must be positive");
        }
        if (k_heat < 0 || split_nbar < 0 || merge_nbar < 0 || phys_swap_nbar < 0 || move_nbar < 0)
            raise(ErrorKind::ConfigError, "heating parameters must be non-negative");
    }

    double nbar_for(EventKind kind) const {
        if (perfect_shuttle) return 0.0;
        switch (kind) {
        case EventKind::Split: return split_nbar;
        case EventKind::Merge: return merge_nbar;
        case EventKind::PhysSwap: return phys_swap_nbar;
        case EventKind::Move: return move_nbar;
        default: return 0.0;
        }
    }

    double duration_for(EventKind kind, double hop_distance_um = 0.0) const {
        switch (kind) {
        case EventKind::Gate1q: return gate1q_us;
        case EventKind::Gate2q: return gate2q_us;
        case EventKind::FiberGate: return fiber_us;
        case EventKind::InsertedSwapGate: return 3.0 * fiber_us;
        case EventKind::Split: return split_us;
        case EventKind::Merge: return merge_us;
        case EventKind::PhysSwap: return phys_swap_us;
        case EventKind::Move: return hop_distance_um / move_speed_um_per_us;
        }
        return 0.0;
    }

    nlohmann::json to_json() const {
        return nlohmann::json{{"t1_us", t1_us},
                              {"k_heat", k_heat},
                              {"epsilon", epsilon},
                              {"split_us", split_us},
                              {"merge_us", merge_us},
                              {"phys_swap_us", phys_swap_us},
                              {"move_speed_um_per_us", move_speed_um_per_us},
                              {"split_nbar", split_nbar},
                              {"merge_nbar", merge_nbar},
                              {"phys_swap_nbar", phys_swap_nbar},
                              {"move_nbar", move_nbar},
                              {"gate1q_us", gate1q_us},
                              {"gate2q_us", gate2q_us},
                              {"fiber_us", fiber_us},
                              {"oneq_fidelity", oneq_fidelity},
                              {"fiber_fidelity", fiber_fidelity},
                              {"heat_law", heat_law == HeatLaw::Linear ? "linear" : "multiplicative"},
                              {"idle_decay", idle_decay},
                              {"perfect_gate", perfect_gate},
                              {"perfect_shuttle", perfect_shuttle}};
    }

    static CostParams from_json(const nlohmann::json& j) {
        CostParams p;
        p.t1_us = j.value("t1_us", p.t1_us);
        p.k_heat = j.value("k_heat", p.k_heat);
        p.epsilon = j.value("epsilon", p.epsilon);
        p.split_us = j.value("split_us", p.split_us);
        p.merge_us = j.value("merge_us", p.merge_us);
        p.phys_swap_us = j.value("phys_swap_us", p.phys_swap_us);
        p.move_speed_um_per_us = j.value("move_speed_um_per_us", p.move_speed_um_per_us);
        p.split_nbar = j.value("split_nbar", p.split_nbar);
        p.merge_nbar = j.value("merge_nbar", p.merge_nbar);
        p.phys_swap_nbar = j.value("phys_swap_nbar", p.phys_swap_nbar);
        p.move_nbar = j.value("move_nbar", p.move_nbar);
        p.gate1q_us = j.value("gate1q_us", p.gate1q_us);
        p.gate2q_us = j.value("gate2q_us", p.gate2q_us);
        p.fiber_us = j.value("fiber_us", p.fiber_us);
        p.oneq_fidelity = j.value("oneq_fidelity", p.oneq_fidelity);
        p.fiber_fidelity = j.value("fiber_fidelity", p.fiber_fidelity);
        if (j.contains("heat_law")) {
            const std::string law = j["heat_law"].get<std::string>();
            if (law == "linear") p.heat_law = HeatLaw::Linear;
            else if (law == "multiplicative") p.heat_law = HeatLaw::Multiplicative;
            else raise(ErrorKind::ConfigError, "heat_law must be 'linear' or 'multiplicative'");
        }
        p.idle_decay = j.value("idle_decay", p.idle_decay);
        p.perfect_gate = j.value("perfect_gate", p.perfect_gate);
        p.perfect_shuttle = j.value("perfect_shuttle", p.perfect_shuttle);
        p.validate();
        return p;
    }
};

/// F = e^{-t/T1} - k*nbar, clamped to [0, 1].
inline double shuttle_fidelity(double t_us, double nbar, const CostParams& params) {
    if (t_us < 0 || nbar < 0) raise(ErrorKind::ConfigError, "negative shuttle time or heating");
    const double f = std::exp(-t_us / params.t1_us) - params.k_heat * nbar;
    return std::clamp(f, 0.0, 1.0);
}

/// 1 - epsilon * N^2 for a trap currently holding N ions.
inline double twoq_gate_fidelity(int n_ions, const CostParams& params) {
    if (n_ions < 2) raise(ErrorKind::OccupancyError, "two-qubit gate needs at least two ions in the trap");
    if (params.perfect_gate) return 0.9999;
    const double decay = params.epsilon * static_cast<double>(n_ions) * static_cast<double>(n_ions);
    if (decay >= 1.0)
        raise(ErrorKind::OccupancyError, "occupancy " + std::to_string(n_ions) + " drives gate fidelity to zero");
    return 1.0 - decay;
}

/// Tracks per-zone accumulated heat, the derived background fidelity B_i, and
/// the running fidelity product (kept in log space so long schedules only
/// underflow at the final exponentiation).
class FidelityLedger {
public:
    FidelityLedger() = default;
    explicit FidelityLedger(int zone_count)
        : zone_heat_(static_cast<std::size_t>(zone_count), 0.0),
          zone_b_(static_cast<std::size_t>(zone_count), 1.0) {}

    int zone_count() const { return static_cast<int>(zone_heat_.size()); }
    double zone_heat(int z) const { return zone_heat_.at(static_cast<std::size_t>(z)); }
    const std::vector<double>& zone_heat() const { return zone_heat_; }
    double background(int z) const { return zone_b_.at(static_cast<std::size_t>(z)); }
    double log_fidelity() const { return log_sum_; }
    const std::vector<double>& contributions() const { return contributions_; }

    double total_fidelity() const {
        if (contributions_.empty()) return 1.0;
        if (std::isinf(log_sum_)) return 0.0;
        return std::exp(log_sum_);
    }

    /// True when the product is positive in exact arithmetic but too small to
    /// represent.
    bool underflowed() const {
        return !contributions_.empty() && !std::isinf(log_sum_) && std::exp(log_sum_) < DBL_MIN;
    }

    void deposit_heat(int z, double nbar, const CostParams& params) {
        if (nbar <= 0) return;
        auto& heat = zone_heat_.at(static_cast<std::size_t>(z));
        auto& b = zone_b_.at(static_cast<std::size_t>(z));
        heat += nbar;
        if (params.heat_law == HeatLaw::Linear) {
            b = std::max(0.0, 1.0 - params.k_heat * heat);
        } else {
            b = std::max(0.0, b * (1.0 - params.k_heat * nbar));
        }
    }

    void record(double contribution) {
        contributions_.push_back(contribution);
        log_sum_ += contribution > 0 ? std::log(contribution) : -std::numeric_limits<double>::infinity();
    }

    /// Price one event and fold it into the ledger. Gate-class events pick up
    /// the hosting zone's background fidelity (fiber-class events the
    /// geometric mean over both optical zones); shuttle-class events use the
    /// shuttle formula and deposit their heating quanta. Returns the event's
    /// contribution.
    double apply_event(const ScheduleEvent& event, const CostParams& params, double idle_gap_us = 0.0) {
        double contribution = 1.0;
        switch (event.kind) {
        case EventKind::Gate1q:
            contribution = params.oneq_fidelity * background(event.zones[0]);
            break;
        case EventKind::Gate2q:
            contribution = twoq_gate_fidelity(event.n_ions, params) * background(event.zones[0]);
            break;
        case EventKind::FiberGate: {
            const double b = std::sqrt(background(event.zones[0]) * background(event.zones[1]));
            contribution = params.fiber_fidelity * b;
            break;
        }
        case EventKind::InsertedSwapGate: {
            const double b = std::sqrt(background(event.zones[0]) * background(event.zones[1]));
            const double pulse = params.fiber_fidelity * b;
            contribution = pulse * pulse * pulse;
            break;
        }
        case EventKind::Split:
        case EventKind::Merge:
        case EventKind::PhysSwap: {
            const double nbar = params.nbar_for(event.kind);
            contribution = shuttle_fidelity(event.duration_us, nbar, params);
            deposit_heat(event.zones[0], nbar, params);
            break;
        }
        case EventKind::Move: {
            const double nbar = params.nbar_for(event.kind);
            contribution = shuttle_fidelity(event.duration_us, nbar, params);
            // heat splits evenly across the hop endpoints
            deposit_heat(event.zones[0], nbar / 2.0, params);
            deposit_heat(event.zones[1], nbar / 2.0, params);
            break;
        }
        }
        if (params.idle_decay && is_gate_event(event.kind) && idle_gap_us > 0)
            contribution *= std::exp(-idle_gap_us / params.t1_us);
        record(contribution);
        return contribution;
    }

private:
    std::vector<double> zone_heat_;
    std::vector<double> zone_b_;
    double log_sum_ = 0.0;
    std::vector<double> contributions_;
};

/// Aggregated metrics for one compiled schedule.
struct Report {
    long shuttle_count = 0;
    double makespan_us = 0.0;
    double fidelity = 1.0;
    double log_fidelity = 0.0;
    bool underflow = false;
    std::vector<double> zone_heat;
    int gate_events = 0;
    int shuttle_events = 0;
    int inserted_swaps = 0;
    int evictions = 0;

    nlohmann::json to_json() const {
        return nlohmann::json{{"shuttle_count", shuttle_count},
                              {"makespan_us", makespan_us},
                              {"fidelity", fidelity},
                              {"log_fidelity", log_fidelity},
                              {"underflow", underflow},
                              {"zone_heat", zone_heat},
                              {"gate_events", gate_events},
                              {"shuttle_events", shuttle_events},
                              {"inserted_swaps", inserted_swaps},
                              {"evictions", evictions}};
    }
};

/// Apply one event while tracking per-qubit last-touch times, so optional
/// idle decay sees the same gaps whether events come from the live scheduler
/// or from a replayed schedule file.
inline double apply_event_tracked(FidelityLedger& ledger, const ScheduleEvent& event, const CostParams& params,
                                  std::vector<double>& last_touch_end) {
    double gap = 0.0;
    if (params.idle_decay && is_gate_event(event.kind)) {
        for (int q : event.qubits) {
            if (q < 0) continue;
            gap += std::max(0.0, event.start_us - last_touch_end.at(static_cast<std::size_t>(q)));
        }
    }
    const double contribution = ledger.apply_event(event, params, gap);
    for (int q : event.qubits) {
        if (q < 0) continue;
        auto& t = last_touch_end.at(static_cast<std::size_t>(q));
        t = std::max(t, event.end_us());
    }
    return contribution;
}

/// Re-derive totals from a schedule by replaying every event through a fresh
/// ledger. Matches the scheduler's own accounting exactly because events are
/// stored in application order.
inline Report summarize(const Schedule& schedule, int zone_count, int num_qubits, const CostParams& params) {
    FidelityLedger ledger(zone_count);
    std::vector<double> last_touch(static_cast<std::size_t>(num_qubits), 0.0);
    Report report;
    report.shuttle_count = schedule.shuttle_count;
    report.inserted_swaps = schedule.inserted_swap_count;
    report.evictions = schedule.eviction_count;
    for (const auto& e : schedule.events) {
        apply_event_tracked(ledger, e, params, last_touch);
        report.makespan_us = std::max(report.makespan_us, e.end_us());
        if (is_gate_event(e.kind)) ++report.gate_events;
        if (is_shuttle_event(e.kind)) ++report.shuttle_events;
    }
    report.fidelity = ledger.total_fidelity();
    report.log_fidelity = ledger.log_fidelity();
    report.underflow = ledger.underflowed();
    report.zone_heat = ledger.zone_heat();
    return report;
}

} // namespace mussti
