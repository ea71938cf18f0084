#pragma once

#include <optional>
#include <string>
#include <vector>

#include "normsim/norm_engine.hpp"

namespace normsim {

// An agent's stance toward the norms: comply then pursue goals; comply only
// when expected punishment outweighs the gain; or ignore norms entirely.
enum class Strategy { social, pressured, rebellious };

struct UtilityParams {
    double time_value_per_s = 1.0;  // money units per second saved, >= 0
    bool safety_reflex = false;     // one-tick lookahead collision avoidance for rebellious agents
};

// A vehicle the deciding agent would have to wait for, with the number of
// cells it still has to traverse (full path length when not yet crossing).
struct WaitTarget {
    std::string vehicle_id;
    int remaining_cells = 0;
};

// Everything the agent perceives at decision time. Built by the simulation
// from the previous tick's state; decisions are pure functions of it.
struct AgentView {
    Contender self;
    std::vector<PrecedenceEdge> outgoing_edges;     // all have yielder == self.vehicle_id
    std::vector<std::string> conflicting_crossers;  // crossing vehicles whose movements conflict with self's
    bool ped_hold = false;                          // active Art. 38 crosswalk hold on the exit approach
    int witnesses_in_range = 0;                     // other contenders within perception radius
    int testimony_threshold = 1;
    FineSchedule fine_schedule;
    std::vector<WaitTarget> wait_targets;           // edge beneficiaries + conflicting crossers
    double tick_seconds = 0.5;
    // Simulator right-of-way plumbing outside the norms: first-come
    // first-served seniors on no-norm conflicting pairs, and the
    // same-approach queue gate. Not norm obligations.
    std::vector<std::string> fcfs_blockers;
    bool queue_blocked = false;
    // True when another vehicle's next-tick footprint covers self's entry
    // cell (input to the rebellious safety reflex).
    bool entry_cell_blocked_next_tick = false;
};

// Dispatcher over the three strategy rules. Deterministic.
Action decide(Strategy strategy, const AgentView& view, const UtilityParams& params);

// Hold iff anything requires yielding: an outgoing edge, a conflicting
// crosser, a pedestrian hold, a queue gate, or an FCFS senior.
Action decide_social(const AgentView& view);

// Complies exactly when the expected punishment is at least the gain from
// violating (tie -> comply); otherwise proceeds.
Action decide_pressured(const AgentView& view, const UtilityParams& params);

// Proceeds regardless of obligations; with the safety reflex on, holds when
// entering would share a cell with another vehicle next tick.
Action decide_rebellious(const AgentView& view, const UtilityParams& params);

// Max fine over the violated norms (outgoing edges, plus occupancy when
// crossers are present), times 1 if enough witnesses are in range to meet
// the testimony threshold, else times 0.
double expected_punishment(const AgentView& view);

// time_value_per_s x tick_seconds x total remaining cells of the vehicles
// the agent would otherwise wait for.
double violation_gain(const AgentView& view, const UtilityParams& params, double tick_seconds);

std::string_view to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view s);

}  // namespace normsim
