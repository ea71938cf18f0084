#include "normsim/strategies.hpp"

#include <algorithm>

namespace normsim {

Action decide(Strategy strategy, const AgentView& view, const UtilityParams& params) {
    switch (strategy) {
        case Strategy::social: return decide_social(view);
        case Strategy::pressured: return decide_pressured(view, params);
        case Strategy::rebellious: return decide_rebellious(view, params);
    }
    return Action::hold;
}

Action decide_social(const AgentView& view) {
    const bool must_yield = !view.outgoing_edges.empty() || !view.conflicting_crossers.empty() ||
                            view.ped_hold || view.queue_blocked || !view.fcfs_blockers.empty();
    return must_yield ? Action::hold : Action::proceed;
}

Action decide_pressured(const AgentView& view, const UtilityParams& params) {
    if (decide_social(view) == Action::proceed) return Action::proceed;
    const double punishment = expected_punishment(view);
    const double gain = violation_gain(view, params, view.tick_seconds);
    return punishment >= gain ? Action::hold : Action::proceed;
}

Action decide_rebellious(const AgentView& view, const UtilityParams& params) {
    if (params.safety_reflex && view.entry_cell_blocked_next_tick) return Action::hold;
    return Action::proceed;
}

double expected_punishment(const AgentView& view) {
    const auto fine_of = [&](NormId id) {
        const auto it = view.fine_schedule.find(id);
        return it != view.fine_schedule.end() ? it->second : 0.0;
    };
    double max_fine = 0.0;
    for (const auto& e : view.outgoing_edges) max_fine = std::max(max_fine, fine_of(e.norm));
    if (!view.conflicting_crossers.empty()) {
        max_fine = std::max(max_fine, fine_of(NormId::occupancy));
    }
    const bool detected = view.witnesses_in_range >= view.testimony_threshold;
    return detected ? max_fine : 0.0;
}

double violation_gain(const AgentView& view, const UtilityParams& params, double tick_seconds) {
    int cells = 0;
    for (const auto& target : view.wait_targets) cells += target.remaining_cells;
    return params.time_value_per_s * tick_seconds * static_cast<double>(cells);
}

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::social: return "social";
        case Strategy::pressured: return "pressured";
        case Strategy::rebellious: return "rebellious";
    }
    return "social";
}

std::optional<Strategy> strategy_from_string(std::string_view s) {
    if (s == "social") return Strategy::social;
    if (s == "pressured") return Strategy::pressured;
    if (s == "rebellious") return Strategy::rebellious;
    return std::nullopt;
}

}  // namespace normsim
