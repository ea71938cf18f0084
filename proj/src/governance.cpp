#include "normsim/governance.hpp"

#include <algorithm>

namespace normsim {

std::string make_sanction_id(const std::string& violator, int tick, NormId norm) {
    return violator + ":" + std::to_string(tick) + ":" + std::string(to_string(norm));
}

void GovernanceLedger::apply_sanction(const SanctionRecord& s) {
    if (sanction_ids_.count(s.sanction_id) > 0) {
        throw Error(ErrorCode::E_DUP_SANCTION, "sanction '" + s.sanction_id + "' already applied");
    }
    sanction_ids_.insert(s.sanction_id);
    AgentLedger& agent = agents_[s.violator];
    agent.total_fines += s.fine;
    agent.reputation -= 1;
    agent.history.push_back(s);
}

const AgentLedger* GovernanceLedger::find(const std::string& agent) const {
    const auto it = agents_.find(agent);
    return it != agents_.end() ? &it->second : nullptr;
}

double GovernanceLedger::total_fines(const std::string& agent) const {
    const AgentLedger* a = find(agent);
    return a != nullptr ? a->total_fines : 0.0;
}

int GovernanceLedger::reputation(const std::string& agent) const {
    const AgentLedger* a = find(agent);
    return a != nullptr ? a->reputation : 0;
}

std::vector<Testimony> collect_testimonies(const Violation& v,
                                           const std::vector<WitnessCandidate>& contenders,
                                           double radius_m) {
    std::vector<Testimony> out;
    for (const auto& c : contenders) {
        if (c.vehicle_id == v.violator) continue;
        if (c.distance_m > radius_m) continue;
        out.push_back({v.tick, c.vehicle_id, ViolationRef{v.violator, v.norm, v.tick}});
    }
    std::sort(out.begin(), out.end(),
              [](const Testimony& a, const Testimony& b) { return a.witness < b.witness; });
    return out;
}

std::optional<SanctionRecord> adjudicate(const Violation& v, const std::vector<Testimony>& testimonies,
                                         int threshold, const std::vector<Norm>& norms) {
    const ViolationRef ref{v.violator, v.norm, v.tick};
    for (const auto& t : testimonies) {
        if (!(t.ref == ref)) {
            throw Error(ErrorCode::E_TESTIMONY_MISMATCH,
                        "testimony by '" + t.witness + "' references a different violation");
        }
    }
    if (static_cast<int>(testimonies.size()) < threshold) return std::nullopt;
    const FineSchedule fines = fine_schedule(norms);
    const auto it = fines.find(v.norm);
    const double fine = it != fines.end() ? it->second : 0.0;
    return SanctionRecord{make_sanction_id(v.violator, v.tick, v.norm), v.violator, v.norm, fine,
                          static_cast<int>(testimonies.size())};
}

std::optional<std::string> arbitrate_deadlock(const std::vector<CycleMember>& cycle,
                                              const DeadlockPolicy& policy) {
    if (cycle.empty()) {
        throw Error(ErrorCode::E_EMPTY_CYCLE, "cannot arbitrate an empty cycle");
    }
    if (policy.kind == DeadlockPolicyKind::none) return std::nullopt;
    const auto best = std::min_element(cycle.begin(), cycle.end(),
                                       [](const CycleMember& a, const CycleMember& b) {
                                           return std::tie(a.arrival_tick, a.bearing_deg) <
                                                  std::tie(b.arrival_tick, b.bearing_deg);
                                       });
    return best->vehicle_id;
}

std::string_view to_string(DeadlockPolicyKind k) {
    return k == DeadlockPolicyKind::none ? "none" : "fcfs_arbitration";
}

std::optional<DeadlockPolicyKind> policy_from_string(std::string_view s) {
    if (s == "none") return DeadlockPolicyKind::none;
    if (s == "fcfs_arbitration") return DeadlockPolicyKind::fcfs_arbitration;
    return std::nullopt;
}

}  // namespace normsim
