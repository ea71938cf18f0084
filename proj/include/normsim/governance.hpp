#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "normsim/norm_engine.hpp"

namespace normsim {

struct ViolationRef {
    std::string violator;
    NormId norm;
    int tick;

    friend bool operator==(const ViolationRef&, const ViolationRef&) = default;
};

// A witness agent's report of an observed violation.
struct Testimony {
    int tick;
    std::string witness;
    ViolationRef ref;
};

struct SanctionRecord {
    std::string sanction_id;  // deterministic: violator + tick + norm
    std::string violator;
    NormId norm;
    double fine = 0.0;
    int testimony_count = 0;
};

std::string make_sanction_id(const std::string& violator, int tick, NormId norm);

struct AgentLedger {
    double total_fines = 0.0;
    int reputation = 0;  // starts 0, decremented per sanction
    std::vector<SanctionRecord> history;
};

// Fines, reputation and sanction history per agent. Single-owner state,
// mutated only by the simulation loop between ticks.
class GovernanceLedger {
public:
    // Throws E_DUP_SANCTION on a replayed sanction_id; the ledger is
    // unchanged in that case.
    void apply_sanction(const SanctionRecord& s);

    const AgentLedger* find(const std::string& agent) const;
    double total_fines(const std::string& agent) const;
    int reputation(const std::string& agent) const;

    const std::map<std::string, AgentLedger>& agents() const { return agents_; }

private:
    std::map<std::string, AgentLedger> agents_;
    std::set<std::string> sanction_ids_;
};

enum class DeadlockPolicyKind { none, fcfs_arbitration };

struct DeadlockPolicy {
    DeadlockPolicyKind kind = DeadlockPolicyKind::none;
    int deadlock_timeout_ticks = 20;  // >= 1
};

// A contender's position at the violation tick: 0 when at the line or in
// the box, otherwise the remaining distance to the stop line.
struct WitnessCandidate {
    std::string vehicle_id;
    double distance_m = 0.0;
};

// One testimony per contender other than the violator within radius_m.
std::vector<Testimony> collect_testimonies(const Violation& v,
                                           const std::vector<WitnessCandidate>& contenders,
                                           double radius_m);

// A sanction carrying the violated norm's fine iff enough testimonies back
// the violation. Throws E_TESTIMONY_MISMATCH if a testimony references a
// different violation.
std::optional<SanctionRecord> adjudicate(const Violation& v, const std::vector<Testimony>& testimonies,
                                         int threshold, const std::vector<Norm>& norms);

struct CycleMember {
    std::string vehicle_id;
    int arrival_tick = 0;
    int bearing_deg = 0;
};

// Picks which deadlocked vehicle may go: none under policy none; the
// earliest arrival (ties broken by ascending bearing) under
// fcfs_arbitration. Throws E_EMPTY_CYCLE.
std::optional<std::string> arbitrate_deadlock(const std::vector<CycleMember>& cycle,
                                              const DeadlockPolicy& policy);

std::string_view to_string(DeadlockPolicyKind k);
std::optional<DeadlockPolicyKind> policy_from_string(std::string_view s);

}  // namespace normsim
