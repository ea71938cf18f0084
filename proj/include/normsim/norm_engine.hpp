#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "normsim/road_model.hpp"

namespace normsim {

// The four codified norms plus the reserved `occupancy` id used only on
// violation records (entering the box while a conflicting vehicle is
// crossing — no BTC article orders co-occupancy, so it gets its own id).
enum class NormId { norm1, norm2, norm3, art38, occupancy };

struct Norm {
    NormId id;
    int article;  // 29 or 38
    int rank;     // priority among Article-29 norms: norm1=1 < norm2=2 < norm3=3; art38 supplemental
    std::string description;
    double fine = 100.0;  // money units, >= 0
};

// The Brazilian Transit Code right-of-way norms for unsignalized
// intersections: Article 29 norms (i)-(iii) and the Article 38 sole
// paragraph, each with the default fine of 100 money units.
std::vector<Norm> default_btc_norms();

// norm id -> fine, with the reserved occupancy id mapped to norm3's fine.
using FineSchedule = std::map<NormId, double>;
FineSchedule fine_schedule(const std::vector<Norm>& norms);

const Norm* find_norm(const std::vector<Norm>& norms, NormId id);

enum class ContenderPhase { approaching_in_zone, at_line, crossing };

// A vehicle participating in precedence resolution: at or near the stop
// line, or inside the box.
struct Contender {
    std::string vehicle_id;
    std::string approach;
    Maneuver maneuver = Maneuver::straight;
    std::optional<int> arrival_tick;  // set iff phase is at_line or crossing
    ContenderPhase phase = ContenderPhase::at_line;

    Movement movement() const { return Movement{approach, maneuver}; }
};

// Directed must-yield obligation: `yielder` must let `beneficiary` go first.
struct PrecedenceEdge {
    std::string yielder;
    std::string beneficiary;
    NormId norm;
};

struct PrecedenceGraph {
    std::set<std::string> nodes;
    std::vector<PrecedenceEdge> edges;

    std::vector<PrecedenceEdge> outgoing(std::string_view vehicle_id) const;
    bool has_node(std::string_view vehicle_id) const;
};

enum class YieldDirection { first_yields, second_yields };

struct NormDecision {
    YieldDirection direction;
    NormId norm;
};

// Resolves which of two conflicting contenders must yield, evaluating the
// norms in priority order: norm2 (roundabout circulation), norm1 (main
// road), norm3 (right has preference), art38 (turner yields to oncoming).
// Returns nullopt when no norm covers the pair.
// Throws E_NOT_CONFLICTING when the movements do not conflict.
std::optional<NormDecision> norm_between(const Contender& u, const Contender& w,
                                         const Intersection& x, const std::vector<Norm>& norms);

// Nodes = all contenders; one edge per unordered conflicting pair that some
// norm orders. Throws E_DUP_ID on duplicate vehicle ids.
PrecedenceGraph build_precedence(const std::vector<Contender>& contenders, const Intersection& x,
                                 const std::vector<Norm>& norms);

// All elementary directed cycles, each rotated to start at its
// lexicographically smallest vehicle id; the list itself is sorted.
std::vector<std::vector<std::string>> detect_normative_deadlock(const PrecedenceGraph& g);

enum class Action { proceed, hold };

struct Violation {
    int tick;
    std::string violator;
    NormId norm;
    std::optional<std::string> beneficiary;  // vehicle or pedestrian id
};

// One Violation per vehicle that proceeds while (a) holding an outgoing
// edge whose beneficiary is still a contender, (b) a conflicting vehicle is
// crossing (reserved id `occupancy` when no edge justifies it), or (c)
// under an active pedestrian hold (art38). First matching rule wins.
// Throws E_UNKNOWN_VEHICLE when an action names a vehicle outside g.
std::vector<Violation> detect_violations(const PrecedenceGraph& g,
                                         const std::map<std::string, Action>& actions,
                                         const std::vector<Contender>& contenders,
                                         const std::vector<std::pair<std::string, std::string>>& ped_holds,
                                         int tick, const Intersection& x);

std::string_view to_string(NormId id);
std::string_view to_string(Action a);
std::optional<NormId> norm_from_string(std::string_view s);

}  // namespace normsim
