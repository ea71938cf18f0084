#include "normsim/norm_engine.hpp"

#include <algorithm>
#include <functional>

namespace normsim {

namespace {

bool is_turn(Maneuver m) {
    return m == Maneuver::right || m == Maneuver::left;
}

}  // namespace

std::vector<Norm> default_btc_norms() {
    return {
        {NormId::norm1, 29, 1,
         "vehicles moving on main roads have the preference over those arriving from "
         "secondary roads",
         100.0},
        {NormId::norm2, 29, 2,
         "in the case of a traffic circle, the one that is circulating through it has the "
         "preference",
         100.0},
        {NormId::norm3, 29, 3, "in other cases, vehicles coming from the right have the preference",
         100.0},
        {NormId::art38, 38, 4,
         "before turning right or left onto another road, yield to pedestrians, cyclists and "
         "vehicles that come from the opposite direction on the road being left",
         100.0},
    };
}

FineSchedule fine_schedule(const std::vector<Norm>& norms) {
    FineSchedule fines;
    for (const auto& n : norms) fines[n.id] = n.fine;
    // Entering on top of a crossing vehicle is fined like a norm3 breach.
    if (auto it = fines.find(NormId::norm3); it != fines.end()) {
        fines[NormId::occupancy] = it->second;
    }
    return fines;
}

const Norm* find_norm(const std::vector<Norm>& norms, NormId id) {
    for (const auto& n : norms) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

std::vector<PrecedenceEdge> PrecedenceGraph::outgoing(std::string_view vehicle_id) const {
    std::vector<PrecedenceEdge> out;
    for (const auto& e : edges) {
        if (e.yielder == vehicle_id) out.push_back(e);
    }
    return out;
}

bool PrecedenceGraph::has_node(std::string_view vehicle_id) const {
    return nodes.count(std::string(vehicle_id)) > 0;
}

std::optional<NormDecision> norm_between(const Contender& u, const Contender& w,
                                         const Intersection& x, const std::vector<Norm>& norms) {
    if (!conflicts(u.movement(), w.movement(), x)) {
        throw Error(ErrorCode::E_NOT_CONFLICTING,
                    u.vehicle_id + " and " + w.vehicle_id + " do not conflict");
    }
    const Approach& au = x.at(u.approach);
    const Approach& aw = x.at(w.approach);

    const auto applies = [&](NormId id) { return find_norm(norms, id) != nullptr; };
    const auto yields = [](bool first, NormId id) {
        return NormDecision{first ? YieldDirection::first_yields : YieldDirection::second_yields, id};
    };

    // Norm2: inside a traffic circle the circulating vehicle has preference.
    if (x.kind == IntersectionKind::roundabout && applies(NormId::norm2)) {
        const bool cu = u.phase == ContenderPhase::crossing;
        const bool cw = w.phase == ContenderPhase::crossing;
        if (cu != cw) return yields(cw, NormId::norm2);
    }
    // Norm1: main road beats secondary.
    if (au.road_class != aw.road_class && applies(NormId::norm1)) {
        return yields(au.road_class == RoadClass::secondary, NormId::norm1);
    }
    // Norm3: the vehicle coming from the right has preference.
    if (applies(NormId::norm3)) {
        if (right_of(au.id, x) == aw.id) return yields(true, NormId::norm3);
        if (right_of(aw.id, x) == au.id) return yields(false, NormId::norm3);
    }
    // Art. 38: a turner yields to the oncoming vehicle on the road it leaves.
    if (applies(NormId::art38) && is_turn(u.maneuver) != is_turn(w.maneuver)) {
        const Contender& turner = is_turn(u.maneuver) ? u : w;
        const Contender& other = is_turn(u.maneuver) ? w : u;
        if (opposite_of(turner.approach, x) == other.approach) {
            return yields(&turner == &u, NormId::art38);
        }
    }
    return std::nullopt;
}

PrecedenceGraph build_precedence(const std::vector<Contender>& contenders, const Intersection& x,
                                 const std::vector<Norm>& norms) {
    PrecedenceGraph g;
    for (const auto& c : contenders) {
        if (!g.nodes.insert(c.vehicle_id).second) {
            throw Error(ErrorCode::E_DUP_ID, "duplicate contender '" + c.vehicle_id + "'");
        }
    }
    for (size_t i = 0; i < contenders.size(); ++i) {
        for (size_t j = i + 1; j < contenders.size(); ++j) {
            const Contender& u = contenders[i];
            const Contender& w = contenders[j];
            if (u.approach == w.approach) continue;  // queueing, not conflict
            if (!conflicts(u.movement(), w.movement(), x)) continue;
            if (auto d = norm_between(u, w, x, norms)) {
                const bool u_yields = d->direction == YieldDirection::first_yields;
                g.edges.push_back({u_yields ? u.vehicle_id : w.vehicle_id,
                                   u_yields ? w.vehicle_id : u.vehicle_id, d->norm});
            }
        }
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const PrecedenceEdge& a, const PrecedenceEdge& b) {
        return std::tie(a.yielder, a.beneficiary) < std::tie(b.yielder, b.beneficiary);
    });
    return g;
}

// Johnson-style enumeration of elementary circuits. Graphs here are tiny
// (one node per contender), so the simple blocked-set recursion is plenty.
std::vector<std::vector<std::string>> detect_normative_deadlock(const PrecedenceGraph& g) {
    std::vector<std::string> ids(g.nodes.begin(), g.nodes.end());
    const size_t n = ids.size();
    std::vector<std::vector<size_t>> adj(n);
    for (const auto& e : g.edges) {
        const size_t from = std::lower_bound(ids.begin(), ids.end(), e.yielder) - ids.begin();
        const size_t to = std::lower_bound(ids.begin(), ids.end(), e.beneficiary) - ids.begin();
        adj[from].push_back(to);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());

    std::vector<std::vector<std::string>> cycles;
    std::vector<size_t> stack;
    std::vector<bool> blocked(n, false);

    // Enumerates every cycle whose smallest node is `root`; nodes < root are
    // excluded, which makes each elementary circuit appear exactly once.
    size_t root = 0;
    std::function<bool(size_t)> search = [&](size_t v) {
        bool found = false;
        stack.push_back(v);
        blocked[v] = true;
        for (size_t next : adj[v]) {
            if (next < root) continue;
            if (next == root) {
                std::vector<std::string> cycle;
                cycle.reserve(stack.size());
                for (size_t idx : stack) cycle.push_back(ids[idx]);
                cycles.push_back(std::move(cycle));
                found = true;
            } else if (!blocked[next]) {
                if (search(next)) found = true;
            }
        }
        stack.pop_back();
        blocked[v] = false;
        return found;
    };

    for (root = 0; root < n; ++root) search(root);
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

std::vector<Violation> detect_violations(const PrecedenceGraph& g,
                                         const std::map<std::string, Action>& actions,
                                         const std::vector<Contender>& contenders,
                                         const std::vector<std::pair<std::string, std::string>>& ped_holds,
                                         int tick, const Intersection& x) {
    const auto find_contender = [&](const std::string& id) -> const Contender* {
        for (const auto& c : contenders) {
            if (c.vehicle_id == id) return &c;
        }
        return nullptr;
    };

    std::vector<Violation> out;
    for (const auto& [vehicle, action] : actions) {
        if (!g.has_node(vehicle)) {
            throw Error(ErrorCode::E_UNKNOWN_VEHICLE, "action for unknown vehicle '" + vehicle + "'");
        }
        if (action != Action::proceed) continue;

        // (a) proceeding against a live outgoing edge. Cite the
        // highest-priority violated norm; ties break on beneficiary id.
        const auto norm_rank = [](NormId id) {
            switch (id) {
                case NormId::norm1: return 1;
                case NormId::norm2: return 2;
                case NormId::norm3: return 3;
                case NormId::art38: return 4;
                case NormId::occupancy: return 5;
            }
            return 6;
        };
        const PrecedenceEdge* best_edge = nullptr;
        for (const auto& e : g.edges) {
            if (e.yielder != vehicle || !g.has_node(e.beneficiary)) continue;
            if (best_edge == nullptr ||
                std::make_pair(norm_rank(e.norm), e.beneficiary) <
                    std::make_pair(norm_rank(best_edge->norm), best_edge->beneficiary)) {
                best_edge = &e;
            }
        }
        if (best_edge != nullptr) {
            out.push_back({tick, vehicle, best_edge->norm, best_edge->beneficiary});
            continue;
        }

        // (b) entering while a conflicting vehicle is crossing.
        const Contender* self = find_contender(vehicle);
        if (self != nullptr) {
            std::optional<std::string> crosser;
            for (const auto& c : contenders) {
                if (c.phase != ContenderPhase::crossing || c.approach == self->approach) continue;
                if (!conflicts(self->movement(), c.movement(), x)) continue;
                if (!crosser || c.vehicle_id < *crosser) crosser = c.vehicle_id;
            }
            if (crosser) {
                out.push_back({tick, vehicle, NormId::occupancy, crosser});
                continue;
            }
        }

        // (c) proceeding against an active crosswalk hold.
        std::optional<std::string> ped;
        for (const auto& [veh, ped_id] : ped_holds) {
            if (veh != vehicle) continue;
            if (!ped || ped_id < *ped) ped = ped_id;
        }
        if (ped) out.push_back({tick, vehicle, NormId::art38, ped});
    }

    std::sort(out.begin(), out.end(),
              [](const Violation& a, const Violation& b) { return a.violator < b.violator; });
    return out;
}

std::string_view to_string(NormId id) {
    switch (id) {
        case NormId::norm1: return "norm1";
        case NormId::norm2: return "norm2";
        case NormId::norm3: return "norm3";
        case NormId::art38: return "art38";
        case NormId::occupancy: return "occupancy";
    }
    return "norm1";
}

std::string_view to_string(Action a) {
    return a == Action::proceed ? "proceed" : "hold";
}

std::optional<NormId> norm_from_string(std::string_view s) {
    if (s == "norm1") return NormId::norm1;
    if (s == "norm2") return NormId::norm2;
    if (s == "norm3") return NormId::norm3;
    if (s == "art38") return NormId::art38;
    if (s == "occupancy") return NormId::occupancy;
    return std::nullopt;
}

}  // namespace normsim
