#include "normsim/sim_engine.hpp"

#include <algorithm>
#include <cmath>

namespace normsim {

namespace {

constexpr double kEps = 1e-9;

bool is_turn(Maneuver m) {
    return m == Maneuver::right || m == Maneuver::left;
}

int ideal_travel_ticks(double distance_m, double step_m) {
    return static_cast<int>(std::ceil(distance_m / step_m - kEps));
}

Contender make_contender(const VehicleState& v) {
    Contender c;
    c.vehicle_id = v.id;
    c.approach = v.approach;
    c.maneuver = v.maneuver;
    switch (v.phase) {
        case VehiclePhase::at_line: c.phase = ContenderPhase::at_line; break;
        case VehiclePhase::crossing: c.phase = ContenderPhase::crossing; break;
        default: c.phase = ContenderPhase::approaching_in_zone; break;
    }
    if (c.phase != ContenderPhase::approaching_in_zone) c.arrival_tick = v.arrival_tick;
    return c;
}

double contender_distance(const VehicleState& v) {
    return v.phase == VehiclePhase::approaching ? v.distance_m : 0.0;
}

// Cells a crossing vehicle sweeps during the current tick's movement: the
// cell it is in plus the one it advances into (none extra when exiting).
std::vector<Cell> sweep_this_tick(const VehicleState& v) {
    std::vector<Cell> cells{v.path[static_cast<size_t>(v.path_index)]};
    if (static_cast<size_t>(v.path_index) + 1 < v.path.size()) {
        cells.push_back(v.path[static_cast<size_t>(v.path_index) + 1]);
    }
    return cells;
}

}  // namespace

bool WorldState::finished() const {
    if (tick >= params.ticks_max) return true;
    return std::all_of(vehicles.begin(), vehicles.end(),
                       [](const VehicleState& v) { return v.terminal(); });
}

const VehicleState* WorldState::find_vehicle(const std::string& id) const {
    for (const auto& v : vehicles) {
        if (v.id == id) return &v;
    }
    return nullptr;
}

WorldState make_world(const Scenario& s) {
    const auto diagnostics = validate_scenario(s);
    if (!diagnostics.empty()) {
        throw Error(ErrorCode::E_INVALID_SCENARIO, format_diagnostics(diagnostics));
    }
    WorldState w;
    w.intersection = s.intersection;
    w.norms = scenario_norms(s);
    w.params = s.params;
    w.seed = s.seed;
    w.pedestrians = s.pedestrians;
    for (const auto& decl : s.vehicles) {
        VehicleState v;
        v.id = decl.id;
        v.approach = decl.approach;
        v.maneuver = decl.maneuver;
        v.strategy = decl.strategy;
        v.spawn_tick = decl.spawn_tick;
        v.spawn_distance_m = decl.spawn_distance_m;
        v.path = movement_cells(decl.approach, decl.maneuver, s.intersection);
        w.vehicles.push_back(std::move(v));
    }
    std::sort(w.vehicles.begin(), w.vehicles.end(),
              [](const VehicleState& a, const VehicleState& b) { return a.id < b.id; });
    return w;
}

std::vector<CollisionEvent> detect_collisions(
    const std::vector<std::pair<std::string, std::vector<Cell>>>& footprints) {
    std::map<Cell, std::vector<std::string>> occupants;
    for (const auto& [id, cells] : footprints) {
        for (Cell c : cells) occupants[c].push_back(id);
    }
    std::vector<CollisionEvent> out;
    for (auto& [cell, ids] : occupants) {
        if (ids.size() < 2) continue;
        std::sort(ids.begin(), ids.end());
        out.push_back({cell, ids});
    }
    std::sort(out.begin(), out.end(), [](const CollisionEvent& a, const CollisionEvent& b) {
        return to_string(a.cell) < to_string(b.cell);
    });
    return out;
}

namespace {

struct TickContext {
    std::vector<Contender> contenders;
    PrecedenceGraph effective;  // precedence minus suspended edges of granted vehicles
    std::vector<std::pair<std::string, std::string>> ped_holds;
};

bool pedestrian_active(const PedestrianDecl& p, int tick) {
    return p.start_tick <= tick && tick < p.start_tick + p.duration_ticks;
}

TickContext build_tick_context(const WorldState& w) {
    TickContext ctx;
    for (const auto& v : w.vehicles) {
        const bool in_zone = v.phase == VehiclePhase::approaching &&
                             v.distance_m <= w.params.decision_zone_m + kEps;
        if (v.phase == VehiclePhase::at_line || v.phase == VehiclePhase::crossing || in_zone) {
            ctx.contenders.push_back(make_contender(v));
        }
    }
    PrecedenceGraph g = build_precedence(ctx.contenders, w.intersection, w.norms);
    ctx.effective.nodes = g.nodes;
    for (const auto& e : g.edges) {
        if (w.grants.count(e.yielder) > 0) continue;
        ctx.effective.edges.push_back(e);
    }
    for (const auto& v : w.vehicles) {
        if (v.phase != VehiclePhase::at_line || !is_turn(v.maneuver)) continue;
        const Approach* exit = w.intersection.find_bearing(
            exit_bearing(w.intersection.at(v.approach).bearing_deg, v.maneuver));
        if (exit == nullptr) continue;
        for (const auto& p : w.pedestrians) {
            if (p.approach == exit->id && pedestrian_active(p, w.tick)) {
                ctx.ped_holds.emplace_back(v.id, p.id);
            }
        }
    }
    std::sort(ctx.ped_holds.begin(), ctx.ped_holds.end());
    return ctx;
}

AgentView build_view(const WorldState& w, const VehicleState& self, const TickContext& ctx) {
    AgentView view;
    view.self = make_contender(self);
    view.outgoing_edges = ctx.effective.outgoing(self.id);
    view.tick_seconds = w.params.tick_seconds;
    view.testimony_threshold = w.params.testimony_threshold;
    view.fine_schedule = fine_schedule(w.norms);

    const Movement self_movement{self.approach, self.maneuver};
    for (const auto& c : ctx.contenders) {
        if (c.vehicle_id == self.id) continue;
        const VehicleState* other = w.find_vehicle(c.vehicle_id);
        if (contender_distance(*other) <= w.params.perception_radius_m + kEps) {
            ++view.witnesses_in_range;
        }
        if (c.approach == self.approach) continue;
        if (c.phase == ContenderPhase::crossing &&
            conflicts(self_movement, c.movement(), w.intersection)) {
            view.conflicting_crossers.push_back(c.vehicle_id);
        }
    }

    for (const auto& [vehicle, ped] : ctx.ped_holds) {
        if (vehicle == self.id) view.ped_hold = true;
    }

    // Vehicles the agent must wait for: edge beneficiaries plus conflicting
    // crossers, costed by the cells they still have to clear.
    std::set<std::string> await;
    for (const auto& e : view.outgoing_edges) await.insert(e.beneficiary);
    for (const auto& id : view.conflicting_crossers) await.insert(id);
    for (const auto& id : await) {
        const VehicleState* other = w.find_vehicle(id);
        const int remaining = other->phase == VehiclePhase::crossing
                                  ? static_cast<int>(other->path.size()) - other->path_index
                                  : static_cast<int>(other->path.size());
        view.wait_targets.push_back({id, remaining});
    }

    // First-come-first-served fallback over conflicting pairs no norm
    // orders: seniority by (arrival tick, bearing), the arbitration key.
    const auto has_edge = [&](const std::string& a, const std::string& b) {
        for (const auto& e : ctx.effective.edges) {
            if ((e.yielder == a && e.beneficiary == b) || (e.yielder == b && e.beneficiary == a)) {
                return true;
            }
        }
        return false;
    };
    const int self_bearing = w.intersection.at(self.approach).bearing_deg;
    for (const auto& c : ctx.contenders) {
        if (c.vehicle_id == self.id || c.approach == self.approach) continue;
        if (c.phase != ContenderPhase::at_line) continue;
        if (!conflicts(self_movement, c.movement(), w.intersection)) continue;
        if (has_edge(self.id, c.vehicle_id)) continue;
        const int other_bearing = w.intersection.at(c.approach).bearing_deg;
        const auto self_key = std::make_pair(self.arrival_tick.value_or(0), self_bearing);
        const auto other_key = std::make_pair(c.arrival_tick.value_or(0), other_bearing);
        if (other_key < self_key) view.fcfs_blockers.push_back(c.vehicle_id);
    }
    std::sort(view.fcfs_blockers.begin(), view.fcfs_blockers.end());

    for (const auto& v : w.vehicles) {
        if (v.id == self.id) continue;
        if (v.approach == self.approach && v.phase == VehiclePhase::crossing && v.path_index == 0) {
            view.queue_blocked = true;  // entering now would share the leader's swept cell
        }
        if (v.phase == VehiclePhase::crossing) {
            for (Cell c : sweep_this_tick(v)) {
                if (c == self.path.front()) view.entry_cell_blocked_next_tick = true;
            }
        }
    }
    return view;
}

}  // namespace

std::vector<TickEvent> step(WorldState& w) {
    if (w.finished()) {
        throw Error(ErrorCode::E_FINISHED, "step on a finished world (tick " + std::to_string(w.tick) + ")");
    }
    const int tick = w.tick;
    std::vector<TickEvent> events;

    // (1) spawn
    for (auto& v : w.vehicles) {
        if (v.phase == VehiclePhase::pending && v.spawn_tick == tick) {
            v.phase = VehiclePhase::approaching;
            v.distance_m = v.spawn_distance_m;
        }
    }

    // (2) contenders and precedence
    const TickContext ctx = build_tick_context(w);

    // (3) decisions, from pre-movement state only
    std::map<std::string, Action> actions;
    for (const auto& v : w.vehicles) {  // vehicles are sorted by id
        if (v.phase != VehiclePhase::at_line) continue;
        const AgentView view = build_view(w, v, ctx);
        const Action action = decide(v.strategy, view, w.params.utility);
        actions[v.id] = action;
        events.push_back(DecisionEvent{v.id, action});
    }

    // (4) violations
    const std::vector<Violation> violations =
        detect_violations(ctx.effective, actions, ctx.contenders, ctx.ped_holds, tick, w.intersection);
    for (const auto& v : violations) events.push_back(v);

    // Witness positions captured before anyone moves.
    std::vector<WitnessCandidate> witnesses;
    for (const auto& c : ctx.contenders) {
        witnesses.push_back({c.vehicle_id, contender_distance(*w.find_vehicle(c.vehicle_id))});
    }

    // (5) movement
    std::vector<std::pair<std::string, std::vector<Cell>>> footprints;
    std::vector<std::string> entered, exited_now;
    for (auto& v : w.vehicles) {
        if (v.phase == VehiclePhase::at_line) {
            const auto it = actions.find(v.id);
            if (it != actions.end() && it->second == Action::proceed) {
                v.phase = VehiclePhase::crossing;
                v.path_index = 0;
                w.held_since.erase(v.id);
                footprints.emplace_back(v.id, std::vector<Cell>{v.path.front()});
                entered.push_back(v.id);
            }
        } else if (v.phase == VehiclePhase::crossing) {
            footprints.emplace_back(v.id, sweep_this_tick(v));
            v.path_index += 1;
            if (static_cast<size_t>(v.path_index) >= v.path.size()) {
                v.phase = VehiclePhase::exited;
                v.exit_tick = tick;
                exited_now.push_back(v.id);
            }
        }
    }
    // Approaching vehicles advance with queue clamping: no overtaking, one
    // tick-step of headway behind the vehicle ahead on the same approach.
    const double step_m = w.params.speed_mps * w.params.tick_seconds;
    for (const auto& a : w.intersection.approaches) {
        std::vector<VehicleState*> lane;
        bool line_occupied = false;
        for (auto& v : w.vehicles) {
            if (v.approach != a.id) continue;
            if (v.phase == VehiclePhase::approaching) lane.push_back(&v);
            if (v.phase == VehiclePhase::at_line) line_occupied = true;
        }
        std::sort(lane.begin(), lane.end(), [](const VehicleState* x, const VehicleState* y) {
            return std::tie(x->distance_m, x->id) < std::tie(y->distance_m, y->id);
        });
        double ahead = line_occupied ? 0.0 : -step_m;
        for (VehicleState* v : lane) {
            const double moved = std::max(0.0, v->distance_m - step_m);
            v->distance_m = std::max(moved, ahead + step_m);
            if (v->distance_m <= kEps) {
                v->distance_m = 0.0;
                v->phase = VehiclePhase::at_line;
                v->arrival_tick = tick;
                w.held_since[v->id] = tick;
            }
            ahead = v->distance_m;
        }
    }

    // (6) collisions over this tick's swept cells
    const std::vector<CollisionEvent> collisions = detect_collisions(footprints);
    std::set<std::string> crashed;
    for (const auto& c : collisions) crashed.insert(c.vehicles.begin(), c.vehicles.end());
    for (auto& v : w.vehicles) {
        if (crashed.count(v.id) == 0) continue;
        v.phase = VehiclePhase::crashed;
        v.exit_tick.reset();
        w.held_since.erase(v.id);
        w.grants.erase(v.id);
    }
    for (const auto& id : entered) {
        if (crashed.count(id) == 0) events.push_back(EnteredEvent{id});
    }
    for (const auto& id : exited_now) {
        if (crashed.count(id) == 0) events.push_back(ExitedEvent{id});
    }
    for (const auto& c : collisions) events.push_back(c);

    // (7) governance: testimonies, adjudication, sanctions
    std::vector<SanctionRecord> sanctions;
    for (const auto& violation : violations) {
        const auto testimonies =
            collect_testimonies(violation, witnesses, w.params.perception_radius_m);
        for (const auto& t : testimonies) events.push_back(t);
        if (auto sanction = adjudicate(violation, testimonies, w.params.testimony_threshold, w.norms)) {
            sanctions.push_back(std::move(*sanction));
        }
    }
    for (const auto& sanction : sanctions) {
        w.ledger.apply_sanction(sanction);
        events.push_back(sanction);
    }

    // (8) deadlock watchdog
    const int timeout = w.params.deadlock.deadlock_timeout_ticks;
    for (const auto& cycle : detect_normative_deadlock(ctx.effective)) {
        const bool stuck = std::all_of(cycle.begin(), cycle.end(), [&](const std::string& id) {
            const auto it = w.held_since.find(id);
            return it != w.held_since.end() && it->second <= tick - timeout;
        });
        if (!stuck || w.reported_cycles.count(cycle) > 0) continue;
        w.reported_cycles.insert(cycle);
        events.push_back(DeadlockEvent{cycle});
        std::vector<CycleMember> members;
        for (const auto& id : cycle) {
            const VehicleState* v = w.find_vehicle(id);
            members.push_back({id, v->arrival_tick.value_or(0),
                               w.intersection.at(v->approach).bearing_deg});
        }
        if (auto grant = arbitrate_deadlock(members, w.params.deadlock)) {
            w.grants[*grant] = tick;
            events.push_back(GrantEvent{*grant});
        }
    }
    // Suspensions end on exit; a grant whose holder never moved lapses
    // after the timeout so the edges resume.
    for (auto it = w.grants.begin(); it != w.grants.end();) {
        const VehicleState* v = w.find_vehicle(it->first);
        const bool done = v == nullptr || v->terminal();
        const bool lapsed = v != nullptr && v->phase == VehiclePhase::at_line &&
                            tick - it->second >= timeout;
        it = (done || lapsed) ? w.grants.erase(it) : ++it;
    }

    w.tick = tick + 1;
    return events;
}

namespace {

VehicleSnapshot make_snapshot(const VehicleState& v) {
    VehicleSnapshot s;
    s.id = v.id;
    s.phase = v.phase;
    if (v.phase == VehiclePhase::approaching || v.phase == VehiclePhase::at_line) {
        s.distance_m = v.distance_m;
    }
    if (v.phase == VehiclePhase::crossing) {
        s.cell = v.path[static_cast<size_t>(v.path_index)];
    }
    return s;
}

}  // namespace

RunResult run(const Scenario& s) {
    WorldState w = make_world(s);
    RunResult result;
    while (!w.finished()) {
        const int tick = w.tick;
        std::vector<TickEvent> events = step(w);
        TickRecord record;
        record.tick = tick;
        for (const auto& v : w.vehicles) {
            if (v.phase != VehiclePhase::pending) record.vehicles.push_back(make_snapshot(v));
        }
        record.events = std::move(events);
        result.trace.push_back(std::move(record));
    }
    result.ticks_executed = w.tick;
    result.metrics = compute_metrics(w, result.trace);
    result.ledger = w.ledger;
    return result;
}

Metrics compute_metrics(const WorldState& w, const std::vector<TickRecord>& trace) {
    Metrics m;
    for (const auto& record : trace) {
        for (const auto& event : record.events) {
            if (std::holds_alternative<CollisionEvent>(event)) m.collisions += 1;
            if (std::holds_alternative<SanctionRecord>(event)) m.sanctions += 1;
            if (std::holds_alternative<DeadlockEvent>(event)) m.deadlocks += 1;
            if (const auto* violation = std::get_if<Violation>(&event)) {
                m.violations += 1;
                m.per_vehicle[violation->violator].violations += 1;
            }
        }
    }
    const double step_m = w.params.speed_mps * w.params.tick_seconds;
    for (const auto& v : w.vehicles) {
        PerVehicleMetrics& pv = m.per_vehicle[v.id];
        pv.fines = w.ledger.total_fines(v.id);
        pv.reputation = w.ledger.reputation(v.id);
        if (v.phase == VehiclePhase::exited) {
            m.vehicles_exited += 1;
            pv.exit_tick = v.exit_tick;
            const int ideal = v.spawn_tick + ideal_travel_ticks(v.spawn_distance_m, step_m) +
                              static_cast<int>(v.path.size());
            pv.delay_ticks = *v.exit_tick - ideal;
        }
    }
    const double elapsed_s = static_cast<double>(w.tick) * w.params.tick_seconds;
    m.throughput = elapsed_s > 0.0 ? static_cast<double>(m.vehicles_exited) / elapsed_s : 0.0;
    return m;
}

std::string_view to_string(VehiclePhase p) {
    switch (p) {
        case VehiclePhase::pending: return "pending";
        case VehiclePhase::approaching: return "approaching";
        case VehiclePhase::at_line: return "at_line";
        case VehiclePhase::crossing: return "crossing";
        case VehiclePhase::exited: return "exited";
        case VehiclePhase::crashed: return "crashed";
    }
    return "pending";
}

}  // namespace normsim
