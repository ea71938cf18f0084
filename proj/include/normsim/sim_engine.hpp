#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "normsim/governance.hpp"
#include "normsim/norm_engine.hpp"
#include "normsim/scenario.hpp"
#include "normsim/strategies.hpp"

namespace normsim {

enum class VehiclePhase { pending, approaching, at_line, crossing, exited, crashed };

struct VehicleState {
    std::string id;
    std::string approach;
    Maneuver maneuver = Maneuver::straight;
    Strategy strategy = Strategy::social;
    int spawn_tick = 0;
    double spawn_distance_m = 0.0;

    VehiclePhase phase = VehiclePhase::pending;
    double distance_m = 0.0;  // meaningful while approaching (at_line pins it to 0)
    int path_index = 0;       // meaningful while crossing
    std::vector<Cell> path;   // movement_cells, fixed at construction
    std::optional<int> arrival_tick;
    std::optional<int> exit_tick;

    bool terminal() const { return phase == VehiclePhase::exited || phase == VehiclePhase::crashed; }
};

struct DecisionEvent {
    std::string vehicle;
    Action action;
};
struct EnteredEvent {
    std::string vehicle;
};
struct ExitedEvent {
    std::string vehicle;
};
struct CollisionEvent {
    Cell cell;
    std::vector<std::string> vehicles;  // sorted by id
};
struct DeadlockEvent {
    std::vector<std::string> cycle;
};
struct GrantEvent {
    std::string vehicle;
};

// Alternatives are declared in the canonical within-tick order: decisions,
// violations, entries, exits, collisions, testimonies, sanctions, deadlock
// detections, grants.
using TickEvent = std::variant<DecisionEvent, Violation, EnteredEvent, ExitedEvent, CollisionEvent,
                               Testimony, SanctionRecord, DeadlockEvent, GrantEvent>;

struct VehicleSnapshot {
    std::string id;
    VehiclePhase phase = VehiclePhase::pending;
    double distance_m = 0.0;          // approaching / at_line
    std::optional<Cell> cell;         // crossing
};

// One replayable trace entry: post-step state plus the step's events.
struct TickRecord {
    int tick = 0;
    std::vector<VehicleSnapshot> vehicles;  // sorted by id, spawned vehicles only
    std::vector<TickEvent> events;
};

struct WorldState {
    int tick = 0;
    Intersection intersection;
    std::vector<Norm> norms;
    SimParams params;
    std::uint64_t seed = 0;
    std::vector<VehicleState> vehicles;
    std::vector<PedestrianDecl> pedestrians;
    GovernanceLedger ledger;

    std::map<std::string, int> held_since;            // at_line holders -> arrival tick
    std::map<std::string, int> grants;                // granted vehicle -> grant tick
    std::set<std::vector<std::string>> reported_cycles;

    bool finished() const;
    const VehicleState* find_vehicle(const std::string& id) const;
};

struct PerVehicleMetrics {
    std::optional<int> exit_tick;
    std::optional<int> delay_ticks;
    int violations = 0;
    double fines = 0.0;
    int reputation = 0;
};

struct Metrics {
    int collisions = 0;
    int violations = 0;
    int sanctions = 0;
    int deadlocks = 0;
    int vehicles_exited = 0;
    double throughput = 0.0;  // vehicles per second
    std::map<std::string, PerVehicleMetrics> per_vehicle;
};

struct RunResult {
    Metrics metrics;
    std::vector<TickRecord> trace;
    GovernanceLedger ledger;
    int ticks_executed = 0;
};

// Throws E_INVALID_SCENARIO if validation fails.
WorldState make_world(const Scenario& s);

// Advances the world one tick through the canonical phases: spawn,
// precedence, decisions, violations, movement, collisions, governance,
// deadlock watchdog. Reads only pre-tick state for decisions.
// Throws E_FINISHED on a finished world.
std::vector<TickEvent> step(WorldState& w);

// One collision event per cell covered by two or more footprints this tick.
std::vector<CollisionEvent> detect_collisions(
    const std::vector<std::pair<std::string, std::vector<Cell>>>& footprints);

// Steps from tick 0 until every vehicle exited or crashed, or ticks_max.
// Deterministic for a fixed scenario and seed.
RunResult run(const Scenario& s);

// Counters from events, per-vehicle delays against the unimpeded schedule,
// and throughput over the executed ticks.
Metrics compute_metrics(const WorldState& w, const std::vector<TickRecord>& trace);

std::string_view to_string(VehiclePhase p);

}  // namespace normsim
