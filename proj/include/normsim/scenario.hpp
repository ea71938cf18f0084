#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "normsim/governance.hpp"
#include "normsim/road_model.hpp"
#include "normsim/strategies.hpp"

namespace normsim {

struct VehicleDecl {
    std::string id;
    std::string approach;
    Maneuver maneuver = Maneuver::straight;
    int spawn_tick = 0;
    double spawn_distance_m = 30.0;  // > 0
    Strategy strategy = Strategy::social;
};

struct PedestrianDecl {
    std::string id;
    std::string approach;  // the road edge it crosses
    int start_tick = 0;
    int duration_ticks = 1;  // >= 1
};

// World-evolution knobs. All defaults overridable per scenario file.
struct SimParams {
    double tick_seconds = 0.5;
    double speed_mps = 10.0;
    double decision_zone_m = 30.0;
    UtilityParams utility;
    int testimony_threshold = 1;
    double perception_radius_m = 50.0;
    DeadlockPolicy deadlock;
    int ticks_max = 200;
};

// Declarative simulation input: geometry, norms, vehicles, pedestrians.
struct Scenario {
    std::string name;
    std::uint64_t seed = 0;
    Intersection intersection;
    SimParams params;
    std::vector<VehicleDecl> vehicles;
    std::vector<PedestrianDecl> pedestrians;
    std::map<NormId, double> fine_overrides;
};

struct ParseResult {
    std::optional<Scenario> scenario;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return scenario.has_value() && diagnostics.empty(); }
};

// Parses the JSON scenario document, fills defaults, and runs all semantic
// checks (intersection invariants included), reporting every failure.
ParseResult parse_scenario(const std::string& text);

// parse_scenario over a file; unreadable files yield an E_IO diagnostic.
ParseResult load_scenario_file(const std::string& path);

// All semantic checks on an already-built Scenario value.
std::vector<Diagnostic> validate_scenario(const Scenario& s);

// Canonical re-serialization; parse(write_scenario(s)) reproduces s.
std::string write_scenario(const Scenario& s);

// The BTC norms with this scenario's fine overrides applied.
std::vector<Norm> scenario_norms(const Scenario& s);

}  // namespace normsim
