#include "normsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace normsim {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct Parser {
    std::vector<Diagnostic>& diags;

    void fail(ErrorCode code, const std::string& path, const std::string& message) {
        diags.push_back({code, path, message});
    }

    void check_fields(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
        for (const auto& [key, value] : obj.items()) {
            (void)value;
            if (allowed.count(key) == 0) {
                fail(ErrorCode::E_UNKNOWN_FIELD, path + "/" + key, "unknown field '" + key + "'");
            }
        }
    }

    bool require_object(const json& j, const std::string& path) {
        if (j.is_object()) return true;
        fail(ErrorCode::E_PARSE, path, "expected an object");
        return false;
    }

    std::string get_string(const json& obj, const std::string& path, const std::string& key,
                           const std::string& fallback, bool required) {
        if (!obj.contains(key)) {
            if (required) fail(ErrorCode::E_PARSE, path + "/" + key, "missing required field");
            return fallback;
        }
        if (!obj[key].is_string()) {
            fail(ErrorCode::E_PARSE, path + "/" + key, "expected a string");
            return fallback;
        }
        return obj[key].get<std::string>();
    }

    double get_number(const json& obj, const std::string& path, const std::string& key,
                      double fallback, bool required = false) {
        if (!obj.contains(key)) {
            if (required) fail(ErrorCode::E_PARSE, path + "/" + key, "missing required field");
            return fallback;
        }
        if (!obj[key].is_number()) {
            fail(ErrorCode::E_PARSE, path + "/" + key, "expected a number");
            return fallback;
        }
        return obj[key].get<double>();
    }

    int get_int(const json& obj, const std::string& path, const std::string& key, int fallback,
                bool required = false) {
        if (!obj.contains(key)) {
            if (required) fail(ErrorCode::E_PARSE, path + "/" + key, "missing required field");
            return fallback;
        }
        if (!obj[key].is_number_integer()) {
            fail(ErrorCode::E_PARSE, path + "/" + key, "expected an integer");
            return fallback;
        }
        return obj[key].get<int>();
    }

    bool get_bool(const json& obj, const std::string& path, const std::string& key, bool fallback) {
        if (!obj.contains(key)) return fallback;
        if (!obj[key].is_boolean()) {
            fail(ErrorCode::E_PARSE, path + "/" + key, "expected a boolean");
            return fallback;
        }
        return obj[key].get<bool>();
    }
};

Intersection parse_intersection(const json& j, Parser& p) {
    Intersection x;
    if (!p.require_object(j, "/intersection")) return x;
    p.check_fields(j, "/intersection", {"kind", "approaches"});
    const std::string kind = p.get_string(j, "/intersection", "kind", "crossing", false);
    if (auto k = kind_from_string(kind)) {
        x.kind = *k;
    } else {
        p.fail(ErrorCode::E_BAD_KIND, "/intersection/kind", "unknown kind '" + kind + "'");
    }
    if (!j.contains("approaches") || !j["approaches"].is_array()) {
        p.fail(ErrorCode::E_PARSE, "/intersection/approaches", "expected an array of approaches");
        return x;
    }
    size_t i = 0;
    for (const auto& aj : j["approaches"]) {
        const std::string path = "/intersection/approaches/" + std::to_string(i++);
        if (!p.require_object(aj, path)) continue;
        p.check_fields(aj, path, {"id", "bearing_deg", "road_class"});
        Approach a;
        a.id = p.get_string(aj, path, "id", "", true);
        a.bearing_deg = p.get_int(aj, path, "bearing_deg", 0, true);
        const std::string cls = p.get_string(aj, path, "road_class", "secondary", false);
        if (auto c = road_class_from_string(cls)) {
            a.road_class = *c;
        } else {
            p.fail(ErrorCode::E_BAD_ROAD_CLASS, path + "/road_class", "unknown road class '" + cls + "'");
        }
        x.approaches.push_back(std::move(a));
    }
    return x;
}

SimParams parse_params(const json& j, Parser& p) {
    SimParams params;
    if (j.is_null()) return params;
    if (!p.require_object(j, "/params")) return params;
    p.check_fields(j, "/params",
                   {"tick_seconds", "speed_mps", "decision_zone_m", "time_value_per_s",
                    "safety_reflex", "testimony_threshold", "perception_radius_m",
                    "deadlock_policy", "deadlock_timeout_ticks"});
    params.tick_seconds = p.get_number(j, "/params", "tick_seconds", params.tick_seconds);
    params.speed_mps = p.get_number(j, "/params", "speed_mps", params.speed_mps);
    params.decision_zone_m = p.get_number(j, "/params", "decision_zone_m", params.decision_zone_m);
    params.utility.time_value_per_s =
        p.get_number(j, "/params", "time_value_per_s", params.utility.time_value_per_s);
    params.utility.safety_reflex = p.get_bool(j, "/params", "safety_reflex", false);
    params.testimony_threshold =
        p.get_int(j, "/params", "testimony_threshold", params.testimony_threshold);
    params.perception_radius_m =
        p.get_number(j, "/params", "perception_radius_m", params.perception_radius_m);
    const std::string policy = p.get_string(j, "/params", "deadlock_policy", "none", false);
    if (auto k = policy_from_string(policy)) {
        params.deadlock.kind = *k;
    } else {
        p.fail(ErrorCode::E_BAD_PARAM, "/params/deadlock_policy", "unknown policy '" + policy + "'");
    }
    params.deadlock.deadlock_timeout_ticks =
        p.get_int(j, "/params", "deadlock_timeout_ticks", params.deadlock.deadlock_timeout_ticks);
    return params;
}

std::vector<VehicleDecl> parse_vehicles(const json& j, Parser& p) {
    std::vector<VehicleDecl> out;
    if (!j.is_array()) {
        p.fail(ErrorCode::E_PARSE, "/vehicles", "expected an array of vehicles");
        return out;
    }
    size_t i = 0;
    for (const auto& vj : j) {
        const std::string path = "/vehicles/" + std::to_string(i++);
        if (!p.require_object(vj, path)) continue;
        p.check_fields(vj, path,
                       {"id", "approach", "maneuver", "spawn_tick", "spawn_distance_m", "strategy"});
        VehicleDecl v;
        v.id = p.get_string(vj, path, "id", "", true);
        v.approach = p.get_string(vj, path, "approach", "", true);
        const std::string maneuver = p.get_string(vj, path, "maneuver", "straight", false);
        if (auto m = maneuver_from_string(maneuver)) {
            v.maneuver = *m;
        } else {
            p.fail(ErrorCode::E_BAD_MANEUVER, path + "/maneuver", "unknown maneuver '" + maneuver + "'");
        }
        v.spawn_tick = p.get_int(vj, path, "spawn_tick", 0);
        v.spawn_distance_m = p.get_number(vj, path, "spawn_distance_m", 30.0);
        const std::string strategy = p.get_string(vj, path, "strategy", "social", false);
        if (auto s = strategy_from_string(strategy)) {
            v.strategy = *s;
        } else {
            p.fail(ErrorCode::E_BAD_STRATEGY, path + "/strategy", "unknown strategy '" + strategy + "'");
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<PedestrianDecl> parse_pedestrians(const json& j, Parser& p) {
    std::vector<PedestrianDecl> out;
    if (j.is_null()) return out;
    if (!j.is_array()) {
        p.fail(ErrorCode::E_PARSE, "/pedestrians", "expected an array of pedestrians");
        return out;
    }
    size_t i = 0;
    for (const auto& pj : j) {
        const std::string path = "/pedestrians/" + std::to_string(i++);
        if (!p.require_object(pj, path)) continue;
        p.check_fields(pj, path, {"id", "approach", "start_tick", "duration_ticks"});
        PedestrianDecl d;
        d.id = p.get_string(pj, path, "id", "", true);
        d.approach = p.get_string(pj, path, "approach", "", true);
        d.start_tick = p.get_int(pj, path, "start_tick", 0);
        d.duration_ticks = p.get_int(pj, path, "duration_ticks", 1);
        out.push_back(std::move(d));
    }
    return out;
}

std::map<NormId, double> parse_fines(const json& j, Parser& p) {
    std::map<NormId, double> out;
    if (j.is_null()) return out;
    if (!j.is_object()) {
        p.fail(ErrorCode::E_PARSE, "/norms", "expected an object mapping norm ids to fines");
        return out;
    }
    for (const auto& [key, value] : j.items()) {
        const std::string path = "/norms/" + key;
        const auto id = norm_from_string(key);
        if (!id || *id == NormId::occupancy) {
            p.fail(ErrorCode::E_UNKNOWN_NORM, path, "unknown norm id '" + key + "'");
            continue;
        }
        if (!value.is_number()) {
            p.fail(ErrorCode::E_PARSE, path, "expected a number");
            continue;
        }
        out[*id] = value.get<double>();
    }
    return out;
}

}  // namespace

ParseResult parse_scenario(const std::string& text) {
    ParseResult result;
    const json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
        result.diagnostics.push_back({ErrorCode::E_PARSE, "", "malformed JSON document"});
        return result;
    }
    Parser p{result.diagnostics};
    if (!p.require_object(doc, "")) return result;
    p.check_fields(doc, "",
                   {"name", "seed", "ticks_max", "intersection", "params", "vehicles",
                    "pedestrians", "norms"});

    Scenario s;
    s.name = p.get_string(doc, "", "name", "", false);
    if (doc.contains("seed")) {
        if (doc["seed"].is_number_unsigned() || (doc["seed"].is_number_integer() && doc["seed"].get<long long>() >= 0)) {
            s.seed = doc["seed"].get<std::uint64_t>();
        } else {
            p.fail(ErrorCode::E_PARSE, "/seed", "expected a non-negative integer");
        }
    }
    if (!doc.contains("intersection")) {
        p.fail(ErrorCode::E_PARSE, "/intersection", "missing required field");
    } else {
        s.intersection = parse_intersection(doc["intersection"], p);
    }
    s.params = parse_params(doc.contains("params") ? doc["params"] : json(), p);
    s.params.ticks_max = p.get_int(doc, "", "ticks_max", s.params.ticks_max);
    if (!doc.contains("vehicles")) {
        p.fail(ErrorCode::E_PARSE, "/vehicles", "missing required field");
    } else {
        s.vehicles = parse_vehicles(doc["vehicles"], p);
    }
    s.pedestrians = parse_pedestrians(doc.contains("pedestrians") ? doc["pedestrians"] : json(), p);
    s.fine_overrides = parse_fines(doc.contains("norms") ? doc["norms"] : json(), p);

    if (result.diagnostics.empty()) {
        const auto semantic = validate_scenario(s);
        result.diagnostics.insert(result.diagnostics.end(), semantic.begin(), semantic.end());
    }
    if (result.diagnostics.empty()) result.scenario = std::move(s);
    return result;
}

std::vector<Diagnostic> validate_scenario(const Scenario& s) {
    std::vector<Diagnostic> out = validate_intersection(s.intersection);

    const auto bad_param = [&](const std::string& field, const std::string& message) {
        out.push_back({ErrorCode::E_BAD_PARAM, "/params/" + field, message});
    };
    if (s.params.tick_seconds <= 0.0) bad_param("tick_seconds", "must be > 0");
    if (s.params.speed_mps <= 0.0) bad_param("speed_mps", "must be > 0");
    if (s.params.decision_zone_m < 0.0) bad_param("decision_zone_m", "must be >= 0");
    if (s.params.utility.time_value_per_s < 0.0) bad_param("time_value_per_s", "must be >= 0");
    if (s.params.testimony_threshold < 0) bad_param("testimony_threshold", "must be >= 0");
    if (s.params.perception_radius_m < 0.0) bad_param("perception_radius_m", "must be >= 0");
    if (s.params.deadlock.deadlock_timeout_ticks < 1) bad_param("deadlock_timeout_ticks", "must be >= 1");
    if (s.params.ticks_max < 1) {
        out.push_back({ErrorCode::E_BAD_PARAM, "/ticks_max", "must be >= 1"});
    }

    std::set<std::string> vehicle_ids;
    for (size_t i = 0; i < s.vehicles.size(); ++i) {
        const VehicleDecl& v = s.vehicles[i];
        const std::string path = "/vehicles/" + std::to_string(i);
        if (!vehicle_ids.insert(v.id).second) {
            out.push_back({ErrorCode::E_DUP_ID, path + "/id", "duplicate vehicle id '" + v.id + "'"});
        }
        const Approach* a = s.intersection.find(v.approach);
        if (a == nullptr) {
            out.push_back({ErrorCode::E_UNKNOWN_APPROACH, path + "/approach",
                           "unknown approach '" + v.approach + "'"});
        } else if (s.intersection.find_bearing(exit_bearing(a->bearing_deg, v.maneuver)) == nullptr) {
            out.push_back({ErrorCode::E_NO_EXIT, path + "/maneuver",
                           "maneuver " + std::string(to_string(v.maneuver)) + " from '" + v.approach +
                               "' has no exit approach"});
        }
        if (v.spawn_distance_m <= 0.0) {
            out.push_back({ErrorCode::E_BAD_SPAWN, path + "/spawn_distance_m", "must be > 0"});
        }
        if (v.spawn_tick < 0) {
            out.push_back({ErrorCode::E_BAD_SPAWN, path + "/spawn_tick", "must be >= 0"});
        }
        for (size_t k = 0; k < i; ++k) {
            const VehicleDecl& other = s.vehicles[k];
            if (other.approach == v.approach && other.spawn_tick == v.spawn_tick &&
                other.spawn_distance_m == v.spawn_distance_m) {
                out.push_back({ErrorCode::E_SPAWN_OVERLAP, path,
                               "vehicles '" + other.id + "' and '" + v.id +
                                   "' spawn at the same position and tick"});
            }
        }
    }

    std::set<std::string> ped_ids;
    for (size_t i = 0; i < s.pedestrians.size(); ++i) {
        const PedestrianDecl& d = s.pedestrians[i];
        const std::string path = "/pedestrians/" + std::to_string(i);
        if (!ped_ids.insert(d.id).second) {
            out.push_back({ErrorCode::E_DUP_ID, path + "/id", "duplicate pedestrian id '" + d.id + "'"});
        }
        if (s.intersection.find(d.approach) == nullptr) {
            out.push_back({ErrorCode::E_UNKNOWN_APPROACH, path + "/approach",
                           "unknown approach '" + d.approach + "'"});
        }
        if (d.duration_ticks < 1) {
            out.push_back({ErrorCode::E_BAD_DURATION, path + "/duration_ticks", "must be >= 1"});
        }
        if (d.start_tick < 0) {
            out.push_back({ErrorCode::E_BAD_DURATION, path + "/start_tick", "must be >= 0"});
        }
    }

    for (const auto& [id, fine] : s.fine_overrides) {
        if (fine < 0.0) {
            out.push_back({ErrorCode::E_BAD_FINE, "/norms/" + std::string(to_string(id)),
                           "fine must be >= 0"});
        }
    }
    return out;
}

std::string write_scenario(const Scenario& s) {
    ordered_json doc;
    doc["name"] = s.name;
    doc["seed"] = s.seed;
    doc["ticks_max"] = s.params.ticks_max;
    ordered_json xj;
    xj["kind"] = std::string(to_string(s.intersection.kind));
    xj["approaches"] = ordered_json::array();
    for (const auto& a : s.intersection.approaches) {
        xj["approaches"].push_back({{"id", a.id},
                                    {"bearing_deg", a.bearing_deg},
                                    {"road_class", std::string(to_string(a.road_class))}});
    }
    doc["intersection"] = std::move(xj);
    doc["params"] = {
        {"tick_seconds", s.params.tick_seconds},
        {"speed_mps", s.params.speed_mps},
        {"decision_zone_m", s.params.decision_zone_m},
        {"time_value_per_s", s.params.utility.time_value_per_s},
        {"safety_reflex", s.params.utility.safety_reflex},
        {"testimony_threshold", s.params.testimony_threshold},
        {"perception_radius_m", s.params.perception_radius_m},
        {"deadlock_policy", std::string(to_string(s.params.deadlock.kind))},
        {"deadlock_timeout_ticks", s.params.deadlock.deadlock_timeout_ticks},
    };
    doc["vehicles"] = ordered_json::array();
    for (const auto& v : s.vehicles) {
        doc["vehicles"].push_back({{"id", v.id},
                                   {"approach", v.approach},
                                   {"maneuver", std::string(to_string(v.maneuver))},
                                   {"spawn_tick", v.spawn_tick},
                                   {"spawn_distance_m", v.spawn_distance_m},
                                   {"strategy", std::string(to_string(v.strategy))}});
    }
    doc["pedestrians"] = ordered_json::array();
    for (const auto& p : s.pedestrians) {
        doc["pedestrians"].push_back({{"id", p.id},
                                      {"approach", p.approach},
                                      {"start_tick", p.start_tick},
                                      {"duration_ticks", p.duration_ticks}});
    }
    doc["norms"] = ordered_json::object();
    for (const auto& [id, fine] : s.fine_overrides) {
        doc["norms"][std::string(to_string(id))] = fine;
    }
    return doc.dump(2) + "\n";
}

ParseResult load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ParseResult result;
        result.diagnostics.push_back({ErrorCode::E_IO, path, "cannot read file"});
        return result;
    }
    std::ostringstream text;
    text << in.rdbuf();
    ParseResult result = parse_scenario(text.str());
    // Unnamed scenarios take their file stem so batch summaries stay readable.
    if (result.scenario && result.scenario->name.empty()) {
        std::string stem = path;
        if (const auto slash = stem.find_last_of("/\\"); slash != std::string::npos) {
            stem = stem.substr(slash + 1);
        }
        if (const auto dot = stem.find_last_of('.'); dot != std::string::npos) {
            stem = stem.substr(0, dot);
        }
        result.scenario->name = stem;
    }
    return result;
}

std::vector<Norm> scenario_norms(const Scenario& s) {
    std::vector<Norm> norms = default_btc_norms();
    for (auto& n : norms) {
        const auto it = s.fine_overrides.find(n.id);
        if (it != s.fine_overrides.end()) n.fine = it->second;
    }
    return norms;
}

}  // namespace normsim
