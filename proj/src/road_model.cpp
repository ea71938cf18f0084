#include "normsim/road_model.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace normsim {

namespace {

bool orthogonal(int bearing) {
    return bearing == 0 || bearing == 90 || bearing == 180 || bearing == 270;
}

// Counterclockwise successor around the junction box. Every right-hand
// movement is an arc of this cycle starting at its entry cell.
Cell ccw_next(Cell c) {
    switch (c) {
        case Cell::SW: return Cell::SE;
        case Cell::SE: return Cell::NE;
        case Cell::NE: return Cell::NW;
        case Cell::NW: return Cell::SW;
    }
    return Cell::SW;
}

int path_length(Maneuver m) {
    switch (m) {
        case Maneuver::right: return 1;
        case Maneuver::straight: return 2;
        case Maneuver::left: return 3;
    }
    return 0;
}

}  // namespace

const Approach* Intersection::find(std::string_view approach_id) const {
    for (const auto& a : approaches) {
        if (a.id == approach_id) return &a;
    }
    return nullptr;
}

const Approach* Intersection::find_bearing(int bearing_deg) const {
    for (const auto& a : approaches) {
        if (a.bearing_deg == bearing_deg) return &a;
    }
    return nullptr;
}

const Approach& Intersection::at(std::string_view approach_id) const {
    const Approach* a = find(approach_id);
    if (a == nullptr) {
        throw Error(ErrorCode::E_UNKNOWN_APPROACH, "no approach '" + std::string(approach_id) + "'");
    }
    return *a;
}

std::optional<std::string> right_of(std::string_view approach_id, const Intersection& x) {
    const Approach& a = x.at(approach_id);
    const Approach* r = x.find_bearing((a.bearing_deg + 270) % 360);
    if (r == nullptr) return std::nullopt;
    return r->id;
}

std::optional<std::string> opposite_of(std::string_view approach_id, const Intersection& x) {
    const Approach& a = x.at(approach_id);
    const Approach* o = x.find_bearing((a.bearing_deg + 180) % 360);
    if (o == nullptr) return std::nullopt;
    return o->id;
}

int exit_bearing(int entry_bearing, Maneuver m) {
    switch (m) {
        case Maneuver::straight: return (entry_bearing + 180) % 360;
        case Maneuver::right: return (entry_bearing + 270) % 360;
        case Maneuver::left: return (entry_bearing + 90) % 360;
    }
    return entry_bearing;
}

Cell entry_cell(int bearing_deg) {
    // Right-hand-lane quadrant of the side the vehicle enters from.
    switch (bearing_deg) {
        case 0: return Cell::NW;
        case 90: return Cell::NE;
        case 180: return Cell::SE;
        case 270: return Cell::SW;
    }
    throw Error(ErrorCode::E_BAD_BEARING, "bearing " + std::to_string(bearing_deg));
}

std::vector<Cell> movement_cells(std::string_view approach_id, Maneuver m, const Intersection& x) {
    const Approach& a = x.at(approach_id);
    if (x.find_bearing(exit_bearing(a.bearing_deg, m)) == nullptr) {
        throw Error(ErrorCode::E_NO_EXIT, "maneuver " + std::string(to_string(m)) + " from '" +
                                              a.id + "' has no exit approach");
    }
    std::vector<Cell> cells;
    Cell c = entry_cell(a.bearing_deg);
    for (int i = 0; i < path_length(m); ++i) {
        cells.push_back(c);
        c = ccw_next(c);
    }
    return cells;
}

bool conflicts(const Movement& u, const Movement& w, const Intersection& x) {
    if (u.approach == w.approach) {
        throw Error(ErrorCode::E_SAME_APPROACH,
                    "movements from '" + u.approach + "' queue, they do not conflict");
    }
    const auto cu = movement_cells(u.approach, u.maneuver, x);
    const auto cw = movement_cells(w.approach, w.maneuver, x);
    for (Cell a : cu) {
        if (std::find(cw.begin(), cw.end(), a) != cw.end()) return true;
    }
    return false;
}

std::vector<Diagnostic> validate_intersection(const Intersection& x) {
    std::vector<Diagnostic> out;
    const size_t n = x.approaches.size();
    if (n < 2 || n > 4) {
        out.push_back({ErrorCode::E_APPROACH_COUNT, "/intersection/approaches",
                       "expected 2-4 approaches, got " + std::to_string(n)});
    }
    std::set<std::string> ids;
    std::set<int> bearings;
    for (size_t i = 0; i < n; ++i) {
        const Approach& a = x.approaches[i];
        const std::string path = "/intersection/approaches/" + std::to_string(i);
        if (!ids.insert(a.id).second) {
            out.push_back({ErrorCode::E_DUP_ID, path + "/id", "duplicate approach id '" + a.id + "'"});
        }
        if (!orthogonal(a.bearing_deg)) {
            out.push_back({ErrorCode::E_BAD_BEARING, path + "/bearing_deg",
                           "bearing must be one of 0, 90, 180, 270"});
        } else if (!bearings.insert(a.bearing_deg).second) {
            out.push_back({ErrorCode::E_DUP_BEARING, path + "/bearing_deg",
                           "duplicate bearing " + std::to_string(a.bearing_deg)});
        }
        if (x.kind == IntersectionKind::roundabout && a.road_class == RoadClass::main) {
            out.push_back({ErrorCode::E_ROUNDABOUT_CLASS, path + "/road_class",
                           "roundabout approaches must all be secondary"});
        }
    }
    // Opposite approaches form one road and must share a class.
    for (const auto& a : x.approaches) {
        if (!orthogonal(a.bearing_deg) || a.bearing_deg >= 180) continue;
        const Approach* o = x.find_bearing(a.bearing_deg + 180);
        if (o != nullptr && o->road_class != a.road_class) {
            out.push_back({ErrorCode::E_ROAD_CLASS_MISMATCH, "/intersection/approaches",
                           "approaches '" + a.id + "' and '" + o->id +
                               "' are opposite but differ in road class"});
        }
    }
    return out;
}

std::string_view to_string(RoadClass c) {
    return c == RoadClass::main ? "main" : "secondary";
}

std::string_view to_string(IntersectionKind k) {
    return k == IntersectionKind::crossing ? "crossing" : "roundabout";
}

std::string_view to_string(Maneuver m) {
    switch (m) {
        case Maneuver::straight: return "straight";
        case Maneuver::right: return "right";
        case Maneuver::left: return "left";
    }
    return "straight";
}

std::string_view to_string(Cell c) {
    switch (c) {
        case Cell::NW: return "NW";
        case Cell::NE: return "NE";
        case Cell::SW: return "SW";
        case Cell::SE: return "SE";
    }
    return "NW";
}

std::optional<RoadClass> road_class_from_string(std::string_view s) {
    if (s == "main") return RoadClass::main;
    if (s == "secondary") return RoadClass::secondary;
    return std::nullopt;
}

std::optional<IntersectionKind> kind_from_string(std::string_view s) {
    if (s == "crossing") return IntersectionKind::crossing;
    if (s == "roundabout") return IntersectionKind::roundabout;
    return std::nullopt;
}

std::optional<Maneuver> maneuver_from_string(std::string_view s) {
    if (s == "straight") return Maneuver::straight;
    if (s == "right") return Maneuver::right;
    if (s == "left") return Maneuver::left;
    return std::nullopt;
}

}  // namespace normsim
