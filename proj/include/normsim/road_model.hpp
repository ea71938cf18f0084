#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "normsim/errors.hpp"

namespace normsim {

enum class RoadClass { main, secondary };
enum class IntersectionKind { crossing, roundabout };
enum class Maneuver { straight, right, left };

// Quadrants of the junction box. Movement paths are counterclockwise arcs
// over these cells (right-hand traffic), so right/straight/left traverse
// 1/2/3 cells respectively.
enum class Cell { NW, NE, SW, SE };

struct Approach {
    std::string id;
    int bearing_deg = 0;  // compass bearing of the side vehicles enter from: 0=N, 90=E, 180=S, 270=W
    RoadClass road_class = RoadClass::secondary;
};

struct Intersection {
    IntersectionKind kind = IntersectionKind::crossing;
    std::vector<Approach> approaches;

    const Approach* find(std::string_view approach_id) const;
    const Approach* find_bearing(int bearing_deg) const;

    // Throws E_UNKNOWN_APPROACH.
    const Approach& at(std::string_view approach_id) const;
};

// A vehicle's intended way through the junction.
struct Movement {
    std::string approach;
    Maneuver maneuver = Maneuver::straight;
};

// The approach on `approach_id`'s right under right-hand traffic
// (bearing - 90 mod 360), if the intersection has one.
std::optional<std::string> right_of(std::string_view approach_id, const Intersection& x);

// The approach opposite `approach_id` (bearing + 180 mod 360), if present.
std::optional<std::string> opposite_of(std::string_view approach_id, const Intersection& x);

// Compass bearing of the side a maneuver leaves through.
int exit_bearing(int entry_bearing, Maneuver m);

// Quadrant a vehicle entering from `bearing_deg` first occupies.
Cell entry_cell(int bearing_deg);

// Ordered cells a movement traverses: 1 for right, 2 for straight, 3 for left.
// Throws E_NO_EXIT when the exit approach is absent, E_UNKNOWN_APPROACH.
std::vector<Cell> movement_cells(std::string_view approach_id, Maneuver m, const Intersection& x);

// True iff the two movements' cell sets intersect. Symmetric.
// Throws E_SAME_APPROACH (same-approach pairs queue, they do not conflict).
bool conflicts(const Movement& u, const Movement& w, const Intersection& x);

// Checks every type invariant and reports all failures, not just the first.
std::vector<Diagnostic> validate_intersection(const Intersection& x);

std::string_view to_string(RoadClass c);
std::string_view to_string(IntersectionKind k);
std::string_view to_string(Maneuver m);
std::string_view to_string(Cell c);
std::optional<RoadClass> road_class_from_string(std::string_view s);
std::optional<IntersectionKind> kind_from_string(std::string_view s);
std::optional<Maneuver> maneuver_from_string(std::string_view s);

}  // namespace normsim
