#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "normsim/road_model.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace normsim;

namespace {

const Intersection kFourWay = testutil::four_way();
const Intersection kThreeWay = testutil::three_way();

std::vector<Movement> all_movements(const Intersection& x) {
    std::vector<Movement> out;
    for (const auto& a : x.approaches) {
        for (Maneuver m : {Maneuver::straight, Maneuver::right, Maneuver::left}) {
            out.push_back({a.id, m});
        }
    }
    return out;
}

}  // namespace

TEST_CASE("right_of follows the bearing arithmetic") {
    CHECK(right_of("W", kFourWay) == "S");
    CHECK(right_of("S", kFourWay) == "E");
    CHECK(right_of("E", kFourWay) == "N");
    CHECK(right_of("N", kFourWay) == "W");
    CHECK(right_of("E", kThreeWay) == std::nullopt);  // N absent
    CHECK_THROWS_AS((void)right_of("X", kFourWay), Error);
}

TEST_CASE("opposite_of pairs the facing approaches") {
    CHECK(opposite_of("W", kFourWay) == "E");
    CHECK(opposite_of("N", kFourWay) == "S");
    CHECK(opposite_of("S", kThreeWay) == std::nullopt);
    CHECK_THROWS_AS((void)opposite_of("X", kFourWay), Error);
}

TEST_CASE("right_of cycles over a 4-way and stays injective") {
    std::vector<std::string> seen;
    std::string a = "W";
    for (int i = 0; i < 4; ++i) {
        const auto r = right_of(a, kFourWay);
        REQUIRE(r.has_value());
        seen.push_back(*r);
        a = *r;
    }
    CHECK(a == "W");
    std::sort(seen.begin(), seen.end());
    CHECK(std::unique(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("movement_cells produces the quadrant arcs") {
    CHECK(movement_cells("W", Maneuver::straight, kFourWay) == std::vector<Cell>{Cell::SW, Cell::SE});
    CHECK(movement_cells("W", Maneuver::right, kFourWay) == std::vector<Cell>{Cell::SW});
    CHECK(movement_cells("E", Maneuver::left, kFourWay) ==
          std::vector<Cell>{Cell::NE, Cell::NW, Cell::SW});
    CHECK_THROWS_AS((void)movement_cells("W", Maneuver::left, kThreeWay), Error);  // exit N absent
}

TEST_CASE("movement path lengths are 1/2/3 for right/straight/left") {
    for (const auto& m : all_movements(kFourWay)) {
        const auto cells = movement_cells(m.approach, m.maneuver, kFourWay);
        const size_t expected = m.maneuver == Maneuver::right ? 1 : m.maneuver == Maneuver::straight ? 2 : 3;
        CHECK(cells.size() == expected);
    }
}

TEST_CASE("movement_cells matches the continuous-geometry oracle, in order") {
    for (const auto& m : all_movements(kFourWay)) {
        const auto cells = movement_cells(m.approach, m.maneuver, kFourWay);
        const auto sampled = oracles::sampled_cells(kFourWay.at(m.approach).bearing_deg, m.maneuver);
        CHECK(cells == sampled);
    }
}

TEST_CASE("conflicts: named pairs") {
    CHECK(conflicts({"W", Maneuver::straight}, {"S", Maneuver::straight}, kFourWay));   // share SE
    CHECK_FALSE(conflicts({"W", Maneuver::straight}, {"E", Maneuver::straight}, kFourWay));
    CHECK(conflicts({"E", Maneuver::left}, {"W", Maneuver::straight}, kFourWay));       // share SW
    CHECK_THROWS_AS((void)conflicts({"W", Maneuver::left}, {"W", Maneuver::right}, kFourWay), Error);
}

TEST_CASE("conflicts agrees with the sampled-path oracle on all 144 ordered pairs") {
    const auto movements = all_movements(kFourWay);
    REQUIRE(movements.size() == 12);
    int checked = 0;
    for (const auto& u : movements) {
        for (const auto& w : movements) {
            if (u.approach == w.approach) continue;
            CHECK(conflicts(u, w, kFourWay) == oracles::sampled_conflict(u, w, kFourWay));
            ++checked;
        }
    }
    CHECK(checked == 108);  // 144 ordered pairs minus the 36 same-approach ones
}

TEST_CASE("conflicts is symmetric") {
    const auto movements = all_movements(kFourWay);
    for (const auto& u : movements) {
        for (const auto& w : movements) {
            if (u.approach == w.approach) continue;
            CHECK(conflicts(u, w, kFourWay) == conflicts(w, u, kFourWay));
        }
    }
}

TEST_CASE("structural conflict facts on the 4-way") {
    // Opposite straights never conflict.
    CHECK_FALSE(conflicts({"N", Maneuver::straight}, {"S", Maneuver::straight}, kFourWay));
    CHECK_FALSE(conflicts({"E", Maneuver::straight}, {"W", Maneuver::straight}, kFourWay));
    // Perpendicular straights always conflict.
    for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
             {"N", "E"}, {"E", "S"}, {"S", "W"}, {"W", "N"}}) {
        CHECK(conflicts({a, Maneuver::straight}, {b, Maneuver::straight}, kFourWay));
    }
    // A left turn always conflicts with the oncoming straight.
    for (const auto& a : kFourWay.approaches) {
        const auto opp = opposite_of(a.id, kFourWay);
        REQUIRE(opp.has_value());
        CHECK(conflicts({a.id, Maneuver::left}, {*opp, Maneuver::straight}, kFourWay));
        // ... and a right turn never does (disjoint quadrants).
        CHECK_FALSE(conflicts({a.id, Maneuver::right}, {*opp, Maneuver::straight}, kFourWay));
    }
}

TEST_CASE("validate_intersection reports every failure") {
    CHECK(validate_intersection(kFourWay).empty());

    Intersection dup{IntersectionKind::crossing,
                     {{"A", 90, RoadClass::secondary}, {"B", 90, RoadClass::secondary}}};
    auto diags = validate_intersection(dup);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == ErrorCode::E_DUP_BEARING);

    Intersection mismatch = testutil::four_way();
    mismatch.approaches[3].road_class = RoadClass::main;  // W main, E secondary
    diags = validate_intersection(mismatch);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == ErrorCode::E_ROAD_CLASS_MISMATCH);

    Intersection skewed{IntersectionKind::crossing,
                        {{"A", 45, RoadClass::secondary}, {"B", 180, RoadClass::secondary}}};
    diags = validate_intersection(skewed);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == ErrorCode::E_BAD_BEARING);

    Intersection ra = testutil::four_way(IntersectionKind::roundabout, RoadClass::main, RoadClass::main);
    diags = validate_intersection(ra);
    CHECK(diags.size() == 4);
    for (const auto& d : diags) CHECK(d.code == ErrorCode::E_ROUNDABOUT_CLASS);

    Intersection lonely{IntersectionKind::crossing, {{"A", 0, RoadClass::secondary}}};
    diags = validate_intersection(lonely);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == ErrorCode::E_APPROACH_COUNT);
}
