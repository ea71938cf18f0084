#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "normsim/norm_engine.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace normsim;

namespace {

const Intersection kFourWay = testutil::four_way();
const std::vector<Norm> kNorms = default_btc_norms();

Contender at_line(std::string id, std::string approach, Maneuver m, int arrival = 5) {
    return Contender{std::move(id), std::move(approach), m, arrival, ContenderPhase::at_line};
}

Contender crossing(std::string id, std::string approach, Maneuver m, int arrival = 5) {
    return Contender{std::move(id), std::move(approach), m, arrival, ContenderPhase::crossing};
}

// PINK heads east on street 1, YELLOW heads north on street 2, RED turns
// left off street 1 — the three-car arrangement used throughout.
const Contender kPink = at_line("PINK", "W", Maneuver::straight);
const Contender kYellow = at_line("YELLOW", "S", Maneuver::straight);
const Contender kRed = at_line("RED", "E", Maneuver::left);

bool has_edge(const PrecedenceGraph& g, const std::string& yielder, const std::string& beneficiary,
              NormId norm) {
    return std::any_of(g.edges.begin(), g.edges.end(), [&](const PrecedenceEdge& e) {
        return e.yielder == yielder && e.beneficiary == beneficiary && e.norm == norm;
    });
}

}  // namespace

TEST_CASE("default_btc_norms carries the four codified rules") {
    REQUIRE(kNorms.size() == 4);
    const Norm* n1 = find_norm(kNorms, NormId::norm1);
    REQUIRE(n1 != nullptr);
    CHECK(n1->article == 29);
    CHECK(n1->rank == 1);
    CHECK(n1->description.find("vehicles moving on main roads have the preference") != std::string::npos);
    CHECK(n1->fine == 100.0);

    const Norm* n3 = find_norm(kNorms, NormId::norm3);
    REQUIRE(n3 != nullptr);
    CHECK(n3->rank == 3);
    CHECK(n3->description.find("vehicles coming from the right have the preference") != std::string::npos);

    const Norm* a38 = find_norm(kNorms, NormId::art38);
    REQUIRE(a38 != nullptr);
    CHECK(a38->article == 38);
    CHECK(a38->description.find("yield to pedestrians, cyclists and vehicles that come from the "
                                "opposite direction") != std::string::npos);

    const Norm* n2 = find_norm(kNorms, NormId::norm2);
    REQUIRE(n2 != nullptr);
    CHECK(n1->rank < n2->rank);
    CHECK(n2->rank < n3->rank);
    for (const auto& n : kNorms) CHECK(n.fine >= 0.0);
}

TEST_CASE("fine_schedule maps occupancy to norm3's fine") {
    auto norms = default_btc_norms();
    for (auto& n : norms) {
        if (n.id == NormId::norm3) n.fine = 77.0;
    }
    const auto fines = fine_schedule(norms);
    CHECK(fines.at(NormId::occupancy) == 77.0);
    CHECK(fines.at(NormId::norm1) == 100.0);
}

TEST_CASE("norm_between: the vehicle on the right has preference") {
    const auto d = norm_between(kPink, kYellow, kFourWay, kNorms);
    REQUIRE(d.has_value());
    CHECK(d->norm == NormId::norm3);
    CHECK(d->direction == YieldDirection::first_yields);  // PINK yields, YELLOW is on its right

    const auto rev = norm_between(kYellow, kPink, kFourWay, kNorms);
    REQUIRE(rev.has_value());
    CHECK(rev->direction == YieldDirection::second_yields);
}

TEST_CASE("norm_between: main road beats the right-hand rule") {
    const Intersection arterial = testutil::four_way(IntersectionKind::crossing,
                                                     RoadClass::secondary, RoadClass::main);
    const Contender side = at_line("SIDE", "N", Maneuver::straight);
    const Contender artery = at_line("ARTERY", "W", Maneuver::straight);
    const auto d = norm_between(side, artery, arterial, kNorms);
    REQUIRE(d.has_value());
    CHECK(d->norm == NormId::norm1);
    CHECK(d->direction == YieldDirection::first_yields);  // secondary yields

    // Same geometry, equal classes: norm3 and the other direction
    // (W is on N's right).
    const auto d3 = norm_between(side, artery, kFourWay, kNorms);
    REQUIRE(d3.has_value());
    CHECK(d3->norm == NormId::norm3);
    CHECK(d3->direction == YieldDirection::first_yields);
}

TEST_CASE("norm1 overrides norm3 even when they disagree on direction") {
    // N-S is the main road. Under norm3 alone N would yield to W (W sits on
    // N's right); norm1 flips it because W is the secondary road.
    const Intersection arterial =
        testutil::four_way(IntersectionKind::crossing, RoadClass::main, RoadClass::secondary);
    const Contender north = at_line("MAIN", "N", Maneuver::straight);
    const Contender west = at_line("SIDE", "W", Maneuver::straight);

    const auto equal_classes = norm_between(north, west, kFourWay, kNorms);
    REQUIRE(equal_classes.has_value());
    CHECK(equal_classes->norm == NormId::norm3);
    CHECK(equal_classes->direction == YieldDirection::first_yields);  // north yields

    const auto main_road = norm_between(north, west, arterial, kNorms);
    REQUIRE(main_road.has_value());
    CHECK(main_road->norm == NormId::norm1);
    CHECK(main_road->direction == YieldDirection::second_yields);  // west yields
}

TEST_CASE("norm_between: turner yields to the oncoming vehicle") {
    const auto d = norm_between(kRed, kPink, kFourWay, kNorms);
    REQUIRE(d.has_value());
    CHECK(d->norm == NormId::art38);
    CHECK(d->direction == YieldDirection::first_yields);  // RED turns, PINK comes head-on
}

TEST_CASE("norm_between: circulating vehicle has preference in a roundabout") {
    const Intersection ra = testutil::four_way(IntersectionKind::roundabout);
    const Contender enterer = at_line("IN", "S", Maneuver::straight, 7);
    const Contender circulating = crossing("LOOP", "W", Maneuver::left, 2);
    const auto d = norm_between(enterer, circulating, ra, kNorms);
    REQUIRE(d.has_value());
    CHECK(d->norm == NormId::norm2);
    CHECK(d->direction == YieldDirection::first_yields);  // the enterer yields

    // Symmetric call: still the enterer.
    const auto rev = norm_between(circulating, enterer, ra, kNorms);
    REQUIRE(rev.has_value());
    CHECK(rev->norm == NormId::norm2);
    CHECK(rev->direction == YieldDirection::second_yields);

    // Neither circulating: falls through to norm3.
    const Contender other = at_line("IN2", "W", Maneuver::left, 7);
    const auto d3 = norm_between(enterer, other, ra, kNorms);
    REQUIRE(d3.has_value());
    CHECK(d3->norm == NormId::norm3);
}

TEST_CASE("norm_between rejects non-conflicting pairs") {
    const Contender east = at_line("A", "E", Maneuver::straight);
    const Contender west = at_line("B", "W", Maneuver::straight);
    CHECK_THROWS_AS((void)norm_between(east, west, kFourWay, kNorms), Error);
}

TEST_CASE("norm_between leaves opposing turners unordered") {
    const Contender a = at_line("A", "W", Maneuver::left);
    const Contender b = at_line("B", "E", Maneuver::left);
    REQUIRE(conflicts(a.movement(), b.movement(), kFourWay));
    CHECK(norm_between(a, b, kFourWay, kNorms) == std::nullopt);
}

TEST_CASE("build_precedence reproduces the three-car yield cycle") {
    const auto g = build_precedence({kPink, kYellow, kRed}, kFourWay, kNorms);
    CHECK(g.nodes == std::set<std::string>{"PINK", "YELLOW", "RED"});
    REQUIRE(g.edges.size() == 3);
    CHECK(has_edge(g, "PINK", "YELLOW", NormId::norm3));
    CHECK(has_edge(g, "YELLOW", "RED", NormId::norm3));
    CHECK(has_edge(g, "RED", "PINK", NormId::art38));
}

TEST_CASE("build_precedence: single contender and disjoint movements") {
    const auto lone = build_precedence({kPink}, kFourWay, kNorms);
    CHECK(lone.nodes.size() == 1);
    CHECK(lone.edges.empty());

    const auto disjoint = build_precedence({at_line("A", "W", Maneuver::straight),
                                            at_line("B", "E", Maneuver::straight)},
                                           kFourWay, kNorms);
    CHECK(disjoint.nodes.size() == 2);
    CHECK(disjoint.edges.empty());
}

TEST_CASE("build_precedence rejects duplicate vehicle ids") {
    CHECK_THROWS_AS((void)build_precedence({kPink, at_line("PINK", "E", Maneuver::left)}, kFourWay, kNorms),
                    Error);
}

TEST_CASE("detect_normative_deadlock finds and normalizes the three-car cycle") {
    const auto g = build_precedence({kPink, kYellow, kRed}, kFourWay, kNorms);
    const auto cycles = detect_normative_deadlock(g);
    REQUIRE(cycles.size() == 1);
    CHECK(cycles[0] == std::vector<std::string>{"PINK", "YELLOW", "RED"});
}

TEST_CASE("detect_normative_deadlock: empty and acyclic graphs") {
    CHECK(detect_normative_deadlock(PrecedenceGraph{}).empty());
    const auto g = build_precedence({kPink, kYellow}, kFourWay, kNorms);
    REQUIRE(g.edges.size() == 1);
    CHECK(detect_normative_deadlock(g).empty());
}

TEST_CASE("four simultaneous straights produce one 4-cycle") {
    const auto g = build_precedence({at_line("CAR_N", "N", Maneuver::straight),
                                     at_line("CAR_E", "E", Maneuver::straight),
                                     at_line("CAR_S", "S", Maneuver::straight),
                                     at_line("CAR_W", "W", Maneuver::straight)},
                                    kFourWay, kNorms);
    REQUIRE(g.edges.size() == 4);
    const auto cycles = detect_normative_deadlock(g);
    REQUIRE(cycles.size() == 1);
    CHECK(cycles[0].size() == 4);
    CHECK(cycles[0] == oracles::brute_force_cycles(g)[0]);
}

TEST_CASE("cycle enumeration matches brute force on random graphs") {
    testutil::Rng rng(0xC1C1E5u);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + rng.below(5);  // up to 6 nodes
        PrecedenceGraph g;
        std::vector<std::string> ids;
        for (int i = 0; i < n; ++i) {
            ids.push_back("V" + std::to_string(i));
            g.nodes.insert(ids.back());
        }
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                if (i != k && rng.below(100) < 30) {
                    g.edges.push_back({ids[static_cast<size_t>(i)], ids[static_cast<size_t>(k)], NormId::norm3});
                }
            }
        }
        CHECK(detect_normative_deadlock(g) == oracles::brute_force_cycles(g));
    }
}

TEST_CASE("detect_violations: rebellious YELLOW against its norm3 edge") {
    const std::vector<Contender> contenders{kPink, kYellow, kRed};
    const auto g = build_precedence(contenders, kFourWay, kNorms);
    const std::map<std::string, Action> actions{
        {"PINK", Action::hold}, {"YELLOW", Action::proceed}, {"RED", Action::hold}};
    const auto violations = detect_violations(g, actions, contenders, {}, 6, kFourWay);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].violator == "YELLOW");
    CHECK(violations[0].norm == NormId::norm3);
    CHECK(violations[0].beneficiary == "RED");
    CHECK(violations[0].tick == 6);
}

TEST_CASE("detect_violations: everyone holds, nothing to report") {
    const std::vector<Contender> contenders{kPink, kYellow, kRed};
    const auto g = build_precedence(contenders, kFourWay, kNorms);
    const std::map<std::string, Action> actions{
        {"PINK", Action::hold}, {"YELLOW", Action::hold}, {"RED", Action::hold}};
    CHECK(detect_violations(g, actions, contenders, {}, 6, kFourWay).empty());
}

TEST_CASE("detect_violations: occupancy breach without a justifying edge") {
    // Opposing left turns conflict but no norm orders them; entering while
    // the other crosses is the reserved occupancy violation.
    const Contender mover = crossing("A", "W", Maneuver::left, 3);
    const Contender enterer = at_line("B", "E", Maneuver::left, 4);
    const std::vector<Contender> contenders{mover, enterer};
    const auto g = build_precedence(contenders, kFourWay, kNorms);
    CHECK(g.edges.empty());
    const auto violations =
        detect_violations(g, {{"B", Action::proceed}}, contenders, {}, 9, kFourWay);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].norm == NormId::occupancy);
    CHECK(violations[0].beneficiary == "A");
}

TEST_CASE("detect_violations: proceeding through a crosswalk hold") {
    const Contender turner = at_line("T", "E", Maneuver::left, 4);
    const std::vector<Contender> contenders{turner};
    const auto g = build_precedence(contenders, kFourWay, kNorms);
    const auto violations = detect_violations(g, {{"T", Action::proceed}}, contenders,
                                              {{"T", "P1"}}, 12, kFourWay);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].norm == NormId::art38);
    CHECK(violations[0].beneficiary == "P1");
}

TEST_CASE("detect_violations rejects actions for unknown vehicles") {
    const auto g = build_precedence({kPink}, kFourWay, kNorms);
    CHECK_THROWS_AS(
        (void)detect_violations(g, {{"GHOST", Action::hold}}, {kPink}, {}, 0, kFourWay), Error);
}

TEST_CASE("randomized structure: edges conflict, norms match geometry, one edge per pair") {
    testutil::Rng rng(0x5EED5u);
    const std::vector<Intersection> worlds{
        testutil::four_way(),
        testutil::four_way(IntersectionKind::crossing, RoadClass::secondary, RoadClass::main),
        testutil::four_way(IntersectionKind::roundabout),
        testutil::three_way(),
    };
    for (int trial = 0; trial < 1000; ++trial) {
        const Intersection& x = worlds[static_cast<size_t>(rng.below(static_cast<int>(worlds.size())))];
        const auto contenders = testutil::random_contenders(rng, x, 2 + rng.below(5));
        const auto g = build_precedence(contenders, x, kNorms);
        const auto errors = testutil::structure_errors(g, contenders, x);
        if (!errors.empty()) {
            CAPTURE(errors.front());
            REQUIRE(errors.empty());
        }
    }
}

TEST_CASE("norm1 is cited whenever classes differ on a conflicting perpendicular pair") {
    testutil::Rng rng(0xA5A5u);
    const Intersection arterial =
        testutil::four_way(IntersectionKind::crossing, RoadClass::secondary, RoadClass::main);
    int seen = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto contenders = testutil::random_contenders(rng, arterial, 2 + rng.below(4));
        const auto g = build_precedence(contenders, arterial, kNorms);
        for (const auto& e : g.edges) {
            const auto yielder = std::find_if(contenders.begin(), contenders.end(),
                                              [&](const Contender& c) { return c.vehicle_id == e.yielder; });
            const auto beneficiary =
                std::find_if(contenders.begin(), contenders.end(),
                             [&](const Contender& c) { return c.vehicle_id == e.beneficiary; });
            if (arterial.at(yielder->approach).road_class !=
                arterial.at(beneficiary->approach).road_class) {
                CHECK(e.norm == NormId::norm1);
                ++seen;
            }
        }
    }
    CHECK(seen > 0);  // the sweep actually exercised mixed-class pairs
}
