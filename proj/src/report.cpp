#include "normsim/report.hpp"

#include <sstream>

#include <json.hpp>

namespace normsim {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json event_json(const TickEvent& event) {
    ordered_json j;
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, DecisionEvent>) {
                j["type"] = "decision";
                j["vehicle"] = e.vehicle;
                j["action"] = std::string(to_string(e.action));
            } else if constexpr (std::is_same_v<T, Violation>) {
                j["type"] = "violation";
                j["violator"] = e.violator;
                j["norm"] = std::string(to_string(e.norm));
                if (e.beneficiary) j["beneficiary"] = *e.beneficiary;
            } else if constexpr (std::is_same_v<T, EnteredEvent>) {
                j["type"] = "entered";
                j["vehicle"] = e.vehicle;
            } else if constexpr (std::is_same_v<T, ExitedEvent>) {
                j["type"] = "exited";
                j["vehicle"] = e.vehicle;
            } else if constexpr (std::is_same_v<T, CollisionEvent>) {
                j["type"] = "collision";
                j["cell"] = std::string(to_string(e.cell));
                j["vehicles"] = e.vehicles;
            } else if constexpr (std::is_same_v<T, Testimony>) {
                j["type"] = "testimony";
                j["witness"] = e.witness;
                j["violator"] = e.ref.violator;
                j["norm"] = std::string(to_string(e.ref.norm));
            } else if constexpr (std::is_same_v<T, SanctionRecord>) {
                j["type"] = "sanction";
                j["violator"] = e.violator;
                j["norm"] = std::string(to_string(e.norm));
                j["fine"] = e.fine;
                j["testimonies"] = e.testimony_count;
                j["sanction_id"] = e.sanction_id;
            } else if constexpr (std::is_same_v<T, DeadlockEvent>) {
                j["type"] = "deadlock_detected";
                j["cycle"] = e.cycle;
            } else if constexpr (std::is_same_v<T, GrantEvent>) {
                j["type"] = "grant";
                j["vehicle"] = e.vehicle;
            }
        },
        event);
    return j;
}

}  // namespace

RunReport make_report(const Scenario& s, const RunResult& r) {
    return RunReport{s.name, s.seed, r.metrics, r.ledger};
}

std::string write_metrics(const RunReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        ordered_json doc;
        doc["name"] = report.name;
        doc["seed"] = report.seed;
        doc["collisions"] = report.metrics.collisions;
        doc["violations"] = report.metrics.violations;
        doc["sanctions"] = report.metrics.sanctions;
        doc["deadlocks"] = report.metrics.deadlocks;
        doc["vehicles_exited"] = report.metrics.vehicles_exited;
        doc["throughput"] = report.metrics.throughput;
        doc["per_vehicle"] = ordered_json::array();
        for (const auto& [id, pv] : report.metrics.per_vehicle) {  // map: sorted by id
            ordered_json vj;
            vj["id"] = id;
            vj["exit_tick"] = pv.exit_tick ? ordered_json(*pv.exit_tick) : ordered_json(nullptr);
            vj["delay_ticks"] = pv.delay_ticks ? ordered_json(*pv.delay_ticks) : ordered_json(nullptr);
            vj["violations"] = pv.violations;
            vj["fines"] = pv.fines;
            vj["reputation"] = pv.reputation;
            doc["per_vehicle"].push_back(std::move(vj));
        }
        doc["ledger"] = ordered_json::array();
        for (const auto& [agent, entry] : report.ledger.agents()) {
            ordered_json aj;
            aj["agent"] = agent;
            aj["total_fines"] = entry.total_fines;
            aj["reputation"] = entry.reputation;
            aj["sanctions"] = ordered_json::array();
            for (const auto& s : entry.history) {
                aj["sanctions"].push_back({{"sanction_id", s.sanction_id},
                                           {"norm", std::string(to_string(s.norm))},
                                           {"fine", s.fine},
                                           {"testimonies", s.testimony_count}});
            }
            doc["ledger"].push_back(std::move(aj));
        }
        return doc.dump(2) + "\n";
    }

    // CSV: one row per vehicle, then a totals row carrying the aggregates.
    std::ostringstream out;
    out << "vehicle,exit_tick,delay_ticks,violations,fines,reputation,"
           "collisions,sanctions,deadlocks,vehicles_exited,throughput\n";
    int total_violations = 0;
    double total_fines = 0.0;
    int total_reputation = 0;
    for (const auto& [id, pv] : report.metrics.per_vehicle) {
        out << id << ',';
        if (pv.exit_tick) out << *pv.exit_tick;
        out << ',';
        if (pv.delay_ticks) out << *pv.delay_ticks;
        out << ',' << pv.violations << ',' << pv.fines << ',' << pv.reputation << ",,,,,\n";
        total_violations += pv.violations;
        total_fines += pv.fines;
        total_reputation += pv.reputation;
    }
    out << "TOTAL,,," << total_violations << ',' << total_fines << ',' << total_reputation << ','
        << report.metrics.collisions << ',' << report.metrics.sanctions << ','
        << report.metrics.deadlocks << ',' << report.metrics.vehicles_exited << ','
        << report.metrics.throughput << '\n';
    return out.str();
}

std::string write_trace(const std::vector<TickRecord>& trace) {
    std::ostringstream out;
    for (const auto& record : trace) {
        ordered_json j;
        j["tick"] = record.tick;
        j["vehicles"] = ordered_json::array();
        for (const auto& v : record.vehicles) {
            ordered_json vj;
            vj["id"] = v.id;
            vj["phase"] = std::string(to_string(v.phase));
            if (v.phase == VehiclePhase::approaching || v.phase == VehiclePhase::at_line) {
                vj["distance_m"] = v.distance_m;
            }
            if (v.cell) vj["cell"] = std::string(to_string(*v.cell));
            j["vehicles"].push_back(std::move(vj));
        }
        j["events"] = ordered_json::array();
        for (const auto& event : record.events) j["events"].push_back(event_json(event));
        out << j.dump() << '\n';
    }
    return out.str();
}

}  // namespace normsim
