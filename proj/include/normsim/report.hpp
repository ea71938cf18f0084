#pragma once

#include <string>
#include <vector>

#include "normsim/sim_engine.hpp"

namespace normsim {

enum class ReportFormat { json, csv };

// Outcome of one run, serialized canonically (fixed field order, arrays
// sorted by id) so equal reports produce identical bytes.
struct RunReport {
    std::string name;
    std::uint64_t seed = 0;
    Metrics metrics;
    GovernanceLedger ledger;
};

RunReport make_report(const Scenario& s, const RunResult& r);

std::string write_metrics(const RunReport& report, ReportFormat format);

// JSON Lines, one object per tick: {"tick", "vehicles": [...], "events": [...]}.
std::string write_trace(const std::vector<TickRecord>& trace);

}  // namespace normsim
