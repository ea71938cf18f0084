#pragma once

#include <string>
#include <vector>

#include "normsim/report.hpp"

namespace normsim {

struct BatchEntry {
    std::string path;
    RunReport report;
    std::vector<Diagnostic> diagnostics;  // nonempty when the scenario failed to load/run
    bool ok = false;
};

// Runs every scenario concurrently on up to `parallel` threads. The result
// is sorted by scenario name and independent of completion order.
std::vector<BatchEntry> run_batch(const std::vector<std::string>& scenario_paths, int parallel);

// Fixed-width summary table, one row per scenario.
std::string format_batch_summary(const std::vector<BatchEntry>& entries);

}  // namespace normsim
