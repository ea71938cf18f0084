#include "normsim/batch.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <sstream>
#include <thread>

namespace normsim {

std::vector<BatchEntry> run_batch(const std::vector<std::string>& scenario_paths, int parallel) {
    std::vector<BatchEntry> entries(scenario_paths.size());
    std::atomic<size_t> next{0};

    const auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= scenario_paths.size()) return;
            BatchEntry& entry = entries[i];
            entry.path = scenario_paths[i];
            ParseResult parsed = load_scenario_file(scenario_paths[i]);
            if (!parsed.ok()) {
                entry.report.name = scenario_paths[i];
                entry.diagnostics = parsed.diagnostics;
                continue;
            }
            try {
                const RunResult result = run(*parsed.scenario);
                entry.report = make_report(*parsed.scenario, result);
                entry.ok = true;
            } catch (const Error& e) {
                entry.report.name = parsed.scenario->name;
                entry.diagnostics.push_back({e.code(), scenario_paths[i], e.what()});
            }
        }
    };

    const int n = std::max(1, std::min<int>(parallel, static_cast<int>(scenario_paths.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::sort(entries.begin(), entries.end(), [](const BatchEntry& a, const BatchEntry& b) {
        return std::tie(a.report.name, a.path) < std::tie(b.report.name, b.path);
    });
    return entries;
}

std::string format_batch_summary(const std::vector<BatchEntry>& entries) {
    size_t name_width = 8;
    for (const auto& e : entries) name_width = std::max(name_width, e.report.name.size());

    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(name_width) + 2) << "scenario" << std::right
        << std::setw(11) << "collisions" << std::setw(11) << "violations" << std::setw(10)
        << "sanctions" << std::setw(10) << "deadlocks" << std::setw(8) << "exited" << std::setw(12)
        << "throughput" << '\n';
    for (const auto& e : entries) {
        out << std::left << std::setw(static_cast<int>(name_width) + 2) << e.report.name << std::right;
        if (!e.ok) {
            out << "  error: "
                << (e.diagnostics.empty() ? "unknown" : std::string(to_string(e.diagnostics[0].code)))
                << '\n';
            continue;
        }
        const Metrics& m = e.report.metrics;
        out << std::setw(11) << m.collisions << std::setw(11) << m.violations << std::setw(10)
            << m.sanctions << std::setw(10) << m.deadlocks << std::setw(8) << m.vehicles_exited
            << std::setw(12) << std::fixed << std::setprecision(4) << m.throughput << '\n';
        out.unsetf(std::ios::fixed);
        out << std::setprecision(6);
    }
    return out.str();
}

}  // namespace normsim
