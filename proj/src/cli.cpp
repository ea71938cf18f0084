#include "normsim/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "normsim/batch.hpp"
#include "normsim/report.hpp"
#include "normsim/sim_engine.hpp"

namespace normsim {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

bool write_output(const std::string& path, const std::string& content, std::ostream& out,
                  std::ostream& err) {
    if (path == "-") {
        out << content;
        return true;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        err << "E_IO: cannot write " << path << '\n';
        return false;
    }
    file << content;
    return true;
}

int cmd_run(const std::string& path, bool seed_set, std::uint64_t seed,
            const std::string& metrics_path, const std::string& trace_path,
            const std::string& format, std::ostream& out, std::ostream& err) {
    ParseResult parsed = load_scenario_file(path);
    if (!parsed.ok()) {
        err << format_diagnostics(parsed.diagnostics);
        return kExitInvalid;
    }
    Scenario scenario = *parsed.scenario;
    if (seed_set) scenario.seed = seed;
    try {
        const RunResult result = run(scenario);
        const RunReport report = make_report(scenario, result);
        const ReportFormat rf = format == "csv" ? ReportFormat::csv : ReportFormat::json;
        if (!write_output(metrics_path, write_metrics(report, rf), out, err)) return kExitRuntime;
        if (!trace_path.empty()) {
            if (!write_output(trace_path, write_trace(result.trace), out, err)) return kExitRuntime;
        }
        return kExitOk;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return e.code() == ErrorCode::E_INVALID_SCENARIO ? kExitInvalid : kExitRuntime;
    }
}

int cmd_batch(const std::vector<std::string>& paths, int parallel, const std::string& out_dir,
              std::ostream& out, std::ostream& err) {
    std::vector<std::string> files;
    for (const auto& p : paths) {
        std::error_code ec;
        if (fs::is_directory(p, ec)) {
            std::vector<std::string> found;
            for (const auto& entry : fs::directory_iterator(p, ec)) {
                if (entry.path().extension() == ".json") found.push_back(entry.path().string());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(p);
        }
    }
    if (files.empty()) {
        err << "batch: no scenario files found\n";
        return kExitInvalid;
    }
    const auto entries = run_batch(files, parallel);
    out << format_batch_summary(entries);
    if (!out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        for (const auto& e : entries) {
            if (!e.ok) continue;
            const std::string target = (fs::path(out_dir) / (e.report.name + ".metrics.json")).string();
            if (!write_output(target, write_metrics(e.report, ReportFormat::json), out, err)) {
                return kExitRuntime;
            }
        }
    }
    const bool all_ok = std::all_of(entries.begin(), entries.end(),
                                    [](const BatchEntry& e) { return e.ok; });
    return all_ok ? kExitOk : kExitInvalid;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
    const ParseResult parsed = load_scenario_file(path);
    if (!parsed.ok()) {
        err << format_diagnostics(parsed.diagnostics);
        return kExitInvalid;
    }
    out << "ok: " << parsed.scenario->name << " (" << parsed.scenario->vehicles.size()
        << " vehicles)\n";
    return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deterministic simulator of right-of-way norms, strategies and governance "
                 "at unsignalized intersections"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::uint64_t seed = 0;
    std::string metrics_path = "-";
    std::string trace_path;
    std::string format = "json";

    CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario and write metrics/trace");
    run_cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    CLI::Option* seed_opt = run_cmd->add_option("--seed", seed, "Override the scenario seed");
    run_cmd->add_option("--metrics", metrics_path, "Metrics output path ('-' for stdout)");
    run_cmd->add_option("--trace", trace_path, "Trace output path (JSON Lines, '-' for stdout)");
    run_cmd->add_option("--format", format, "Metrics format")
        ->check(CLI::IsMember({"json", "csv"}));

    std::vector<std::string> batch_paths;
    int parallel = 1;
    std::string out_dir;
    CLI::App* batch_cmd = app.add_subcommand("batch", "Run many scenarios and print a summary");
    batch_cmd->add_option("paths", batch_paths, "Scenario files or directories")->required();
    batch_cmd->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);
    batch_cmd->add_option("--out", out_dir, "Directory for per-scenario metrics files");

    std::string validate_path;
    CLI::App* validate_cmd = app.add_subcommand("validate", "Validate a scenario file");
    validate_cmd->add_option("scenario", validate_path, "Scenario JSON file")->required();

    std::vector<std::string> argv(args);
    std::reverse(argv.begin(), argv.end());  // CLI11 consumes arguments back to front
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream usage;
        const int code = app.exit(e, usage, usage);
        (code == 0 ? out : err) << usage.str();
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(scenario_path, seed_opt->count() > 0, seed, metrics_path, trace_path,
                           format, out, err);
        }
        if (batch_cmd->parsed()) return cmd_batch(batch_paths, parallel, out_dir, out, err);
        if (validate_cmd->parsed()) return cmd_validate(validate_path, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitInvalid;
}

}  // namespace normsim
