#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace normsim {

// Machine-readable codes carried by both exceptions and validation diagnostics.
enum class ErrorCode {
    E_UNKNOWN_APPROACH,
    E_NO_EXIT,
    E_SAME_APPROACH,
    E_DUP_BEARING,
    E_ROAD_CLASS_MISMATCH,
    E_APPROACH_COUNT,
    E_BAD_BEARING,
    E_ROUNDABOUT_CLASS,
    E_NOT_CONFLICTING,
    E_DUP_ID,
    E_UNKNOWN_VEHICLE,
    E_TESTIMONY_MISMATCH,
    E_DUP_SANCTION,
    E_EMPTY_CYCLE,
    E_FINISHED,
    E_INVALID_SCENARIO,
    E_PARSE,
    E_BAD_STRATEGY,
    E_BAD_MANEUVER,
    E_BAD_KIND,
    E_BAD_ROAD_CLASS,
    E_BAD_SPAWN,
    E_SPAWN_OVERLAP,
    E_BAD_DURATION,
    E_UNKNOWN_NORM,
    E_BAD_FINE,
    E_BAD_PARAM,
    E_UNKNOWN_FIELD,
    E_IO,
};

std::string_view to_string(ErrorCode code);

// Domain exception for contract violations (unknown ids, duplicate sanctions, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// One validation failure. `path` points into the offending document
// (e.g. "/vehicles/2/strategy") or names the offending entity.
struct Diagnostic {
    ErrorCode code;
    std::string path;
    std::string message;
};

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics);

}  // namespace normsim
