#include "normsim/errors.hpp"

#include <sstream>

namespace normsim {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::E_UNKNOWN_APPROACH: return "E_UNKNOWN_APPROACH";
        case ErrorCode::E_NO_EXIT: return "E_NO_EXIT";
        case ErrorCode::E_SAME_APPROACH: return "E_SAME_APPROACH";
        case ErrorCode::E_DUP_BEARING: return "E_DUP_BEARING";
        case ErrorCode::E_ROAD_CLASS_MISMATCH: return "E_ROAD_CLASS_MISMATCH";
        case ErrorCode::E_APPROACH_COUNT: return "E_APPROACH_COUNT";
        case ErrorCode::E_BAD_BEARING: return "E_BAD_BEARING";
        case ErrorCode::E_ROUNDABOUT_CLASS: return "E_ROUNDABOUT_CLASS";
        case ErrorCode::E_NOT_CONFLICTING: return "E_NOT_CONFLICTING";
        case ErrorCode::E_DUP_ID: return "E_DUP_ID";
        case ErrorCode::E_UNKNOWN_VEHICLE: return "E_UNKNOWN_VEHICLE";
        case ErrorCode::E_TESTIMONY_MISMATCH: return "E_TESTIMONY_MISMATCH";
        case ErrorCode::E_DUP_SANCTION: return "E_DUP_SANCTION";
        case ErrorCode::E_EMPTY_CYCLE: return "E_EMPTY_CYCLE";
        case ErrorCode::E_FINISHED: return "E_FINISHED";
        case ErrorCode::E_INVALID_SCENARIO: return "E_INVALID_SCENARIO";
        case ErrorCode::E_PARSE: return "E_PARSE";
        case ErrorCode::E_BAD_STRATEGY: return "E_BAD_STRATEGY";
        case ErrorCode::E_BAD_MANEUVER: return "E_BAD_MANEUVER";
        case ErrorCode::E_BAD_KIND: return "E_BAD_KIND";
        case ErrorCode::E_BAD_ROAD_CLASS: return "E_BAD_ROAD_CLASS";
        case ErrorCode::E_BAD_SPAWN: return "E_BAD_SPAWN";
        case ErrorCode::E_SPAWN_OVERLAP: return "E_SPAWN_OVERLAP";
        case ErrorCode::E_BAD_DURATION: return "E_BAD_DURATION";
        case ErrorCode::E_UNKNOWN_NORM: return "E_UNKNOWN_NORM";
        case ErrorCode::E_BAD_FINE: return "E_BAD_FINE";
        case ErrorCode::E_BAD_PARAM: return "E_BAD_PARAM";
        case ErrorCode::E_UNKNOWN_FIELD: return "E_UNKNOWN_FIELD";
        case ErrorCode::E_IO: return "E_IO";
    }
    return "E_UNKNOWN";
}

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics) {
    std::ostringstream out;
    for (const auto& d : diagnostics) {
        out << to_string(d.code) << " at " << (d.path.empty() ? "/" : d.path) << ": " << d.message
            << '\n';
    }
    return out.str();
}

}  // namespace normsim
