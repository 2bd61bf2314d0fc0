#include "predsync/error.hpp"

namespace predsync {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::CycleDetected: return "cycle_detected";
        case ErrorCode::LeaderHasInEdge: return "leader_has_in_edge";
        case ErrorCode::EdgeAbsent: return "edge_absent";
        case ErrorCode::NonSquare: return "non_square";
        case ErrorCode::NonFinite: return "non_finite";
        case ErrorCode::ShapeMismatch: return "shape_mismatch";
        case ErrorCode::NoSolution: return "no_solution";
        case ErrorCode::Uncontrollable: return "uncontrollable";
        case ErrorCode::TargetsNotConjugateClosed: return "targets_not_conjugate_closed";
        case ErrorCode::DuplicateSend: return "duplicate_send";
        case ErrorCode::HorizonInsufficient: return "horizon_insufficient";
        case ErrorCode::InsufficientData: return "insufficient_data";
        case ErrorCode::RankCollapse: return "rank_collapse";
        case ErrorCode::MissingInput: return "missing_input";
        case ErrorCode::ParseError: return "parse_error";
        case ErrorCode::ValidationError: return "validation_error";
        case ErrorCode::IoError: return "io_error";
    }
    return "unknown";
}

}  // namespace predsync
