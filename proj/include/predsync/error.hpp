#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace predsync {

enum class ErrorCode {
    InvalidArgument,
    CycleDetected,
    LeaderHasInEdge,
    EdgeAbsent,
    NonSquare,
    NonFinite,
    ShapeMismatch,
    NoSolution,
    Uncontrollable,
    TargetsNotConjugateClosed,
    DuplicateSend,
    HorizonInsufficient,
    InsufficientData,
    RankCollapse,
    MissingInput,
    ParseError,
    ValidationError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the core is reported through this type; the C API maps
// the code onto its status enum.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace predsync
