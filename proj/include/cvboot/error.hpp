#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace cvboot {

// Stable error codes. The CLI serializes these by name, so never renumber
// or rename an existing entry.
enum class ErrorCode {
    InvalidArgument,
    NonBinaryOutcome,
    EmptyArm,
    DimensionMismatch,
    InfeasibleStratification,
    DegenerateFold,
    InsufficientReplication,
    ZeroBetweenVariance,
    CalibrationDegenerate,
    SingularDesign,
    NonConvergence,
    Separation,
    OneClassFold,
    MissingTreatment,
    EmptySubgroupArm,
    OneClass,
    MissingColumn,
    NonNumericCell,
    EmptyAfterFiltering,
    Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonBinaryOutcome: return "NonBinaryOutcome";
    case ErrorCode::EmptyArm: return "EmptyArm";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InfeasibleStratification: return "InfeasibleStratification";
    case ErrorCode::DegenerateFold: return "DegenerateFold";
    case ErrorCode::InsufficientReplication: return "InsufficientReplication";
    case ErrorCode::ZeroBetweenVariance: return "ZeroBetweenVariance";
    case ErrorCode::CalibrationDegenerate: return "CalibrationDegenerate";
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::Separation: return "Separation";
    case ErrorCode::OneClassFold: return "OneClassFold";
    case ErrorCode::MissingTreatment: return "MissingTreatment";
    case ErrorCode::EmptySubgroupArm: return "EmptySubgroupArm";
    case ErrorCode::OneClass: return "OneClass";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::EmptyAfterFiltering: return "EmptyAfterFiltering";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

    // Errors that describe a single unusable train/test fold rather than a
    // problem with the inputs. The engine redraws the split on these.
    bool fold_local() const noexcept
    {
        switch (code_) {
        case ErrorCode::DegenerateFold:
        case ErrorCode::OneClassFold:
        case ErrorCode::Separation:
        case ErrorCode::EmptySubgroupArm:
        case ErrorCode::SingularDesign:
        case ErrorCode::OneClass:
            return true;
        default:
            return false;
        }
    }

private:
    ErrorCode code_;
};

template <class... Parts>
[[noreturn]] void fail(ErrorCode code, Parts&&... parts)
{
    std::string msg;
    ((msg += [&] {
         if constexpr (std::is_arithmetic_v<std::decay_t<Parts>>)
             return std::to_string(parts);
         else
             return std::string(parts);
     }()),
     ...);
    throw Error(code, msg);
}

inline void ensure(bool cond, ErrorCode code, std::string_view what)
{
    if (!cond)
        throw Error(code, std::string(what));
}

} // namespace cvboot
