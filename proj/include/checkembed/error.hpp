#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace checkembed {

enum class ErrorCode {
    InvalidInput,
    NonFinite,
    DimensionMismatch,
    ZeroVector,
    ConstantVector,
    LengthMismatch,
    ConstantSequence,
    DegenerateMatrix,
    EmptyText,
    AuthError,
    TransportError,
    MalformedResponse,
    PartialFailure,
    EmptyDocument,
    ParseError,
    RaggedDims,
    EmptySequence,
    EmptySample,
    OutOfRangeScore,
    UnparsableVerdict,
    EmptyLabels,
    InsufficientSamples,
    NotApplicable,
    UnknownCost,
    InvalidParams,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers can branch on the kind of failure without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail),
          code_(code), detail_(std::move(detail)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

    /// Same error kind, with `context` prepended to the detail.
    Error with_context(std::string_view context) const {
        return Error(code_, std::string(context) + ": " + detail_);
    }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace checkembed
