#include "checkembed/error.hpp"

namespace checkembed {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::ConstantVector: return "ConstantVector";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConstantSequence: return "ConstantSequence";
    case ErrorCode::DegenerateMatrix: return "DegenerateMatrix";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::AuthError: return "AuthError";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::PartialFailure: return "PartialFailure";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RaggedDims: return "RaggedDims";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::OutOfRangeScore: return "OutOfRangeScore";
    case ErrorCode::UnparsableVerdict: return "UnparsableVerdict";
    case ErrorCode::EmptyLabels: return "EmptyLabels";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::UnknownCost: return "UnknownCost";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace checkembed
