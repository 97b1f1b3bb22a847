// SPDX-License-Identifier: Apache-2.0
#include "egogen/core/error.hpp"

namespace egogen {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::NegativeDuration: return "NegativeDuration";
    case ErrorCode::MissingKeyframes: return "MissingKeyframes";
    case ErrorCode::TimestampOutOfRange: return "TimestampOutOfRange";
    case ErrorCode::DecodeFailure: return "DecodeFailure";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MissingInput: return "MissingInput";
    case ErrorCode::AlignmentMismatch: return "AlignmentMismatch";
    case ErrorCode::EmptyRelevantSet: return "EmptyRelevantSet";
    case ErrorCode::MissingPixelMask: return "MissingPixelMask";
    case ErrorCode::DegenerateMask: return "DegenerateMask";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MissingPlan: return "MissingPlan";
    case ErrorCode::ZeroReferenceSimilarity: return "ZeroReferenceSimilarity";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::MalformedBackendReply: return "MalformedBackendReply";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::MalformedFixtureKey: return "MalformedFixtureKey";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_backend_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::BackendUnavailable:
    case ErrorCode::MalformedBackendReply:
    case ErrorCode::Timeout:
    case ErrorCode::MalformedFixtureKey:
      return true;
    default:
      return false;
  }
}

int exit_code_for(ErrorCode code) {
  if (code == ErrorCode::ConfigInvalid) return 2;
  if (is_backend_error(code)) return 4;
  if (code == ErrorCode::Internal) return 5;
  return 3;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace egogen
