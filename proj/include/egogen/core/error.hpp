// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace egogen {

enum class ErrorCode {
  // configuration
  ConfigInvalid,
  // input / data
  NegativeDuration,
  MissingKeyframes,
  TimestampOutOfRange,
  DecodeFailure,
  SchemaMismatch,
  EmptyInput,
  MissingInput,
  AlignmentMismatch,
  EmptyRelevantSet,
  MissingPixelMask,
  DegenerateMask,
  DimensionMismatch,
  MissingPlan,
  ZeroReferenceSimilarity,
  EmptyMask,
  PreconditionViolation,
  // backend
  BackendUnavailable,
  MalformedBackendReply,
  Timeout,
  MalformedFixtureKey,
  // anything else
  Internal,
};

std::string_view to_string(ErrorCode code);

/// Process exit status for an error class: 2 config, 3 input, 4 backend, 5 internal.
int exit_code_for(ErrorCode code);

/// True for errors raised by (or on behalf of) an external model backend.
bool is_backend_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace egogen
