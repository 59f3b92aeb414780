#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rosa {

enum class ErrorCode {
  MissingColumn,
  MalformedRow,
  EmptyInput,
  IncompatibleRates,
  TooFewSegments,
  InvalidSpec,
  InvalidGeometry,
  HorizonMismatch,
  LengthMismatch,
  DegenerateBounds,
  WindowTooShort,
  UnknownOffset,
  EmptyDataset,
  DivergedLoss,
  NonFiniteLoss,
  AlignmentError,
  NegativeDistance,
  NonPositiveTime,
  OffRoute,
  BackgroundExhausted,
  EmptyLog,
  EmptyBatch,
  BadFormat,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Exception type for every recoverable failure in the library. The code is
/// the machine-readable name surfaced by the CLI.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rosa
