#include "rosa/error.hpp"

namespace rosa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::IncompatibleRates: return "IncompatibleRates";
    case ErrorCode::TooFewSegments: return "TooFewSegments";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::HorizonMismatch: return "HorizonMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateBounds: return "DegenerateBounds";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::UnknownOffset: return "UnknownOffset";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DivergedLoss: return "DivergedLoss";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::AlignmentError: return "AlignmentError";
    case ErrorCode::NegativeDistance: return "NegativeDistance";
    case ErrorCode::NonPositiveTime: return "NonPositiveTime";
    case ErrorCode::OffRoute: return "OffRoute";
    case ErrorCode::BackgroundExhausted: return "BackgroundExhausted";
    case ErrorCode::EmptyLog: return "EmptyLog";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::BadFormat: return "BadFormat";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rosa
