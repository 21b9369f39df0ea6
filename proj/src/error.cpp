#include "waveq/error.hpp"

namespace waveq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kUnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::kTruncatedRaster: return "TruncatedRaster";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kSignalTooShort: return "SignalTooShort";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kTooManyLevels: return "TooManyLevels";
    case ErrorCode::kEmptyRange: return "EmptyRange";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kNonPositiveStep: return "NonPositiveStep";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kVersionUnsupported: return "VersionUnsupported";
    case ErrorCode::kCorruptPayload: return "CorruptPayload";
    case ErrorCode::kUnknownWavelet: return "UnknownWavelet";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message,
                           std::optional<std::size_t> offset) {
  std::string out(to_string(code));
  out += ": ";
  out += message;
  if (offset) {
    out += " (at byte offset ";
    out += std::to_string(*offset);
    out += ")";
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> offset)
    : std::runtime_error(format_message(code, message, offset)),
      code_(code),
      offset_(offset) {}

}  // namespace waveq
