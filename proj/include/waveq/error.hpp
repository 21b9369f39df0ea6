#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace waveq {

enum class ErrorCode {
  kMalformedHeader,
  kUnsupportedMaxval,
  kTruncatedRaster,
  kNonFiniteValue,
  kSignalTooShort,
  kLengthMismatch,
  kTooSmall,
  kDimensionMismatch,
  kTooManyLevels,
  kEmptyRange,
  kEmptyInput,
  kInvalidParams,
  kNonPositiveStep,
  kBadMagic,
  kVersionUnsupported,
  kCorruptPayload,
  kUnknownWavelet,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as this exception. Parsers attach the
// byte offset at which the input stopped making sense.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
};

}  // namespace waveq
