#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ncf {

enum class ErrorCode {
  // cast_io
  MalformedHeader,
  MalformedEvent,
  NonMonotonicTime,
  MissingField,
  // term_emu
  ZeroDimension,
  // vhs
  UnknownCommand,
  MalformedTheme,
  MalformedDuration,
  // rasterizer / losses / metrics
  OutOfSourceBounds,
  DimensionMismatch,
  // dataset
  LengthMismatch,
  MalformedShard,
  // action codec
  UnknownKey,
  InvalidConfig,
  // toy model
  ShapeMismatch,
  UnknownMode,
  DegenerateBatch,
  // metrics
  TooFewClips,
  // io
  Io,
};

const char* to_string(ErrorCode code) noexcept;

// Every recoverable failure in the library is reported as an ncf::Error.
// `line` is 1-based when the error refers to a position in a text input,
// 0 otherwise; `detail` names the offending field or modality when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail, std::size_t line = 0);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::size_t line_;
};

}  // namespace ncf
