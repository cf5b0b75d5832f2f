#include "ncforge/error.hpp"

namespace ncf {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MalformedEvent: return "MalformedEvent";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::ZeroDimension: return "ZeroDimension";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::MalformedTheme: return "MalformedTheme";
    case ErrorCode::MalformedDuration: return "MalformedDuration";
    case ErrorCode::OutOfSourceBounds: return "OutOfSourceBounds";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MalformedShard: return "MalformedShard";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnknownMode: return "UnknownMode";
    case ErrorCode::DegenerateBatch: return "DegenerateBatch";
    case ErrorCode::TooFewClips: return "TooFewClips";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& detail, std::size_t line) {
  std::string msg = to_string(code);
  if (line != 0) msg += " (line " + std::to_string(line) + ")";
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

}  // namespace

Error::Error(ErrorCode code, std::string detail, std::size_t line)
    : std::runtime_error(format_message(code, detail, line)),
      code_(code),
      detail_(std::move(detail)),
      line_(line) {}

}  // namespace ncf
