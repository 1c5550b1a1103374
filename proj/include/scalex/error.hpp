#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scalex {

enum class ErrorKind {
  NegativeEndpoint,
  InvalidInterval,
  InvalidSpectrum,
  NotMember,
  NotAdmissible,
  NotIsolated,
  IllConditioned,
  UndefinedAt,
  NoGap,
  NotScalinglike,
  NoConvergence,
  DimensionMismatch,
  IndexOutOfDepth,
  ParseError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NegativeEndpoint: return "NegativeEndpoint";
    case ErrorKind::InvalidInterval: return "InvalidInterval";
    case ErrorKind::InvalidSpectrum: return "InvalidSpectrum";
    case ErrorKind::NotMember: return "NotMember";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::NotIsolated: return "NotIsolated";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::UndefinedAt: return "UndefinedAt";
    case ErrorKind::NoGap: return "NoGap";
    case ErrorKind::NotScalinglike: return "NotScalinglike";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IndexOutOfDepth: return "IndexOutOfDepth";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library. `kind()` is stable and safe to
/// switch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace scalex
