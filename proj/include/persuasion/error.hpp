#pragma once

#include <stdexcept>
#include <string>

namespace persuasion {

enum class ErrorKind {
  DimensionMismatch,
  InvalidInstance,
  InvalidArgument,
  TooLarge,
  Infeasible,
  NumericalFailure,
  Parse,
};

inline const char* to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::InvalidInstance: return "invalid instance";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::TooLarge: return "instance too large";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::NumericalFailure: return "numerical failure";
    case ErrorKind::Parse: return "parse error";
  }
  return "error";
}

/// Domain error raised by every solver in the library. The message names the
/// offending axis, field, or cap so that callers can report it verbatim.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
  {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace persuasion
