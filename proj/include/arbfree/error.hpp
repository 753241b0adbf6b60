#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arbfree {

enum class ErrorCode {
  DimensionMismatch,
  NumericalBreakdown,
  InvalidParameter,
  RateBelowMinusOne,
  NonPositiveProbability,
  ProbabilityNotNormalized,
  NegativePrice,
  NonFiniteValue,
  EquivalenceViolation,
  NotPointed,
  DimensionCapExceeded,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every module reports failures through this exception; `code()` is the
// machine-readable part that the CLI forwards on stderr.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const { return to_string(code_); }

private:
  ErrorCode code_;
};

} // namespace arbfree
