#include "arbfree/error.hpp"

namespace arbfree {

std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
  case ErrorCode::InvalidParameter: return "InvalidParameter";
  case ErrorCode::RateBelowMinusOne: return "RateBelowMinusOne";
  case ErrorCode::NonPositiveProbability: return "NonPositiveProbability";
  case ErrorCode::ProbabilityNotNormalized: return "ProbabilityNotNormalized";
  case ErrorCode::NegativePrice: return "NegativePrice";
  case ErrorCode::NonFiniteValue: return "NonFiniteValue";
  case ErrorCode::EquivalenceViolation: return "EquivalenceViolation";
  case ErrorCode::NotPointed: return "NotPointed";
  case ErrorCode::DimensionCapExceeded: return "DimensionCapExceeded";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

} // namespace arbfree
