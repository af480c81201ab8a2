#include "qnetsim/error.hpp"

namespace qnetsim {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::BadTimeRange: return "BadTimeRange";
    case ErrorCode::ZeroProbability: return "ZeroProbability";
    case ErrorCode::ConstraintViolated: return "ConstraintViolated";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::OutOfCavity: return "OutOfCavity";
    case ErrorCode::UnknownMode: return "UnknownMode";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian:
    case ErrorCode::NotNormalized:
    case ErrorCode::ZeroProbability:
    case ErrorCode::NonFinite:
      return true;
    default:
      return false;
  }
}

}  // namespace qnetsim
