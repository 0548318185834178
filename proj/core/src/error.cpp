#include "lfp/error.hpp"

namespace lfp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorCode::BoundExceeded: return "BoundExceeded";
    case ErrorCode::IllFormedRelation: return "IllFormedRelation";
    case ErrorCode::UnknownObject: return "UnknownObject";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::NotACocone: return "NotACocone";
    case ErrorCode::StaleMove: return "StaleMove";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownSession: return "UnknownSession";
  }
  return "Unknown";
}

}  // namespace lfp
