#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lfp {

enum class ErrorCode {
  BoundaryMismatch,
  BoundExceeded,
  IllFormedRelation,
  UnknownObject,
  BaseMismatch,
  NotACocone,
  StaleMove,
  ParseError,
  ValidationError,
  UnknownSession,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// the CLI and the session service can map it to an exit status / HTTP status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// One failed axiom or square reported by a validator.
struct Violation {
  std::string rule;
  std::string detail;
};

}  // namespace lfp
