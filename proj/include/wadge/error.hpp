#ifndef WADGE_ERROR_HPP
#define WADGE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace wadge {

enum class ErrorKind {
  Syntax,
  UnknownConstant,
  OpenTerm,
  InvalidAddress,
  SpaceMismatch,
  EmptySet,
  Undecided,
  Unsupported,
  Malformed,
  UnknownKind,
  Arity,
  LevelViolation,
  NonNormal,
  NonMonotone,
  Precondition,
  Internal,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::UnknownConstant: return "unknown constant";
    case ErrorKind::OpenTerm: return "open term";
    case ErrorKind::InvalidAddress: return "invalid address";
    case ErrorKind::SpaceMismatch: return "space mismatch";
    case ErrorKind::EmptySet: return "empty set";
    case ErrorKind::Undecided: return "undecided at depth bound";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Malformed: return "malformed document";
    case ErrorKind::UnknownKind: return "unknown kind";
    case ErrorKind::Arity: return "arity mismatch";
    case ErrorKind::LevelViolation: return "level violation";
    case ErrorKind::NonNormal: return "non-normal term";
    case ErrorKind::NonMonotone: return "non-monotone flowchart";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::Internal: return "internal invariant failure";
  }
  return "error";
}

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failures keep the 1-based position of the offending character.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& detail, std::size_t line, std::size_t column)
      : Error(ErrorKind::Syntax, detail + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace wadge

#endif  // WADGE_ERROR_HPP
