#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace viewforge {

enum class ErrorCode {
  // spec-lang
  Syntax,
  DuplicateName,
  Structure,
  // project
  Project,
  // logic
  UnboundVariable,
  SortMismatch,
  Overflow,
  AlreadyPrimed,
  PatternVariableClash,
  BudgetExceeded,
  // system model
  UnknownSort,
  ZeroBound,
  AttributeCollision,
  IdPoolExhausted,
  // refine
  TargetMissing,
  NameClash,
  IllegalPayload,
  // sim
  Scenario,
  CapExceeded,
};

const char* to_string(ErrorCode code) noexcept;

/// Base of every error raised by the toolchain. The code is the stable,
/// machine-checkable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse diagnostics carry a 1-based position and the set of tokens that
/// would have been accepted there.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, int line, int column, std::vector<std::string> expected,
             const std::string& message);
  /// Same diagnostic with `prefix: ` in front of the message (e.g. a file name).
  ParseError(const std::string& prefix, const ParseError& base);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& message)
      : Error(ErrorCode::BudgetExceeded, message) {}
};

}  // namespace viewforge
