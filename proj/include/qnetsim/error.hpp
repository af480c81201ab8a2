#pragma once

#include <stdexcept>
#include <string>

namespace qnetsim {

enum class ErrorCode {
  NotHermitian,
  Degenerate,
  DimMismatch,
  BadTimeRange,
  ZeroProbability,
  ConstraintViolated,
  NotNormalized,
  OutOfCavity,
  UnknownMode,
  NonFinite,
  ParseError,
  ValidationError,
  IoError,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

// True for codes that come from a numerical check rather than from bad input.
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failure anchored at a 1-based line/column in the source text.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(ErrorCode::ParseError, format(line, column, message)),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string format(int line, int column, const std::string& message) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
           message;
  }

  int line_;
  int column_;
};

}  // namespace qnetsim
