#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace whittemore {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelError : public Error {
 public:
  enum class Kind {
    cycle,
    unknown_parent,
    unknown_confounded,
    confounding_too_small,
    duplicate_parent,
    duplicate_vertex,
    unknown_variable,
    empty_data,
  };

  ModelError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class QueryError : public Error {
 public:
  using Error::Error;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

// Errors that carry a 1-based source position (line 0 means unknown).
class PositionedError : public Error {
 public:
  PositionedError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SyntaxError : public PositionedError {
 public:
  using PositionedError::PositionedError;
};

class EvalError : public PositionedError {
 public:
  explicit EvalError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : PositionedError(what, line, column) {}
};

class CsvError : public PositionedError {
 public:
  explicit CsvError(const std::string& what, std::size_t line = 0)
      : PositionedError(what, line, 0) {}
};

}  // namespace whittemore
