#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cqsj {

/// Malformed query, database or graph text. Carries a 1-based position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " at line " + std::to_string(line) + ", column " +
                           std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A relation symbol used with two different arities.
class ArityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Query or database does not match what an operation expects.
class SchemaError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structural search exceeded the configured query size.
class LimitExceeded : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An engine was asked to run on a query it does not support.
class InapplicableEngine : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A witness (untangling sequence, mirror decomposition) failed re-validation.
class InvalidWitness : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cheater's-Lemma wrapper saw an answer more often than its bound allows.
class DuplicateBoundViolation : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cqsj
