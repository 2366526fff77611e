#pragma once

#include <compare>
#include <cstdlib>
#include <string>
#include <string_view>
#include <utility>

#include "cqsj/error.hpp"

namespace cqsj {

/// A database domain element: an opaque atomic token, or a pair
/// `pair(data, var)` tagging a value with a query variable.
///
/// The value is stored as its canonical text, so equality and ordering are
/// plain string operations and serialization is the identity.
class Value {
 public:
  Value() = default;

  static Value atomic(std::string token) { return Value(std::move(token)); }

  static Value pair(const Value& data, std::string_view var) {
    std::string text = "pair(";
    text += data.text_;
    text += ',';
    text += var;
    text += ')';
    return Value(std::move(text));
  }

  /// Wraps already-canonical text (as produced by `text()`).
  static Value from_text(std::string text) { return Value(std::move(text)); }

  bool is_pair() const { return text_.starts_with("pair("); }

  /// Data part of a pair; the value itself when atomic.
  Value data() const {
    if (!is_pair()) return *this;
    return Value(text_.substr(5, split_point() - 5));
  }

  /// Variable part of a pair; empty when atomic.
  std::string var() const {
    if (!is_pair()) return {};
    const std::size_t comma = split_point();
    return text_.substr(comma + 1, text_.size() - comma - 2);
  }

  const std::string& text() const { return text_; }

  auto operator<=>(const Value&) const = default;

 private:
  explicit Value(std::string text) : text_(std::move(text)) {}

  // Position of the comma separating data and variable at nesting depth 1.
  std::size_t split_point() const {
    int depth = 0;
    std::size_t last = std::string::npos;
    for (std::size_t i = 0; i < text_.size(); ++i) {
      const char c = text_[i];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 1) last = i;
    }
    return last;
  }

  std::string text_;
};

/// Reserved sentinel token used by the gadget constructions.
inline const std::string kBottomToken = "bot";
/// Joiner for composite tokens such as an edge (u,v) encoded as "u#v".
inline constexpr char kJoiner = '#';

/// Size limits for the exponential structural algorithms.
struct Limits {
  std::size_t max_vars = 32;
  std::size_t max_atoms = 32;

  /// Defaults, with CQSJ_MAX_VARS / CQSJ_MAX_ATOMS overrides from the environment.
  static Limits from_env() {
    Limits limits;
    if (const char* v = std::getenv("CQSJ_MAX_VARS")) limits.max_vars = std::strtoul(v, nullptr, 10);
    if (const char* v = std::getenv("CQSJ_MAX_ATOMS")) limits.max_atoms = std::strtoul(v, nullptr, 10);
    return limits;
  }
};

}  // namespace cqsj
