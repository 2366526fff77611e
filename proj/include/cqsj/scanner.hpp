#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "cqsj/error.hpp"

namespace cqsj::detail {

// Character cursor with line/column tracking and `%` comments.
class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() != c) return false;
    advance();
    return true;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  void expect(std::string_view word) {
    skip_space();
    if (text_.substr(pos_, word.size()) != word) fail("expected '" + std::string(word) + "'");
    for (std::size_t i = 0; i < word.size(); ++i) advance();
  }

  /// Reads `[first][rest]*` where `first`/`rest` are character predicates.
  template <typename First, typename Rest>
  std::string word(First first, Rest rest, std::string_view what) {
    skip_space();
    if (pos_ >= text_.size() || !first(text_[pos_])) fail("expected " + std::string(what));
    std::string out;
    out += text_[pos_];
    advance();
    while (pos_ < text_.size() && rest(text_[pos_])) {
      out += text_[pos_];
      advance();
    }
    return out;
  }

  bool lookahead(std::string_view word) {
    skip_space();
    return text_.substr(pos_, word.size()) == word;
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, column_); }

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_ident_rest(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_token_char(char c) { return is_lower(c) || (c >= '0' && c <= '9') || c == '_' || c == '#'; }

}  // namespace cqsj::detail
