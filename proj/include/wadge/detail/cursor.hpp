#ifndef WADGE_DETAIL_CURSOR_HPP
#define WADGE_DETAIL_CURSOR_HPP

#include <cctype>
#include <string>
#include <string_view>

#include "wadge/error.hpp"

namespace wadge::detail {

// Hand-rolled scanner shared by the small text grammars (ordinals, terms,
// points, set literals). Tracks line/column for error reports.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  std::size_t pos() const { return pos_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

  char get() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) get();
  }

  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      get();
      return true;
    }
    return false;
  }

  bool accept(std::string_view word) {
    skip_ws();
    if (text_.substr(pos_, word.size()) == word) {
      for (std::size_t i = 0; i < word.size(); ++i) get();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  void expect(std::string_view word) {
    if (!accept(word)) fail("expected '" + std::string(word) + "'");
  }

  bool at_digit() {
    skip_ws();
    return std::isdigit(static_cast<unsigned char>(peek())) != 0;
  }

  std::string digits() {
    skip_ws();
    std::string out;
    while (std::isdigit(static_cast<unsigned char>(peek()))) out.push_back(get());
    if (out.empty()) fail("expected a natural number");
    return out;
  }

  // Double-quoted literal with \" and \\ escapes.
  std::string string_literal() {
    skip_ws();
    if (peek() != '"') fail("expected string literal");
    get();
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated string literal");
      char c = get();
      if (c == '"') break;
      if (c == '\\') {
        if (at_end()) fail("unterminated escape");
        c = get();
        if (c != '"' && c != '\\') fail("unknown escape");
      }
      out.push_back(c);
    }
    return out;
  }

  void expect_end() {
    skip_ws();
    if (!at_end()) fail("unexpected trailing input");
  }

  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, line_, column_); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace wadge::detail

#endif  // WADGE_DETAIL_CURSOR_HPP
