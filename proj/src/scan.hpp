#pragma once

// Small cursor over one line of text, shared by the textual parsers.

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "thompson/error.hpp"

namespace thompson::detail {

class Scanner {
 public:
  explicit Scanner(std::string_view text, std::size_t line = 1)
      : text_(text), line_(line) {}

  std::size_t pos() const { return pos_; }
  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }
  bool accept(std::string_view token) {
    skip_ws();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }
  // Maximal run of characters not in `stops` and not whitespace.
  std::string_view token(std::string_view stops = "") {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           stops.find(text_[pos_]) == std::string_view::npos) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }
  // Everything up to (not including) `stop`, which is consumed.
  std::string_view until(char stop) {
    skip_ws();
    const std::size_t start = pos_;
    const std::size_t end = text_.find(stop, pos_);
    if (end == std::string_view::npos) {
      fail("expected '" + std::string(1, stop) + "'");
    }
    pos_ = end + 1;
    return text_.substr(start, end - start);
  }
  long long integer() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    const auto digits = text_.substr(start, pos_ - start);
    if (digits.empty() || digits == "-" || digits == "+") {
      pos_ = start;
      fail("expected integer");
    }
    return std::stoll(std::string(digits));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, pos_ + 1);
  }
  [[noreturn]] void fail_at(const std::string& what, std::size_t pos) const {
    throw ParseError(what, line_, pos + 1);
  }
  std::size_t line() const { return line_; }
  std::string_view rest() const { return text_.substr(pos_); }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace thompson::detail
