#pragma once

// Small shared tokenizer for the text formats (formulas, POR programs, SIFP
// programs). '#' starts a comment that runs to the end of the line.

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "flipbench/errors.hpp"

namespace flipbench::detail {

struct Token {
  enum class Kind { Ident, Digits, Symbol, End };
  Kind kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view src) {
  static constexpr std::string_view kTwoChar[] = {":=", "<=", "->"};
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line, cl = col, start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Token::Kind::Ident, std::string(src.substr(start, j - start)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Kind::Digits, std::string(src.substr(start, j - start)), l, cl});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (auto sym : kTwoChar) {
      if (src.substr(i, sym.size()) == sym) {
        out.push_back({Token::Kind::Symbol, std::string(sym), l, cl});
        advance(sym.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("()[]{}/.*=~&|;,").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Symbol, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
  }
  out.push_back({Token::Kind::End, "", line, col});
  return out;
}

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t k = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[k];
  }
  bool atEnd() const { return peek().kind == Token::Kind::End; }
  bool is(std::string_view text) const {
    return peek().kind != Token::Kind::End && peek().text == text;
  }
  bool accept(std::string_view text) {
    if (!is(text)) return false;
    ++pos_;
    return true;
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  void expect(std::string_view text) {
    if (!accept(text)) fail("expected '" + std::string(text) + "'");
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw ParseError(what + (t.kind == Token::Kind::End ? " at end of input" : " near '" + t.text + "'"),
                     t.line, t.column);
  }
  std::size_t mark() const { return pos_; }
  void reset(std::size_t pos) { pos_ = pos; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace flipbench::detail
