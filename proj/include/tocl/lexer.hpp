#pragma once

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "tocl/error.hpp"

namespace tocl {

enum class TokenKind {
  Identifier,
  Keyword,
  Integer,
  Real,
  String,
  LParen,
  RParen,
  Comma,
  Dot,
  Arrow,
  Bar,
  Colon,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // identifier/keyword spelling, decoded string literal, or number spelling
  SourcePos pos;
};

inline constexpr std::array<std::string_view, 19> keywords = {
    "context", "inv",        "self",   "not",    "and",        "or",     "xor",
    "true",    "false",      "next",   "eventually", "always", "until",  "atLeastOnce",
    "everytime", "forAll",   "exists", "select", "collect"};

inline bool is_keyword(std::string_view word) noexcept {
  for (auto k : keywords) {
    if (k == word) return true;
  }
  return false;
}

inline std::string describe(TokenKind k) {
  switch (k) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Integer: return "integer";
    case TokenKind::Real: return "real";
    case TokenKind::String: return "string";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::Comma: return "','";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::Bar: return "'|'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Eq: return "'='";
    case TokenKind::Ne: return "'<>'";
    case TokenKind::Lt: return "'<'";
    case TokenKind::Le: return "'<='";
    case TokenKind::Gt: return "'>'";
    case TokenKind::Ge: return "'>='";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

/// Splits constraint text into tokens. `--` starts a comment running to end of line.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;

  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto peek = [&](std::size_t off = 0) -> char { return i + off < src.size() ? src[i + off] : '\0'; };
  auto push = [&](TokenKind k, std::string text, SourcePos pos) {
    out.push_back(Token{k, std::move(text), pos});
  };

  while (i < src.size()) {
    char c = peek();
    SourcePos pos{line, col};
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    if (c == '-' && peek(1) == '-') {
      while (i < src.size() && peek() != '\n') advance();
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      std::string word(src.substr(start, i - start));
      TokenKind kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
      push(kind, std::move(word), pos);
      continue;
    }
    bool negative_number = c == '-' && std::isdigit(static_cast<unsigned char>(peek(1)));
    if (std::isdigit(static_cast<unsigned char>(c)) || negative_number) {
      std::size_t start = i;
      if (negative_number) advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      bool real = false;
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        real = true;
        advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
      if (peek() == 'e' || peek() == 'E') {
        std::size_t save_i = i;
        int save_line = line, save_col = col;
        advance();
        if (peek() == '+' || peek() == '-') advance();
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
          real = true;
          while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        } else {
          i = save_i;
          line = save_line;
          col = save_col;
        }
      }
      push(real ? TokenKind::Real : TokenKind::Integer, std::string(src.substr(start, i - start)), pos);
      continue;
    }
    if (c == '\'') {
      advance();
      std::string text;
      bool closed = false;
      while (i < src.size()) {
        char d = peek();
        if (d == '\\' && (peek(1) == '\'' || peek(1) == '\\')) {
          text += peek(1);
          advance(2);
          continue;
        }
        if (d == '\'') {
          advance();
          closed = true;
          break;
        }
        if (d == '\n') break;
        text += d;
        advance();
      }
      if (!closed) throw Error(ErrorKind::Syntax, "unterminated string literal", pos, {"'"});
      push(TokenKind::String, std::move(text), pos);
      continue;
    }
    switch (c) {
      case '(': advance(); push(TokenKind::LParen, "(", pos); continue;
      case ')': advance(); push(TokenKind::RParen, ")", pos); continue;
      case ',': advance(); push(TokenKind::Comma, ",", pos); continue;
      case '.': advance(); push(TokenKind::Dot, ".", pos); continue;
      case '|': advance(); push(TokenKind::Bar, "|", pos); continue;
      case ':': advance(); push(TokenKind::Colon, ":", pos); continue;
      case '=': advance(); push(TokenKind::Eq, "=", pos); continue;
      case '-':
        if (peek(1) == '>') {
          advance(2);
          push(TokenKind::Arrow, "->", pos);
          continue;
        }
        break;
      case '<':
        if (peek(1) == '>') {
          advance(2);
          push(TokenKind::Ne, "<>", pos);
        } else if (peek(1) == '=') {
          advance(2);
          push(TokenKind::Le, "<=", pos);
        } else {
          advance();
          push(TokenKind::Lt, "<", pos);
        }
        continue;
      case '>':
        if (peek(1) == '=') {
          advance(2);
          push(TokenKind::Ge, ">=", pos);
        } else {
          advance();
          push(TokenKind::Gt, ">", pos);
        }
        continue;
      default:
        break;
    }
    throw Error(ErrorKind::Syntax, std::string("unexpected character '") + c + "'", pos);
  }
  out.push_back(Token{TokenKind::End, "", SourcePos{line, col}});
  return out;
}

}  // namespace tocl
