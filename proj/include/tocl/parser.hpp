#pragma once

#include <algorithm>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tocl/ast.hpp"
#include "tocl/lexer.hpp"

namespace tocl {

/// Syntax-level result of parsing one `context T inv [name]: expr` block.
struct ParsedConstraint {
  std::string name;  // empty when the source gave none
  std::string context_type;
  SourcePos context_pos;
  std::string source;  // expression text as written
  NodePtr root;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src), toks_(tokenize(src)) {}

  NodePtr expression_only() {
    auto e = expr();
    expect(TokenKind::End, "end of input");
    return e;
  }

  std::vector<ParsedConstraint> constraints() {
    std::vector<ParsedConstraint> out;
    while (!at(TokenKind::End)) out.push_back(constraint());
    return out;
  }

 private:
  ParsedConstraint constraint() {
    ParsedConstraint c;
    expect_keyword("context");
    const Token& type = expect(TokenKind::Identifier, "type name");
    c.context_type = type.text;
    c.context_pos = type.pos;
    accept(TokenKind::Colon);
    expect_keyword("inv");
    if (at(TokenKind::Identifier)) c.name = next().text;
    expect(TokenKind::Colon, "':'");
    std::size_t start = offset_of(peek().pos);
    c.root = expr();
    std::size_t end = at(TokenKind::End) ? src_.size() : offset_of(peek().pos);
    c.source = trim(src_.substr(start, end - start));
    if (!at(TokenKind::End) && !at_keyword("context")) {
      fail({"'and'", "'or'", "'xor'", "'context'", "end of input"});
    }
    return c;
  }

  NodePtr expr() { return or_expr(); }

  NodePtr or_expr() {
    auto lhs = and_expr();
    while (at_keyword("or") || at_keyword("xor")) {
      const Token& op = next();
      auto rhs = and_expr();
      lhs = ast::bool_op(op.text == "or" ? BoolOpKind::Or : BoolOpKind::Xor, std::move(lhs),
                         std::move(rhs), op.pos);
    }
    return lhs;
  }

  NodePtr and_expr() {
    auto lhs = unary();
    while (at_keyword("and")) {
      const Token& op = next();
      auto rhs = unary();
      lhs = ast::bool_op(BoolOpKind::And, std::move(lhs), std::move(rhs), op.pos);
    }
    return lhs;
  }

  NodePtr unary() {
    if (at_keyword("not")) {
      SourcePos pos = next().pos;
      expect(TokenKind::LParen, "'('");
      auto e = expr();
      expect(TokenKind::RParen, "')'");
      return ast::negation(std::move(e), pos);
    }
    return comparison();
  }

  NodePtr comparison() {
    auto lhs = primary();
    CompareOp op;
    switch (peek().kind) {
      case TokenKind::Eq: op = CompareOp::Eq; break;
      case TokenKind::Ne: op = CompareOp::Ne; break;
      case TokenKind::Lt: op = CompareOp::Lt; break;
      case TokenKind::Le: op = CompareOp::Le; break;
      case TokenKind::Gt: op = CompareOp::Gt; break;
      case TokenKind::Ge: op = CompareOp::Ge; break;
      default: return lhs;
    }
    SourcePos pos = next().pos;
    auto rhs = primary();
    return ast::compare(op, std::move(lhs), std::move(rhs), pos);
  }

  NodePtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Integer: {
        next();
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size()) {
          throw Error(ErrorKind::Syntax, "integer literal out of range", t.pos);
        }
        return ast::literal(Value(v), t.pos);
      }
      case TokenKind::Real:
        next();
        return ast::literal(Value(std::stod(t.text)), t.pos);
      case TokenKind::String:
        next();
        return ast::literal(Value(t.text), t.pos);
      case TokenKind::LParen: {
        next();
        auto e = expr();
        expect(TokenKind::RParen, "')'");
        return e;
      }
      case TokenKind::Identifier:
        return navigation(ast::var(next().text, t.pos));
      case TokenKind::Keyword:
        if (t.text == "true" || t.text == "false") {
          next();
          return ast::literal(Value(t.text == "true"), t.pos);
        }
        if (t.text == "self") {
          next();
          return navigation(ast::self(t.pos));
        }
        if (auto k = temporal_keyword(t.text)) return temporal(*k);
        break;
      default:
        break;
    }
    fail({"literal", "'self'", "variable", "temporal operator", "'('"});
  }

  NodePtr temporal(TemporalKind k) {
    const Token& kw = next();
    expect(TokenKind::LParen, "'('");
    std::vector<NodePtr> args;
    args.push_back(expr());
    while (accept(TokenKind::Comma)) args.push_back(expr());
    expect(TokenKind::RParen, "')'");
    if (args.size() != temporal_arity(k)) {
      throw Error(ErrorKind::Arity,
                  std::string(to_string(k)) + " takes " + std::to_string(temporal_arity(k)) +
                      " argument(s), got " + std::to_string(args.size()),
                  kw.pos);
    }
    return ast::temporal(k, std::move(args), kw.pos);
  }

  NodePtr navigation(NodePtr receiver) {
    for (;;) {
      if (at(TokenKind::Dot)) {
        next();
        const Token& name = expect(TokenKind::Identifier, "property or operation name");
        if (at(TokenKind::LParen)) {
          receiver = builtin_call(name, std::move(receiver), false);
        } else {
          receiver = ast::navigate(std::move(receiver), name.text, name.pos);
        }
      } else if (at(TokenKind::Arrow)) {
        next();
        const Token& name = peek();
        if (name.kind == TokenKind::Keyword) {
          if (auto k = iterator_keyword(name.text)) {
            next();
            expect(TokenKind::LParen, "'('");
            const Token& v = expect(TokenKind::Identifier, "iterator variable");
            expect(TokenKind::Bar, "'|'");
            auto body = expr();
            expect(TokenKind::RParen, "')'");
            receiver = ast::iterate(*k, std::move(receiver), v.text, std::move(body), name.pos);
            continue;
          }
        }
        if (name.kind != TokenKind::Identifier) {
          fail({"forAll", "exists", "select", "collect", "collection operation"});
        }
        next();
        if (!at(TokenKind::LParen)) fail({"'('"});
        receiver = builtin_call(name, std::move(receiver), true);
      } else {
        return receiver;
      }
    }
  }

  NodePtr builtin_call(const Token& name, NodePtr receiver, bool arrow) {
    auto b = builtin_named(name.text);
    if (!b) {
      throw Error(ErrorKind::Syntax, "unknown operation '" + name.text + "'", name.pos,
                  {"isDefined", "size", "contains", "at", "first", "isEmpty", "includes"});
    }
    expect(TokenKind::LParen, "'('");
    std::vector<NodePtr> args;
    if (!at(TokenKind::RParen)) {
      args.push_back(expr());
      while (accept(TokenKind::Comma)) args.push_back(expr());
    }
    expect(TokenKind::RParen, "')'");
    std::size_t want = (*b == Builtin::Contains || *b == Builtin::At || *b == Builtin::Includes) ? 1 : 0;
    if (args.size() != want) {
      throw Error(ErrorKind::Arity,
                  name.text + " takes " + std::to_string(want) + " argument(s), got " +
                      std::to_string(args.size()),
                  name.pos);
    }
    return ast::call(*b, std::move(receiver), std::move(args), arrow, name.pos);
  }

  static std::optional<TemporalKind> temporal_keyword(std::string_view w) {
    for (auto k : {TemporalKind::Next, TemporalKind::Eventually, TemporalKind::Always,
                   TemporalKind::Until, TemporalKind::AtLeastOnce, TemporalKind::Everytime}) {
      if (to_string(k) == w) return k;
    }
    return std::nullopt;
  }

  static std::optional<IteratorKind> iterator_keyword(std::string_view w) {
    for (auto k : {IteratorKind::ForAll, IteratorKind::Exists, IteratorKind::Select,
                   IteratorKind::Collect}) {
      if (to_string(k) == w) return k;
    }
    return std::nullopt;
  }

  static std::optional<Builtin> builtin_named(std::string_view w) {
    for (auto b : {Builtin::IsDefined, Builtin::Size, Builtin::Contains, Builtin::At,
                   Builtin::First, Builtin::IsEmpty, Builtin::Includes}) {
      if (to_string(b) == w) return b;
    }
    return std::nullopt;
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at(TokenKind k) const { return peek().kind == k; }
  bool at_keyword(std::string_view w) const {
    return peek().kind == TokenKind::Keyword && peek().text == w;
  }
  bool accept(TokenKind k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  const Token& expect(TokenKind k, const std::string& what) {
    if (!at(k)) fail({what});
    return next();
  }
  void expect_keyword(std::string_view w) {
    if (!at_keyword(w)) fail({"'" + std::string(w) + "'"});
    next();
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    std::string msg = "unexpected " + found + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    throw Error(ErrorKind::Syntax, msg, t.pos, std::move(expected));
  }

  std::size_t offset_of(SourcePos p) const {
    int line = 1;
    std::size_t i = 0;
    while (i < src_.size() && line < p.line) {
      if (src_[i++] == '\n') ++line;
    }
    return std::min(src_.size(), i + static_cast<std::size_t>(p.column - 1));
  }

  static std::string trim(std::string_view s) {
    // Trailing comment lines belong to the next block, not to this expression.
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
      std::size_t eol = s.find('\n', i);
      std::string_view line = s.substr(i, eol == std::string_view::npos ? std::string_view::npos : eol - i);
      auto comment = line.find("--");
      if (comment != std::string_view::npos) line = line.substr(0, comment);
      if (!out.empty()) out += '\n';
      out += line;
      if (eol == std::string_view::npos) break;
      i = eol + 1;
    }
    auto b = out.find_first_not_of(" \t\r\n");
    auto e = out.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : out.substr(b, e - b + 1);
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a bare expression without any type information.
inline NodePtr parse_expression(std::string_view src) { return detail::Parser(src).expression_only(); }

/// Parses one or more constraint blocks (syntax only; see check_constraint for typing).
inline std::vector<ParsedConstraint> parse_constraint_blocks(std::string_view src) {
  return detail::Parser(src).constraints();
}

}  // namespace tocl
