#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tocl/error.hpp"
#include "tocl/value.hpp"

namespace tocl {

enum class NodeKind { Literal, SelfRef, VarRef, Navigate, Call, Compare, BoolOp, Not, Iterator, Temporal };
enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class BoolOpKind { And, Or, Xor };
enum class IteratorKind { ForAll, Exists, Select, Collect };
enum class TemporalKind { Next, Eventually, Always, Until, AtLeastOnce, Everytime };
enum class Builtin { IsDefined, Size, Contains, At, First, IsEmpty, Includes };

constexpr std::string_view to_string(CompareOp op) noexcept {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "<>";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

constexpr std::string_view to_string(BoolOpKind op) noexcept {
  switch (op) {
    case BoolOpKind::And: return "and";
    case BoolOpKind::Or: return "or";
    case BoolOpKind::Xor: return "xor";
  }
  return "?";
}

constexpr std::string_view to_string(IteratorKind k) noexcept {
  switch (k) {
    case IteratorKind::ForAll: return "forAll";
    case IteratorKind::Exists: return "exists";
    case IteratorKind::Select: return "select";
    case IteratorKind::Collect: return "collect";
  }
  return "?";
}

constexpr std::string_view to_string(TemporalKind k) noexcept {
  switch (k) {
    case TemporalKind::Next: return "next";
    case TemporalKind::Eventually: return "eventually";
    case TemporalKind::Always: return "always";
    case TemporalKind::Until: return "until";
    case TemporalKind::AtLeastOnce: return "atLeastOnce";
    case TemporalKind::Everytime: return "everytime";
  }
  return "?";
}

constexpr std::string_view to_string(Builtin b) noexcept {
  switch (b) {
    case Builtin::IsDefined: return "isDefined";
    case Builtin::Size: return "size";
    case Builtin::Contains: return "contains";
    case Builtin::At: return "at";
    case Builtin::First: return "first";
    case Builtin::IsEmpty: return "isEmpty";
    case Builtin::Includes: return "includes";
  }
  return "?";
}

constexpr std::size_t temporal_arity(TemporalKind k) noexcept {
  switch (k) {
    case TemporalKind::Next:
    case TemporalKind::Eventually:
    case TemporalKind::Always: return 1;
    default: return 2;
  }
}

constexpr bool is_trigger(TemporalKind k) noexcept {
  return k == TemporalKind::AtLeastOnce || k == TemporalKind::Everytime;
}

/// Static type computed by the checker.
struct StaticType {
  enum class Base { Unknown, Bool, Int, Real, String, Ref };
  Base base = Base::Unknown;
  bool list = false;
  std::string target;  // Ref element type

  static StaticType boolean() { return {Base::Bool, false, {}}; }
  static StaticType integer() { return {Base::Int, false, {}}; }
  static StaticType real() { return {Base::Real, false, {}}; }
  static StaticType string() { return {Base::String, false, {}}; }
  static StaticType ref(std::string t) { return {Base::Ref, false, std::move(t)}; }

  StaticType element() const { return {base, false, target}; }
  StaticType as_list() const { return {base, true, target}; }
  bool is_bool() const { return base == Base::Bool && !list; }
  bool is_numeric() const { return (base == Base::Int || base == Base::Real) && !list; }

  friend bool operator==(const StaticType&, const StaticType&) = default;
};

inline std::string to_string(const StaticType& t) {
  std::string s;
  switch (t.base) {
    case StaticType::Base::Unknown: s = "?"; break;
    case StaticType::Base::Bool: s = "Boolean"; break;
    case StaticType::Base::Int: s = "Integer"; break;
    case StaticType::Base::Real: s = "Real"; break;
    case StaticType::Base::String: s = "String"; break;
    case StaticType::Base::Ref: s = t.target; break;
  }
  return t.list ? "Sequence(" + s + ")" : s;
}

/// Expression node. Payload fields are meaningful per kind:
///   Literal  - literal
///   VarRef   - name
///   Navigate - name (property); children[0] receiver
///   Call     - builtin, arrow; children[0] receiver, rest arguments
///   Compare  - compare; 2 children
///   BoolOp   - bool_op; 2 children
///   Not      - 1 child
///   Iterator - iterator, name (bound variable); children[0] source, children[1] body
///   Temporal - temporal; 1 or 2 children
struct Node {
  NodeKind kind = NodeKind::Literal;
  SourcePos pos;
  std::vector<std::unique_ptr<Node>> children;

  Value literal;
  std::string name;
  CompareOp compare = CompareOp::Eq;
  BoolOpKind bool_op = BoolOpKind::And;
  IteratorKind iterator = IteratorKind::ForAll;
  TemporalKind temporal = TemporalKind::Next;
  Builtin builtin = Builtin::IsDefined;
  bool arrow = false;

  // Filled in by the checker.
  StaticType type;
  bool has_temporal = false;
  int slot = -1;          // state slot in the enclosing region, -1 if stateless
  int child_region = -1;  // region spawned per binding (iterator body) or per trigger cycle (B)

  const Node& child(std::size_t i) const { return *children.at(i); }
  std::size_t arity() const noexcept { return children.size(); }

  std::unique_ptr<Node> clone() const {
    auto n = std::make_unique<Node>();
    n->kind = kind;
    n->pos = pos;
    n->literal = literal;
    n->name = name;
    n->compare = compare;
    n->bool_op = bool_op;
    n->iterator = iterator;
    n->temporal = temporal;
    n->builtin = builtin;
    n->arrow = arrow;
    for (const auto& c : children) n->children.push_back(c->clone());
    return n;
  }
};

using NodePtr = std::unique_ptr<Node>;

/// Structural equality: ignores positions and checker annotations.
inline bool same_structure(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case NodeKind::Literal:
      if (!(a.literal == b.literal)) return false;
      break;
    case NodeKind::VarRef:
    case NodeKind::Navigate:
      if (a.name != b.name) return false;
      break;
    case NodeKind::Call:
      if (a.builtin != b.builtin || a.arrow != b.arrow) return false;
      break;
    case NodeKind::Compare:
      if (a.compare != b.compare) return false;
      break;
    case NodeKind::BoolOp:
      if (a.bool_op != b.bool_op) return false;
      break;
    case NodeKind::Iterator:
      if (a.iterator != b.iterator || a.name != b.name) return false;
      break;
    case NodeKind::Temporal:
      if (a.temporal != b.temporal) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!same_structure(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

namespace ast {

inline NodePtr make(NodeKind kind, SourcePos pos = {}) {
  auto n = std::make_unique<Node>();
  n->kind = kind;
  n->pos = pos;
  return n;
}

inline NodePtr literal(Value v, SourcePos pos = {}) {
  auto n = make(NodeKind::Literal, pos);
  n->literal = std::move(v);
  return n;
}

inline NodePtr self(SourcePos pos = {}) { return make(NodeKind::SelfRef, pos); }

inline NodePtr var(std::string name, SourcePos pos = {}) {
  auto n = make(NodeKind::VarRef, pos);
  n->name = std::move(name);
  return n;
}

inline NodePtr navigate(NodePtr receiver, std::string property, SourcePos pos = {}) {
  auto n = make(NodeKind::Navigate, pos);
  n->name = std::move(property);
  n->children.push_back(std::move(receiver));
  return n;
}

inline NodePtr call(Builtin b, NodePtr receiver, std::vector<NodePtr> args, bool arrow,
                    SourcePos pos = {}) {
  auto n = make(NodeKind::Call, pos);
  n->builtin = b;
  n->arrow = arrow;
  n->children.push_back(std::move(receiver));
  for (auto& a : args) n->children.push_back(std::move(a));
  return n;
}

inline NodePtr compare(CompareOp op, NodePtr lhs, NodePtr rhs, SourcePos pos = {}) {
  auto n = make(NodeKind::Compare, pos);
  n->compare = op;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return n;
}

inline NodePtr bool_op(BoolOpKind op, NodePtr lhs, NodePtr rhs, SourcePos pos = {}) {
  auto n = make(NodeKind::BoolOp, pos);
  n->bool_op = op;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return n;
}

inline NodePtr negation(NodePtr operand, SourcePos pos = {}) {
  auto n = make(NodeKind::Not, pos);
  n->children.push_back(std::move(operand));
  return n;
}

inline NodePtr iterate(IteratorKind k, NodePtr source, std::string variable, NodePtr body,
                       SourcePos pos = {}) {
  auto n = make(NodeKind::Iterator, pos);
  n->iterator = k;
  n->name = std::move(variable);
  n->children.push_back(std::move(source));
  n->children.push_back(std::move(body));
  return n;
}

inline NodePtr temporal(TemporalKind k, std::vector<NodePtr> args, SourcePos pos = {}) {
  auto n = make(NodeKind::Temporal, pos);
  n->temporal = k;
  for (auto& a : args) n->children.push_back(std::move(a));
  return n;
}

inline NodePtr temporal(TemporalKind k, NodePtr a, SourcePos pos = {}) {
  std::vector<NodePtr> args;
  args.push_back(std::move(a));
  return temporal(k, std::move(args), pos);
}

inline NodePtr temporal(TemporalKind k, NodePtr a, NodePtr b, SourcePos pos = {}) {
  std::vector<NodePtr> args;
  args.push_back(std::move(a));
  args.push_back(std::move(b));
  return temporal(k, std::move(args), pos);
}

}  // namespace ast
}  // namespace tocl
