#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tocl/ast.hpp"
#include "tocl/parser.hpp"
#include "tocl/printer.hpp"
#include "tocl/schema.hpp"

namespace tocl {

/// A set of state slots evaluated together. Region 0 is the constraint body;
/// further regions are instantiated once per iterator binding or trigger cycle.
struct Region {
  const Node* root = nullptr;
  std::vector<const Node*> slots;
};

/// A parsed, type-checked constraint. Immutable and cheap to copy.
class ConstraintDef {
 public:
  ConstraintDef() = default;

  const std::string& name() const noexcept { return name_; }
  const std::string& context_type() const noexcept { return context_type_; }
  const std::string& source() const noexcept { return source_; }
  const Node& root() const noexcept { return *root_; }
  const std::vector<Region>& regions() const noexcept { return *regions_; }

  /// Number of temporal operator nodes in the syntax tree.
  std::size_t temporal_nodes() const noexcept { return temporal_nodes_; }

  /// Canonical text of the whole constraint.
  std::string to_text() const {
    std::string out = "context " + context_type_ + " inv";
    if (!name_.empty()) out += " " + name_;
    return out + ": " + to_source(*root_);
  }

 private:
  friend ConstraintDef check_constraint(ParsedConstraint, const Schema&);

  std::string name_;
  std::string context_type_;
  std::string source_;
  std::shared_ptr<const Node> root_;
  std::shared_ptr<const std::vector<Region>> regions_;
  std::size_t temporal_nodes_ = 0;
};

namespace detail {

class Checker {
 public:
  Checker(const Schema& schema, std::string context) : schema_(schema), context_(std::move(context)) {}

  void check(Node& n) {
    switch (n.kind) {
      case NodeKind::Literal: {
        const Value& v = n.literal;
        if (v.is_bool()) n.type = StaticType::boolean();
        else if (v.is_int()) n.type = StaticType::integer();
        else if (v.is_real()) n.type = StaticType::real();
        else if (v.is_string()) n.type = StaticType::string();
        else fail(n, "unsupported literal");
        break;
      }
      case NodeKind::SelfRef:
        n.type = StaticType::ref(context_);
        break;
      case NodeKind::VarRef: {
        const StaticType* t = lookup(n.name);
        if (!t) {
          throw Error(ErrorKind::Type, "unbound variable '" + n.name + "'", n.pos);
        }
        n.type = *t;
        break;
      }
      case NodeKind::Navigate: {
        Node& recv = *n.children[0];
        check(recv);
        if (recv.type.base != StaticType::Base::Ref || recv.type.list) {
          fail(n, "cannot navigate '" + n.name + "' on " + to_string(recv.type) +
                      (recv.type.list ? " (use '->' for collections)" : ""));
        }
        const TypeDef& t = schema_.get(recv.type.target);
        const PropertyDecl* p = t.find(n.name);
        if (!p) {
          throw Error(ErrorKind::UnknownProperty,
                      "type '" + t.name + "' has no property '" + n.name + "'", n.pos);
        }
        n.type = type_of(*p);
        break;
      }
      case NodeKind::Call:
        check_call(n);
        break;
      case NodeKind::Compare:
        check_compare(n);
        break;
      case NodeKind::BoolOp:
        check(*n.children[0]);
        check(*n.children[1]);
        require_bool(n.child(0), to_string(n.bool_op));
        require_bool(n.child(1), to_string(n.bool_op));
        n.type = StaticType::boolean();
        break;
      case NodeKind::Not:
        check(*n.children[0]);
        require_bool(n.child(0), "not");
        n.type = StaticType::boolean();
        break;
      case NodeKind::Iterator:
        check_iterator(n);
        break;
      case NodeKind::Temporal:
        if (n.arity() != temporal_arity(n.temporal)) {
          throw Error(ErrorKind::Arity,
                      std::string(to_string(n.temporal)) + " takes " +
                          std::to_string(temporal_arity(n.temporal)) + " argument(s)",
                      n.pos);
        }
        for (auto& c : n.children) {
          check(*c);
          require_bool(*c, to_string(n.temporal));
        }
        n.type = StaticType::boolean();
        break;
    }
    n.has_temporal = n.kind == NodeKind::Temporal;
    for (const auto& c : n.children) n.has_temporal = n.has_temporal || c->has_temporal;
  }

 private:
  void check_call(Node& n) {
    for (auto& c : n.children) check(*c);
    const StaticType& recv = n.child(0).type;
    auto want_args = [&](std::size_t k) {
      if (n.arity() - 1 != k) {
        throw Error(ErrorKind::Arity,
                    std::string(to_string(n.builtin)) + " takes " + std::to_string(k) + " argument(s)",
                    n.pos);
      }
    };
    switch (n.builtin) {
      case Builtin::IsDefined:
        want_args(0);
        n.type = StaticType::boolean();
        return;
      case Builtin::Size:
        want_args(0);
        if (!recv.list && recv.base != StaticType::Base::String) fail(n, "size() needs a String or collection");
        n.type = StaticType::integer();
        return;
      case Builtin::Contains:
        want_args(1);
        if (recv.list || recv.base != StaticType::Base::String) fail(n, "contains() needs a String receiver");
        if (n.child(1).type != StaticType::string()) fail(n, "contains() needs a String argument");
        n.type = StaticType::boolean();
        return;
      case Builtin::IsEmpty:
        want_args(0);
        if (!recv.list) fail(n, "isEmpty() needs a collection");
        n.type = StaticType::boolean();
        return;
      case Builtin::Includes:
        want_args(1);
        if (!recv.list) fail(n, "includes() needs a collection");
        if (!comparable(recv.element(), n.child(1).type)) {
          fail(n, "includes() argument " + to_string(n.child(1).type) + " does not match " +
                      to_string(recv.element()));
        }
        n.type = StaticType::boolean();
        return;
      case Builtin::At:
        want_args(1);
        if (!recv.list) fail(n, "at() needs a collection");
        if (n.child(1).type != StaticType::integer()) fail(n, "at() needs an Integer index");
        n.type = recv.element();
        return;
      case Builtin::First:
        want_args(0);
        if (!recv.list) fail(n, "first() needs a collection");
        n.type = recv.element();
        return;
    }
  }

  void check_compare(Node& n) {
    check(*n.children[0]);
    check(*n.children[1]);
    const StaticType& l = n.child(0).type;
    const StaticType& r = n.child(1).type;
    bool ordering = n.compare != CompareOp::Eq && n.compare != CompareOp::Ne;
    if (ordering) {
      bool ok = (l.is_numeric() && r.is_numeric()) ||
                (l == StaticType::string() && r == StaticType::string());
      if (!ok) fail(n, "cannot order " + to_string(l) + " and " + to_string(r));
    } else if (!comparable(l, r)) {
      fail(n, "cannot compare " + to_string(l) + " with " + to_string(r));
    }
    n.type = StaticType::boolean();
  }

  void check_iterator(Node& n) {
    Node& source = *n.children[0];
    check(source);
    if (!source.type.list) fail(n, std::string(to_string(n.iterator)) + " needs a collection");
    if (n.name == "self") fail(n, "cannot rebind 'self'");
    vars_.emplace_back(n.name, source.type.element());
    check(*n.children[1]);
    vars_.pop_back();
    const StaticType& body = n.child(1).type;
    switch (n.iterator) {
      case IteratorKind::ForAll:
      case IteratorKind::Exists:
        require_bool(n.child(1), to_string(n.iterator));
        n.type = StaticType::boolean();
        break;
      case IteratorKind::Select:
        require_bool(n.child(1), "select");
        n.type = source.type;
        break;
      case IteratorKind::Collect:
        if (body.list) fail(n, "collect() body must not be a collection");
        n.type = body.as_list();
        break;
    }
  }

  static bool comparable(const StaticType& l, const StaticType& r) {
    if (l.list != r.list) return false;
    if ((l.base == StaticType::Base::Int || l.base == StaticType::Base::Real) &&
        (r.base == StaticType::Base::Int || r.base == StaticType::Base::Real)) {
      return true;
    }
    return l.base == r.base;
  }

  void require_bool(const Node& n, std::string_view where) const {
    if (!n.type.is_bool()) {
      throw Error(ErrorKind::Type,
                  std::string(where) + " expects a Boolean operand, got " + to_string(n.type), n.pos);
    }
  }

  [[noreturn]] static void fail(const Node& n, const std::string& msg) {
    throw Error(ErrorKind::Type, msg, n.pos);
  }

  const StaticType* lookup(const std::string& name) const {
    for (auto it = vars_.rbegin(); it != vars_.rend(); ++it) {
      if (it->first == name) return &it->second;
    }
    return nullptr;
  }

  static StaticType type_of(const PropertyDecl& p) {
    StaticType t;
    switch (element_kind(p.kind)) {
      case PropertyKind::Bool: t = StaticType::boolean(); break;
      case PropertyKind::Int: t = StaticType::integer(); break;
      case PropertyKind::Real: t = StaticType::real(); break;
      case PropertyKind::String: t = StaticType::string(); break;
      default: t = StaticType::ref(p.target); break;
    }
    return is_list_kind(p.kind) ? t.as_list() : t;
  }

  const Schema& schema_;
  std::string context_;
  std::vector<std::pair<std::string, StaticType>> vars_;
};

inline std::size_t assign_slots(Node& n, int region, std::vector<Region>& regions) {
  std::size_t temporal = 0;
  bool spawns = false;
  if (n.kind == NodeKind::Temporal) {
    ++temporal;
    n.slot = static_cast<int>(regions[region].slots.size());
    regions[region].slots.push_back(&n);
    spawns = is_trigger(n.temporal) && n.child(1).has_temporal;
  } else if (n.kind == NodeKind::Iterator && n.child(1).has_temporal) {
    n.slot = static_cast<int>(regions[region].slots.size());
    regions[region].slots.push_back(&n);
    spawns = true;
  }
  if (spawns) {
    // The last child (iterator body, trigger consequence) gets its own region.
    temporal += assign_slots(*n.children[0], region, regions);
    n.child_region = static_cast<int>(regions.size());
    regions.push_back(Region{n.children[1].get(), {}});
    temporal += assign_slots(*n.children[1], n.child_region, regions);
    return temporal;
  }
  for (auto& c : n.children) temporal += assign_slots(*c, region, regions);
  return temporal;
}

}  // namespace detail

/// Type-checks a parsed constraint against the schema and prepares its state layout.
inline ConstraintDef check_constraint(ParsedConstraint parsed, const Schema& schema) {
  if (!schema.find(parsed.context_type)) {
    throw Error(ErrorKind::UnknownType, "unknown context type '" + parsed.context_type + "'",
                parsed.context_pos);
  }
  NodePtr root = std::move(parsed.root);
  detail::Checker(schema, parsed.context_type).check(*root);
  if (!root->type.is_bool()) {
    throw Error(ErrorKind::Type, "constraint must be Boolean, got " + to_string(root->type), root->pos);
  }
  auto regions = std::make_shared<std::vector<Region>>();
  regions->push_back(Region{root.get(), {}});
  std::size_t temporal = detail::assign_slots(*root, 0, *regions);

  ConstraintDef def;
  def.name_ = std::move(parsed.name);
  def.context_type_ = std::move(parsed.context_type);
  def.source_ = std::move(parsed.source);
  def.root_ = std::shared_ptr<const Node>(std::move(root));
  def.regions_ = std::move(regions);
  def.temporal_nodes_ = temporal;
  return def;
}

/// Parses and checks exactly one `context T inv [name]: expr` constraint.
inline ConstraintDef parse_constraint(std::string_view source, const Schema& schema) {
  auto blocks = parse_constraint_blocks(source);
  if (blocks.size() != 1) {
    throw Error(ErrorKind::Syntax, "expected exactly one constraint, found " + std::to_string(blocks.size()),
                SourcePos{1, 1});
  }
  return check_constraint(std::move(blocks.front()), schema);
}

/// Parses a constraint file. Unnamed constraints are named `<Type>_<n>` by position.
inline std::vector<ConstraintDef> parse_constraint_file(std::string_view text, const Schema& schema) {
  std::vector<ConstraintDef> out;
  auto blocks = parse_constraint_blocks(text);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].name.empty()) blocks[i].name = blocks[i].context_type + "_" + std::to_string(i + 1);
    for (const auto& prev : out) {
      if (prev.name() == blocks[i].name) {
        throw Error(ErrorKind::Format, "duplicate constraint name '" + blocks[i].name + "'",
                    blocks[i].context_pos);
      }
    }
    out.push_back(check_constraint(std::move(blocks[i]), schema));
  }
  return out;
}

}  // namespace tocl
