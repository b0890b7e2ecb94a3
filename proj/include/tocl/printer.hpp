#pragma once

#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include "tocl/ast.hpp"

namespace tocl {

namespace detail {

// Binding strength: or/xor < and < not < comparison < primary.
inline int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::BoolOp: return n.bool_op == BoolOpKind::And ? 2 : 1;
    case NodeKind::Not: return 3;
    case NodeKind::Compare: return 4;
    default: return 5;
  }
}

inline void print_literal(std::ostream& os, const Value& v) {
  if (v.is_string()) {
    os << '\'';
    for (char c : v.as_string()) {
      if (c == '\'' || c == '\\') os << '\\';
      os << c;
    }
    os << '\'';
  } else if (v.is_real()) {
    std::ostringstream tmp;
    tmp << std::setprecision(std::numeric_limits<double>::max_digits10) << v.as_number();
    std::string s = tmp.str();
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    os << s;
  } else if (v.is_bool()) {
    os << (v.as_bool() ? "true" : "false");
  } else if (v.is_int()) {
    os << v.as_int();
  } else {
    write_value(os, v);
  }
}

inline void print(std::ostream& os, const Node& n);

inline void print_operand(std::ostream& os, const Node& n, int min_prec) {
  if (precedence(n) < min_prec) {
    os << '(';
    print(os, n);
    os << ')';
  } else {
    print(os, n);
  }
}

inline void print(std::ostream& os, const Node& n) {
  switch (n.kind) {
    case NodeKind::Literal:
      print_literal(os, n.literal);
      break;
    case NodeKind::SelfRef:
      os << "self";
      break;
    case NodeKind::VarRef:
      os << n.name;
      break;
    case NodeKind::Navigate:
      print_operand(os, n.child(0), 5);
      os << '.' << n.name;
      break;
    case NodeKind::Call:
      print_operand(os, n.child(0), 5);
      os << (n.arrow ? "->" : ".") << to_string(n.builtin) << '(';
      for (std::size_t i = 1; i < n.arity(); ++i) {
        if (i > 1) os << ", ";
        print(os, n.child(i));
      }
      os << ')';
      break;
    case NodeKind::Compare:
      print_operand(os, n.child(0), 5);
      os << ' ' << to_string(n.compare) << ' ';
      print_operand(os, n.child(1), 5);
      break;
    case NodeKind::BoolOp: {
      int p = precedence(n);
      print_operand(os, n.child(0), p);
      os << ' ' << to_string(n.bool_op) << ' ';
      // Left-associative: an equal-precedence right operand needs parentheses.
      print_operand(os, n.child(1), p + 1);
      break;
    }
    case NodeKind::Not:
      os << "not(";
      print(os, n.child(0));
      os << ')';
      break;
    case NodeKind::Iterator:
      print_operand(os, n.child(0), 5);
      os << "->" << to_string(n.iterator) << '(' << n.name << " | ";
      print(os, n.child(1));
      os << ')';
      break;
    case NodeKind::Temporal:
      os << to_string(n.temporal) << '(';
      for (std::size_t i = 0; i < n.arity(); ++i) {
        if (i) os << ", ";
        print(os, n.child(i));
      }
      os << ')';
      break;
  }
}

}  // namespace detail

/// Renders an expression in the surface syntax with minimal parentheses.
inline std::string to_source(const Node& n) {
  std::ostringstream os;
  detail::print(os, n);
  return os.str();
}

}  // namespace tocl
