#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "tocl/ast.hpp"
#include "tocl/error.hpp"
#include "tocl/parser.hpp"
#include "tocl/printer.hpp"

namespace tocl {

struct Pattern {
  std::string_view name;
  int arity;                // 1 or 2
  std::string_view formula; // over the placeholders A and B
  bool derived;             // built from the base patterns
};

inline const std::vector<Pattern>& pattern_table() {
  static const std::vector<Pattern> table = {
      {"existence", 1, "eventually(A)", false},
      {"absence2", 1, "atLeastOnce(A, always(A) or not(atLeastOnce(not(A), A)))", false},
      {"alternatingPrecedence", 2, "until(not(B), A) and everytime(B, always(B) or until(not(B), A))",
       false},
      {"alternatingSuccession", 2,
       "everytime(A, eventually(B) and (always(A) or until(not(A), B))) and until(not(B), A) and "
       "everytime(B, always(B) or until(not(B), A))",
       false},
      {"chainResponse", 2, "until(not(B), A) and everytime(A, until(A, B))", false},
      {"chainPrecedence", 2,
       "everytime(A, always(A or eventually(B)) or not(eventually(B))) and until(not(B), A)", false},
      {"chainSuccession", 2, "everytime(A, until(A, B)) and everytime(B, until(B, A))", false},
      {"negationSuccession", 2, "atLeastOnce(A, not(eventually(B)))", false},
      {"negationChainSuccession", 2, "everytime(A, not(until(A, B))) and everytime(B, not(until(A, B)))",
       false},
      {"response", 2, "everytime(A, eventually(B))", true},
      {"precedence", 2, "until(not(B), A)", true},
      {"succession", 2, "everytime(A, eventually(B)) and until(not(B), A)", true},
      {"respondedExistence", 2, "atLeastOnce(A, eventually(B))", true},
      {"coExistence", 2, "atLeastOnce(A, eventually(B)) and atLeastOnce(B, eventually(A))", true},
      {"existence2", 1, "eventually(A and not(always(A or always(not(A)))))", true},
      {"existence3", 1,
       "eventually(A and not(always(A or always(not(A and not(always(A or always(not(A)))))))))", true},
      {"exclusiveChoice", 2, "eventually(A) xor eventually(B)", true},
      {"notCoExistence", 2, "not(eventually(A) and eventually(B))", true},
  };
  return table;
}

inline const Pattern* find_pattern(std::string_view name) {
  const auto& t = pattern_table();
  auto it = std::find_if(t.begin(), t.end(), [&](const Pattern& p) { return p.name == name; });
  return it == t.end() ? nullptr : &*it;
}

namespace detail {

inline void substitute(NodePtr& n, const Node& a, const Node* b) {
  if (n->kind == NodeKind::VarRef && (n->name == "A" || n->name == "B")) {
    n = n->name == "A" ? a.clone() : b->clone();
    return;
  }
  for (auto& c : n->children) substitute(c, a, b);
}

}  // namespace detail

/// The pattern's formula with A and B replaced by the given expressions.
/// `strict` admits only the verbatim table entries.
inline NodePtr expand_pattern(std::string_view name, const Node& a, const Node* b, bool strict = false) {
  const Pattern* p = find_pattern(name);
  if (!p || (strict && p->derived)) {
    throw Error(ErrorKind::UnknownPattern, "unknown pattern '" + std::string(name) + "'");
  }
  if ((p->arity == 2) != (b != nullptr)) {
    throw Error(ErrorKind::Arity, "pattern '" + std::string(name) + "' takes " +
                                      std::to_string(p->arity) + " argument(s)");
  }
  NodePtr out = parse_expression(p->formula);
  detail::substitute(out, a, b);
  return out;
}

inline std::string expand_pattern(std::string_view name, std::string_view a,
                                  std::string_view b = {}, bool strict = false) {
  NodePtr na = parse_expression(a);
  NodePtr nb = b.empty() ? nullptr : parse_expression(b);
  return to_source(*expand_pattern(name, *na, nb.get(), strict));
}

}  // namespace tocl
