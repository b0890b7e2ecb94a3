#include <gtest/gtest.h>

#include <algorithm>

#include "test_support.hpp"

using namespace tocl;
using tt::pF;
using tt::pT;
using tt::tF;
using tt::tT;

namespace {

std::string pattern(const std::string& name, const std::string& a, const std::string& b, bool strict) {
  return tt::requirement(expand_pattern(name, tt::is(a), b.empty() ? "" : tt::is(b), strict));
}

}  // namespace

TEST(PatternTable, VerbatimFormulasExpand) {
  auto a = parse_expression("self.status = 'x'");
  auto b = parse_expression("self.title.isDefined()");
  int verbatim = 0;
  for (const auto& p : pattern_table()) {
    if (p.derived) continue;
    ++verbatim;
    auto got = expand_pattern(p.name, *a, p.arity == 2 ? b.get() : nullptr, true);
    std::string text(p.formula);
    auto replace = [&](const std::string& from, const std::string& to) {
      for (std::size_t pos = 0; (pos = text.find(from, pos)) != std::string::npos; pos += to.size()) {
        text.replace(pos, from.size(), to);
      }
    };
    replace("A", "(self.status = 'x')");
    replace("B", "(self.title.isDefined())");
    EXPECT_TRUE(same_structure(*got, *parse_expression(text))) << p.name;
  }
  EXPECT_EQ(verbatim, 9);
  EXPECT_EQ(pattern_table().size(), 18u);
}

TEST(PatternTable, StrictRejectsDerived) {
  EXPECT_THROW(expand_pattern("response", "true", "false", true), Error);
  EXPECT_NO_THROW(expand_pattern("response", "true", "false", false));
  try {
    expand_pattern("nope", "true");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownPattern);
  }
}

TEST(PatternTable, ArityIsChecked) {
  try {
    expand_pattern("existence", "true", "false");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Arity);
  }
  EXPECT_THROW(expand_pattern("chainResponse", "true"), Error);
}

TEST(PatternTable, ExpansionsTypeCheck) {
  for (const auto& p : pattern_table()) {
    auto c = pattern(std::string(p.name), "Draft", p.arity == 2 ? "Reviewed" : "", false);
    EXPECT_NO_THROW(tt::def(c)) << c;
  }
}

TEST(Patterns, HandBuiltTraces) {
  for (const auto& c : tt::pattern_cases()) {
    EXPECT_EQ(tt::status_trace(c.constraint, c.statuses), c.expected) << c.name;
    EXPECT_EQ(tt::status_trace_oracle(c.constraint, c.statuses), c.expected) << c.name;
  }
}

TEST(Patterns, EveryVerbatimPatternHasThreeKindsOfTrace) {
  for (const auto& p : pattern_table()) {
    if (p.derived) continue;
    for (const char* kind : {" satisfying", " violating", " idle"}) {
      std::string name = std::string(p.name) + kind;
      bool found = std::any_of(tt::pattern_cases().begin(), tt::pattern_cases().end(),
                               [&](const tt::StatusCase& c) { return c.name == name; });
      EXPECT_TRUE(found) << name;
    }
  }
}

TEST(Patterns, AllPatternsAgreeWithOracleOnShortTraces) {
  auto traces = tt::all_ab_traces(6);
  for (const auto& p : pattern_table()) {
    std::string c = "context Item inv: " +
                    expand_pattern(p.name, "self.a", p.arity == 2 ? "self.b" : "", false);
    for (const auto& t : traces) {
      ASSERT_EQ(tt::ab_trace(c, t), tt::ab_trace_oracle(c, t)) << p.name;
    }
  }
}
