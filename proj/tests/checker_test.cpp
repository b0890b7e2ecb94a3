#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace tocl;

namespace {

ErrorKind check_error(const std::string& src) {
  try {
    parse_constraint(src, tt::schema());
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "accepted: " << src;
  return ErrorKind::Format;
}

}  // namespace

TEST(Checker, AcceptsWellTypedConstraints) {
  for (const char* src : {
           "context Requirement inv: eventually(self.status = 'Reviewed')",
           "context ChangeRequest inv: self.requirements->forAll(r | eventually(r.status = 'Ready for Review'))",
           "context Item inv: self.n < 3 and self.x >= 1 and self.n = self.x",
           "context Item inv: self.items->select(i | i.a)->size() > 0",
           "context Item inv: self.items->collect(i | i.n)->includes(2)",
           "context Item inv: self.tags->includes('x') and not(self.tags->isEmpty())",
           "context Item inv: self.items->at(1).link.a or self.items->first().b",
           "context Item inv: self.s.size() > 2 and self.s.contains('ab')",
           "context Item inv: self.link.isDefined() and self.link <> self",
           "context BugReport inv: next(self.assignee.isDefined())",
       }) {
    EXPECT_NO_THROW(parse_constraint(src, tt::schema())) << src;
  }
}

TEST(Checker, Errors) {
  EXPECT_EQ(check_error("context Nope inv: true"), ErrorKind::UnknownType);
  EXPECT_EQ(check_error("context Requirement inv: self.state = 'x'"), ErrorKind::UnknownProperty);
  EXPECT_EQ(check_error("context Item inv: self.link.missing"), ErrorKind::UnknownProperty);
  EXPECT_EQ(check_error("context Requirement inv: self.status"), ErrorKind::Type);
  EXPECT_EQ(check_error("context Requirement inv: eventually(self.status)"), ErrorKind::Type);
  EXPECT_EQ(check_error("context Item inv: self.n = 'x'"), ErrorKind::Type);
  EXPECT_EQ(check_error("context Item inv: self.a < self.b"), ErrorKind::Type);
  EXPECT_EQ(check_error("context Item inv: self.items.a"), ErrorKind::Type);
  EXPECT_EQ(check_error("context Item inv: self.n.a"), ErrorKind::Type);
  EXPECT_EQ(check_error("context Item inv: self.items->forAll(i | i.n)"), ErrorKind::Type);
  EXPECT_EQ(check_error("context Item inv: x.a"), ErrorKind::Type);
  EXPECT_EQ(check_error("context Item inv: self.n->isEmpty()"), ErrorKind::Type);
  EXPECT_EQ(check_error("context Item inv: self.items->at('1').a"), ErrorKind::Type);
  EXPECT_EQ(check_error("context Item inv: not(self.n)"), ErrorKind::Type);
}

TEST(Checker, FileNamesAndDuplicates) {
  auto defs = parse_constraint_file(
      "context Requirement inv: eventually(self.status = 'A')\n"
      "context Requirement inv named: always(self.status = 'A')\n"
      "context Requirement inv: next(self.status = 'B')\n",
      tt::schema());
  ASSERT_EQ(defs.size(), 3u);
  EXPECT_EQ(defs[0].name(), "Requirement_1");
  EXPECT_EQ(defs[1].name(), "named");
  EXPECT_EQ(defs[2].name(), "Requirement_3");
  EXPECT_THROW(parse_constraint_file("context Item inv x: self.a\ncontext Item inv x: self.b\n", tt::schema()), Error);
}

TEST(Checker, RegionsAndSlots) {
  auto d = tt::def(
      "context ChangeRequest inv: always(self.status <> 'Closed') and "
      "self.requirements->forAll(r | everytime(r.status = 'Draft', eventually(r.status = 'Ready')))");
  EXPECT_EQ(d.temporal_nodes(), 3u);
  ASSERT_EQ(d.regions().size(), 3u);
  EXPECT_EQ(d.regions()[0].slots.size(), 2u);  // always, forAll
  EXPECT_EQ(d.regions()[1].slots.size(), 1u);  // everytime per binding
  EXPECT_EQ(d.regions()[2].slots.size(), 1u);  // eventually per trigger cycle
}

TEST(Checker, PlainConstraintsHaveNoState) {
  auto d = tt::def("context Item inv: self.items->forAll(i | i.a)");
  EXPECT_EQ(d.temporal_nodes(), 0u);
  EXPECT_EQ(d.regions().size(), 1u);
  EXPECT_TRUE(d.regions()[0].slots.empty());
}

TEST(Checker, CanonicalText) {
  auto d = tt::def("context Requirement inv c1:\n  eventually( self.status='Reviewed' )");
  EXPECT_EQ(d.to_text(), "context Requirement inv c1: eventually(self.status = 'Reviewed')");
}
