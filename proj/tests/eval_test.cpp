#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace tocl;
using tt::pF;
using tt::pT;
using tt::tF;
using tt::tT;

TEST(Eval, ReviewScenario) {
  tt::Run run({"context Requirement inv C1: eventually(self.status = 'Reviewed')",
               "context Requirement inv C2: always(self.status = 'Ready for Review')"});
  run.create("req", "Requirement", {{"status", tt::str("Ready for Review")}});
  EXPECT_EQ(run.value(0), tF);
  EXPECT_EQ(run.value(1), tT);
  run.set("req", "status", tt::str("Reviewed"));
  EXPECT_EQ(run.value(0), pT);
  EXPECT_EQ(run.value(1), pF);
}

TEST(Eval, TerminatedNodeIsNotReadAgain) {
  ArtifactGraph g(tt::schema());
  g.apply({1, "", {Change::create("req", "Requirement", {{"status", tt::str("Reviewed")}})}});
  auto d = tt::def("context Requirement inv: eventually(self.status = 'Reviewed') and self.title.isDefined()");
  EvalTree tree(d);
  auto first = tree.evaluate(g, "req");
  EXPECT_EQ(first.reads, (std::vector<Tuple>{{"req", "status"}, {"req", "title"}}));
  g.apply({2, "", {Change::set("req", "status", tt::str("Draft"))}});
  auto second = tree.evaluate(g, "req");
  EXPECT_EQ(second.reads, (std::vector<Tuple>{{"req", "title"}}));
  EXPECT_EQ(second.value, tF);
}

TEST(Eval, PlainConstraintsAreFluents) {
  tt::Run run({"context Requirement inv: self.status = 'Open'"});
  run.create("r", "Requirement", {{"status", tt::str("Open")}});
  EXPECT_EQ(run.value(), tT);
  run.set("r", "status", tt::str("Closed"));
  EXPECT_EQ(run.value(), tF);
  run.set("r", "status", tt::str("Open"));
  EXPECT_EQ(run.value(), tT);
}

TEST(Eval, ForAllOverChildEventually) {
  tt::Run run({"context ChangeRequest inv: self.requirements->forAll(r | eventually(r.status = 'Ready for Review'))"});
  run.create("req1", "Requirement", {{"status", tt::str("Draft")}});
  run.create("req2", "Requirement", {{"status", tt::str("Ready for Review")}});
  run.create("cr", "ChangeRequest", {{"requirements", Value(Value::List{Value(Ref{"req1"}), Value(Ref{"req2"})})}});
  EXPECT_FALSE(holds(run.value()));
  run.set("req2", "status", tt::str("Draft"));
  EXPECT_FALSE(holds(run.value()));
  run.set("req1", "status", tt::str("Ready for Review"));
  EXPECT_TRUE(holds(run.value()));
  EXPECT_EQ(run.value(), tT);  // the collection may still grow
}

TEST(Eval, ChildStateFollowsCollectionMembership) {
  tt::Run run({"context ChangeRequest inv: self.requirements->forAll(r | always(r.status <> 'Rejected'))"});
  run.create("r1", "Requirement", {{"status", tt::str("Rejected")}});
  run.create("cr", "ChangeRequest", {{"requirements", Value(Value::List{Value(Ref{"r1"})})}});
  EXPECT_EQ(run.value(), tF);
  run.apply({Change::remove("cr", "requirements", Value(Ref{"r1"}))});
  EXPECT_EQ(run.value(), tT);
  run.set("r1", "status", tt::str("Draft"));
  run.apply({Change::add("cr", "requirements", Value(Ref{"r1"}))});
  EXPECT_EQ(run.value(), tT);
  EXPECT_EQ(run.engine.census().bindings, 1u);
}

TEST(Eval, NextProbesItsArgumentAtActivation) {
  tt::Run run({"context BugReport inv: next(self.assignee.isDefined())"});
  auto rep = run.create("bug", "BugReport");
  EXPECT_EQ(run.value(), tF);
  EXPECT_TRUE(run.engine.index().scope(0).contains({"bug", "assignee"}));
  EXPECT_EQ(run.set("bug", "status", tt::str("New")).evaluations(), 0u);
  run.set("bug", "assignee", tt::str("ana"));
  EXPECT_EQ(run.value(), pT);
}

TEST(Eval, NextFailsPermanently) {
  tt::Run run({"context Item inv: next(self.a)"});
  run.create("i", "Item", {{"a", Value(true)}, {"n", Value(std::int64_t(0))}});
  EXPECT_EQ(run.value(), tF);
  run.set("i", "a", Value(false));
  EXPECT_EQ(run.value(), pF);
}

TEST(Eval, NextOfTemporalArgumentWaitsForIt) {
  tt::Run run({"context Item inv: next(eventually(self.a))"});
  run.create("i", "Item", {{"a", Value(false)}, {"n", Value(std::int64_t(0))}});
  EXPECT_EQ(run.value(), tF);
  EXPECT_EQ(run.set("i", "n", Value(std::int64_t(1))).evaluations(), 0u);
  run.set("i", "b", Value(true));
  run.set("i", "a", Value(false));
  run.set("i", "a", Value(true));
  EXPECT_EQ(run.value(), pT);
}

TEST(Eval, UndefinedValues) {
  tt::Run run({"context Item inv: not(self.link.n = 3) and self.link.link.isDefined() = false and not(self.s < 'm')"});
  run.create("i", "Item");
  EXPECT_EQ(run.value(), tT);
  EXPECT_TRUE(run.engine.instance(0).errors.empty());
}

TEST(Eval, DanglingReferenceIsReportedAndFalse) {
  tt::Run run({"context Item inv: always(self.link.a or self.b)"});
  run.create("j", "Item", {{"a", Value(true)}});
  run.create("i", "Item", {{"link", Value(Ref{"j"})}, {"b", Value(false)}});
  EXPECT_EQ(run.value(1), tT);
  auto rep = run.apply({Change::remove_artifact("j")});
  ASSERT_EQ(rep.verdicts.size(), 1u);
  EXPECT_FALSE(rep.verdicts[0].errors.empty());
  EXPECT_EQ(run.value(1), pF);
}

TEST(Eval, ErrorsDoNotTerminateEventually) {
  tt::Run run({"context Item inv: eventually(self.link.a)"});
  run.create("j", "Item");
  run.create("i", "Item", {{"link", Value(Ref{"j"})}});
  run.apply({Change::remove_artifact("j")});
  EXPECT_EQ(run.value(1), tF);
  EXPECT_FALSE(run.engine.instance(1).errors.empty());
  run.apply({Change::create("j", "Item", {{"a", Value(true)}})});
  EXPECT_EQ(run.value(1), pT);
  EXPECT_TRUE(run.engine.instance(1).errors.empty());
}

TEST(Eval, PendingTriggerKeepsConsequenceState) {
  tt::Run run({"context Item inv: everytime(self.a, eventually(self.n = 2) and always(self.n <> 0))"});
  run.create("i", "Item", {{"a", Value(true)}, {"n", Value(std::int64_t(1))}});
  EXPECT_EQ(run.value(), tF);
  run.set("i", "a", Value(false));
  run.set("i", "a", Value(true));
  EXPECT_EQ(run.engine.census().cycles, 1u);
  run.set("i", "n", Value(std::int64_t(2)));
  EXPECT_EQ(run.value(), tT);
  EXPECT_EQ(run.engine.census().cycles, 1u);
  run.set("i", "n", Value(std::int64_t(0)));
  EXPECT_EQ(run.value(), pF);
}

TEST(Eval, NewTriggerGetsFreshConsequence) {
  tt::Run run({"context Item inv: everytime(self.a, eventually(self.n = 2))"});
  run.create("i", "Item", {{"a", Value(true)}, {"n", Value(std::int64_t(2))}});
  EXPECT_EQ(run.value(), tT);
  EXPECT_EQ(run.engine.census().cycles, 0u);
  run.set("i", "n", Value(std::int64_t(1)));
  run.set("i", "a", Value(false));
  run.set("i", "a", Value(true));
  EXPECT_EQ(run.value(), tF);
  run.set("i", "n", Value(std::int64_t(2)));
  EXPECT_EQ(run.value(), tT);
}

TEST(Eval, TemporalInsideIteratorInsideTrigger) {
  tt::Run run({"context ChangeRequest inv: everytime(self.status = 'Closing', "
               "self.requirements->forAll(r | eventually(r.status = 'Done')))"});
  run.create("r1", "Requirement", {{"status", tt::str("Open")}});
  run.create("cr", "ChangeRequest", {{"requirements", Value(Value::List{Value(Ref{"r1"})})}});
  EXPECT_EQ(run.value(), tT);
  run.set("cr", "status", tt::str("Closing"));
  EXPECT_EQ(run.value(), tF);
  run.set("r1", "status", tt::str("Done"));
  EXPECT_EQ(run.value(), tT);
  EXPECT_EQ(run.engine.census().cycles, 0u);
}

TEST(Eval, CollectionBuiltins) {
  tt::Run run({"context Item inv: self.items->collect(i | i.n)->includes(3) and self.items->at(2).n = 3 "
               "and self.items->first().n = 1 and self.tags->size() = 2 and self.s.contains('bc')"});
  run.create("x", "Item", {{"n", Value(std::int64_t(1))}});
  run.create("y", "Item", {{"n", Value(std::int64_t(3))}});
  run.create("i", "Item",
             {{"items", Value(Value::List{Value(Ref{"x"}), Value(Ref{"y"})})},
              {"tags", Value(Value::List{tt::str("p"), tt::str("q")})},
              {"s", tt::str("abcd")}});
  EXPECT_EQ(run.value(2), tT);
}
