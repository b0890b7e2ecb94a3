#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <variant>

#include "test_support.hpp"

using namespace tocl;
using tt::pF;
using tt::pT;
using tt::tF;
using tt::tT;

namespace {

// Pinned tolerances.
constexpr std::size_t kRandomTraces = 1000;
constexpr std::size_t kMaxArtifacts = 8;
constexpr std::size_t kMaxChangeSets = 60;
constexpr std::size_t kSampledConstraints = 5;
constexpr double kSoundnessBudgetSeconds = 300.0;
constexpr std::size_t kMinEvents = 8000;
constexpr std::size_t kWorkloadIssues = 400;
constexpr double kMaxAvgEvalMillis = 1.0;
constexpr double kMaxReplaySeconds = 60.0;
constexpr double kLinearitySpread = 1.5;  // max ratio between per-issue state records across sizes

struct Outcome {
  bool ok = true;
  std::string detail;
  std::vector<std::string> problems;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (problems.size() < 10) problems.push_back(what);
    }
  }
};

std::string str(TruthValue v) { return std::string(to_string(v)); }

std::string str(const std::vector<TruthValue>& vs) {
  std::string out;
  for (auto v : vs) out += (out.empty() ? "" : " ") + str(v);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

Outcome truth_tables() {
  Outcome o;
  const TruthValue all[] = {tT, tF, pT, pF};
  std::size_t rows = 0;
  auto row = [&](const std::string& name, TruthValue got, TruthValue want) {
    ++rows;
    o.require(got == want, name + ": got " + str(got) + ", want " + str(want));
  };

  for (auto a : all) {
    NextState s;
    row("next first " + str(a), step_next(s, a), tF);
    NextState t{true};
    row("next " + str(a), step_next(t, a), a);
  }
  for (auto a : all) {
    row("eventually " + str(a), step_eventually(a), a == pT ? pT : holds(a) ? tT : tF);
    AlwaysState s;
    row("always " + str(a), step_always(s, a), holds(a) ? tT : pF);
  }
  for (auto a : all) {
    for (auto b : all) {
      TruthValue want = b == pT ? pT : b == tT ? tT : holds(a) ? tF : pF;
      row("until " + str(a) + " " + str(b), step_until(a, b), want);
    }
  }

  using Trigger = TriggerState<std::monostate>;
  auto open = [] { return std::monostate{}; };
  auto alo = [&](Trigger& s, bool a, TruthValue b) {
    return step_at_least_once(s, a, open, [b](std::monostate&) { return b; });
  };
  auto every = [&](Trigger& s, bool a, TruthValue b) {
    return step_everytime(s, a, open, [b](std::monostate&) { return b; });
  };
  for (auto b : all) {
    Trigger s1, s2;
    row("atLeastOnce untriggered " + str(b), alo(s1, false, b), tT);
    row("everytime untriggered " + str(b), every(s2, false, b), tT);
    Trigger s3, s4;
    row("atLeastOnce rise " + str(b), alo(s3, true, b), b == pT ? pT : tT);
    row("everytime rise " + str(b), every(s4, true, b), holds(b) ? tT : tF);
    for (bool a : {false, true}) {
      Trigger s5, s6;
      alo(s5, true, tF);
      every(s6, true, tF);
      std::string tag = std::string(a ? " A" : " notA") + " " + str(b);
      row("atLeastOnce pending" + tag, alo(s5, a, b), b == pT ? pT : b == tT ? tT : tF);
      row("everytime pending" + tag, every(s6, a, b), holds(b) ? tT : b == pF ? pF : tF);
    }
  }
  {
    Trigger s;
    alo(s, true, tF);
    alo(s, false, pF);
    row("atLeastOnce after failed trigger", alo(s, false, tT), tF);
    row("atLeastOnce re-armed", alo(s, true, pT), pT);
    Trigger t;
    every(t, true, pT);
    row("everytime after satisfied trigger", every(t, false, pF), tT);
  }
  o.detail = std::to_string(rows) + " rows, next on permF yields permF";
  return o;
}

Outcome review_scenario() {
  Outcome o;
  tt::Run run({"context Requirement inv C1: eventually(self.status = 'Reviewed')",
               "context Requirement inv C2: always(self.status = 'Ready for Review')"});
  run.create("req", "Requirement", {{"status", tt::str("Ready for Review")}});
  std::vector<TruthValue> c1{run.value(0)}, c2{run.value(1)};
  run.set("req", "status", tt::str("Reviewed"));
  c1.push_back(run.value(0));
  c2.push_back(run.value(1));
  o.require(c1 == std::vector<TruthValue>{tF, pT}, "C1: " + str(c1));
  o.require(c2 == std::vector<TruthValue>{tT, pF}, "C2: " + str(c2));

  ArtifactGraph g(tt::schema());
  g.apply({1, "", {Change::create("req", "Requirement", {{"status", tt::str("Reviewed")}})}});
  auto def = tt::def("context Requirement inv: eventually(self.status = 'Reviewed')");
  EvalTree tree(def);
  auto first = tree.evaluate(g, "req");
  g.apply({2, "", {Change::set("req", "status", tt::str("Draft"))}});
  auto second = tree.evaluate(g, "req");
  o.require(first.value == pT && !first.reads.empty(), "C1 first evaluation");
  o.require(second.value == pT && second.reads.empty(), "terminated C1 read its tuples again");
  o.require(!run.engine.index().contains(0), "terminated C1 still indexed");
  o.detail = "C1 " + str(c1) + ", C2 " + str(c2);
  return o;
}

void check_cases(Outcome& o, const std::vector<tt::StatusCase>& cases) {
  for (const auto& c : cases) {
    auto got = tt::status_trace(c.constraint, c.statuses);
    auto oracle = tt::status_trace_oracle(c.constraint, c.statuses);
    o.require(got == c.expected, c.name + ": engine " + str(got) + ", want " + str(c.expected));
    o.require(oracle == c.expected, c.name + ": oracle " + str(oracle) + ", want " + str(c.expected));
  }
}

Outcome examples() {
  Outcome o;
  std::size_t parsed = 0;
  for (const auto& src : tt::example_sources()) {
    try {
      parsed += parse_constraint_file(src, tt::schema()).size();
    } catch (const Error& e) {
      o.require(false, e.what());
    }
  }
  o.require(parsed == 8, "parsed " + std::to_string(parsed) + " of 8 example constraints");
  check_cases(o, tt::example_cases());

  tt::Run next({"context BugReport inv: next(self.assignee.isDefined())"});
  next.create("b", "BugReport", {{"status", tt::str("New")}});
  TruthValue before = next.value();
  next.set("b", "assignee", tt::str("ana"));
  o.require(before == tF && next.value() == pT, "next assignee: " + str(before) + " " + str(next.value()));

  tt::Run always({"context BugReport inv: always(self.assignee.isDefined())"});
  always.create("b", "BugReport", {{"assignee", tt::str("ana")}});
  before = always.value();
  always.apply({Change::set("b", "assignee", Value())});
  o.require(before == tT && always.value() == pF, "always assignee: " + str(before) + " " + str(always.value()));

  o.detail = std::to_string(parsed) + " example constraints, " + std::to_string(tt::example_cases().size() + 2) +
             " traces";
  return o;
}

Outcome declare() {
  Outcome o;
  auto a = parse_expression("self.a");
  auto b = parse_expression("self.b");
  std::size_t expressible = 0;
  for (const auto& p : pattern_table()) {
    try {
      auto c = tt::def("context Item inv: " + expand_pattern(p.name, "self.a", p.arity == 2 ? "self.b" : ""));
      (void)c;
      ++expressible;
    } catch (const Error& e) {
      o.require(false, std::string(p.name) + ": " + e.what());
    }
    if (p.derived) continue;
    std::string text(p.formula);
    std::string out;
    for (char ch : text) {
      if (ch == 'A') out += "(self.a)";
      else if (ch == 'B') out += "(self.b)";
      else out += ch;
    }
    auto got = expand_pattern(p.name, *a, p.arity == 2 ? b.get() : nullptr, true);
    o.require(same_structure(*got, *parse_expression(out)), std::string(p.name) + " does not expand verbatim");
  }
  check_cases(o, tt::pattern_cases());

  auto traces = tt::all_ab_traces(6);
  std::size_t derived = 0;
  for (const auto& p : pattern_table()) {
    if (!p.derived) continue;
    ++derived;
    std::string c = "context Item inv: " + expand_pattern(p.name, "self.a", p.arity == 2 ? "self.b" : "");
    for (const auto& t : traces) {
      if (tt::ab_trace(c, t) != tt::ab_trace_oracle(c, t)) {
        o.require(false, std::string(p.name) + " disagrees with the oracle");
        break;
      }
    }
  }
  o.require(expressible == 18, std::to_string(expressible) + "/18 patterns expressible");
  o.detail = std::to_string(expressible) + "/18 patterns expressible, " + std::to_string(tt::pattern_cases().size()) +
             " hand-built traces, " + std::to_string(derived) + " derived x " + std::to_string(traces.size()) +
             " exhaustive traces";
  return o;
}

Outcome soundness() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  const auto& all = tt::random_constraints();
  std::size_t verdicts = 0, skips = 0;
  for (std::uint64_t seed = 1; seed <= kRandomTraces; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> cs;
    for (std::size_t i = 0; i < kSampledConstraints; ++i) cs.push_back(all[rng() % all.size()]);
    std::size_t artifacts = 1 + rng() % kMaxArtifacts;
    std::size_t sets = 1 + rng() % kMaxChangeSets;
    auto r = tt::check_against_oracle(cs, tt::random_sets(seed, artifacts, sets));
    verdicts += r.verdicts;
    skips += r.skips_checked;
    std::string tag = "seed " + std::to_string(seed) + ": ";
    o.require(r.disagreements.empty(), tag + (r.disagreements.empty() ? "" : r.disagreements.front()));
    o.require(r.skip_violations.empty(), tag + "skip not invariant");
    o.require(r.moment_mismatches == 0, tag + "engine and oracle evaluated different instances");
  }
  double secs = seconds_since(start);
  o.require(secs < kSoundnessBudgetSeconds, "took " + std::to_string(secs) + " s");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu traces, %zu verdicts equal, %zu skipped evaluations invariant, %.1f s",
                kRandomTraces, verdicts, skips, secs);
  o.detail = buf;
  return o;
}

Outcome performance() {
  Outcome o;
  auto in = workload::replay_input(workload::generate(1, kWorkloadIssues));
  auto r = run_replay(in, {});
  const auto& s = r.stats;
  o.require(in.defs.size() == 21, std::to_string(in.defs.size()) + " constraints");
  o.require(s.total_events >= kMinEvents, std::to_string(s.total_events) + " events");
  o.require(s.avg_eval_millis <= kMaxAvgEvalMillis, "avg " + std::to_string(s.avg_eval_millis) + " ms");
  o.require(s.total_seconds <= kMaxReplaySeconds, "total " + std::to_string(s.total_seconds) + " s");
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu events, %zu evaluations, avg %.4f ms (limit %.1f), total %.2f s (limit %.0f)",
                s.total_events, s.evaluations, s.avg_eval_millis, kMaxAvgEvalMillis, s.total_seconds,
                kMaxReplaySeconds);
  o.detail = buf;
  return o;
}

Outcome memory() {
  Outcome o;
  std::vector<double> per_issue;
  std::string sizes;
  for (std::size_t issues : {100u, 200u, 400u, 800u}) {
    auto in = workload::replay_input(workload::generate(2, issues));
    Engine engine(in.schema, in.defs);
    engine.apply(in.initial);
    for (const auto& cs : in.changes) engine.apply(cs);
    StateCensus c = engine.census();
    std::size_t max_temporal = 0;
    for (const auto& d : in.defs) max_temporal = std::max(max_temporal, d.temporal_nodes());
    std::size_t live = engine.live_instances();
    std::size_t bound = (1 + max_temporal) * (live + 3 * c.cycles + 2 * c.bindings);
    o.require(c.records() <= bound, std::to_string(issues) + " issues: " + std::to_string(c.records()) +
                                        " records exceed " + std::to_string(bound));
    o.require(c.booleans <= 3 * c.operator_states, "more than three Booleans per operator");
    per_issue.push_back(static_cast<double>(c.records()) / static_cast<double>(issues));
    sizes += (sizes.empty() ? "" : ", ") + std::to_string(issues) + ":" + std::to_string(c.records());
  }
  auto [lo, hi] = std::minmax_element(per_issue.begin(), per_issue.end());
  o.require(*hi <= kLinearitySpread * *lo, "per-issue state varies from " + std::to_string(*lo) + " to " +
                                               std::to_string(*hi));

  // Long stretches of changes leave the state size unchanged.
  auto in = workload::replay_input(workload::generate(2, 100));
  Engine engine(in.schema, in.defs);
  engine.apply(in.initial);
  for (const auto& cs : in.changes) engine.apply(cs);
  std::vector<std::string> issues;
  for (const auto& id : engine.model().ids()) {
    if (engine.model().get(id).type_name() == "Issue") issues.push_back(id);
  }
  std::int64_t seq = engine.model().last_sequence().value_or(0);
  auto churn = [&](std::size_t rounds) {
    for (std::size_t k = 0; k < rounds; ++k) {
      for (const char* who : {"dana", "eli"}) {
        ChangeSet cs{++seq, "", {}};
        for (const auto& id : issues) {
          cs.changes.push_back(Change::set(id, "assignee", Value(std::string(who))));
          cs.changes.push_back(Change::set(id, "summary", Value(std::string(who) + std::to_string(k))));
        }
        engine.apply(cs);
      }
    }
    return engine.census().records();
  };
  std::size_t after_short = churn(10);
  std::size_t after_long = churn(200);
  o.require(after_short == after_long, "state grew with history: " + std::to_string(after_short) + " -> " +
                                           std::to_string(after_long));
  o.detail = "records by issues {" + sizes + "}, unchanged over " + std::to_string(400 * issues.size()) +
             " further changes";
  return o;
}

Outcome relevance() {
  Outcome o;
  auto in = workload::replay_input(workload::generate(1, 50));
  Engine engine(in.schema, in.defs);
  engine.apply(in.initial);
  for (const auto& cs : in.changes) engine.apply(cs);
  std::string issue;
  for (const auto& id : engine.model().ids()) {
    if (engine.model().get(id).type_name() == "Issue") issue = id;
  }
  std::int64_t seq = engine.model().last_sequence().value_or(0);
  std::size_t before = engine.evaluations();
  std::size_t irrelevant = 0;
  for (const auto& ch : {Change::set(issue, "summary", Value(std::string("reworded"))),
                         Change::add(issue, "labels", Value(std::string("triage"))),
                         Change::set(issue, "storyPoints", Value(std::int64_t(13)))}) {
    auto rep = engine.apply({++seq, "", {ch}});
    irrelevant += rep.evaluations();
  }
  o.require(irrelevant == 0, std::to_string(irrelevant) + " evaluations for out-of-scope changes");
  o.require(engine.evaluations() == before, "evaluation counter moved");

  tt::Run run({"context Requirement inv: eventually(self.status = 'Reviewed')"});
  run.create("r", "Requirement", {{"status", tt::str("Draft")}, {"priority", tt::str("low")}});
  std::size_t priority = run.set("r", "priority", tt::str("high")).evaluations();
  std::size_t status = run.set("r", "status", tt::str("Ready for Review")).evaluations();
  o.require(priority == 0, "priority change evaluated");
  o.require(status == 1, "status change not evaluated");
  o.detail = "summary/labels/storyPoints: " + std::to_string(irrelevant) + " evaluations; priority: " +
             std::to_string(priority) + ", status: " + std::to_string(status);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "truth-table conformance", truth_tables},
      {2, "review scenario", review_scenario},
      {3, "operator examples", examples},
      {4, "DECLARE coverage", declare},
      {5, "incremental soundness", soundness},
      {6, "performance", performance},
      {7, "memory linearity", memory},
      {8, "relevance filtering", relevance},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.number << " " << c.name << ": " << o.detail
              << std::endl;
    for (const auto& p : o.problems) std::cout << "    " << p << '\n';
    failed += !o.ok;
  }
  return failed == 0 ? 0 : 1;
}
