#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tocl/io.hpp"
#include "tocl/replay.hpp"

namespace tocl::workload {

inline constexpr std::string_view kSchema = R"({
  "types": [
    {"name": "Project", "properties": [
      {"name": "key", "kind": "string"},
      {"name": "name", "kind": "string"}
    ]},
    {"name": "Issue", "properties": [
      {"name": "key", "kind": "string"},
      {"name": "issueType", "kind": "string"},
      {"name": "status", "kind": "string"},
      {"name": "priority", "kind": "string"},
      {"name": "assignee", "kind": "string"},
      {"name": "resolution", "kind": "string"},
      {"name": "summary", "kind": "string"},
      {"name": "labels", "kind": "list-string"},
      {"name": "storyPoints", "kind": "int"},
      {"name": "project", "kind": "ref", "target": "Project"},
      {"name": "parent", "kind": "ref", "target": "Issue"},
      {"name": "children", "kind": "list-ref", "target": "Issue"}
    ]}
  ]
}
)";

/// Reconstructed issue-tracker rule suite (21 constraints).
inline constexpr std::string_view kConstraints = R"(-- Reconstructed quality rules for an issue tracker workflow.

context Issue inv createdOpen:
  eventually(self.status = 'Open')

context Issue inv developedBeforeReview:
  until(not(self.status = 'Ready For Review'), self.status = 'In Development')

context Issue inv reviewConcludes:
  everytime(self.status = 'Ready For Review',
            eventually(self.status = 'Reviewed' or self.status = 'In Development Again'))

context Issue inv reviewedBeforeTesting:
  until(not(self.status = 'In Testing'), self.status = 'Reviewed')

context Issue inv eventuallyResolved:
  eventually(self.status = 'Resolved' or self.status = 'Closed')

context Issue inv resolvedGetsClosed:
  atLeastOnce(self.status = 'Resolved', eventually(self.status = 'Closed'))

context Issue inv closedWithChildrenDone:
  always(not(self.status = 'Closed')
         or self.children->forAll(c | c.status = 'Closed' or c.status = 'Resolved'))

context Issue inv childrenProgress:
  self.children->forAll(c | eventually(c.status = 'Reviewed' or c.status = 'Resolved' or c.status = 'Closed'))

context Issue inv assignedWhenStarted:
  everytime(self.status = 'In Development', self.assignee.isDefined())

context Issue inv closedStaysDone:
  everytime(self.status = 'Closed', not(until(self.status = 'Closed', self.status = 'Open')))

context Issue inv reopenedIsReworked:
  everytime(self.status = 'Reopened', eventually(self.status = 'In Development Again'))

context Issue inv suspendedDevelopmentResumes:
  everytime(self.status = 'Suspended Development', eventually(self.status = 'In Development'))

context Issue inv suspendedTestResumes:
  everytime(self.status = 'Suspended Test', eventually(self.status = 'In Testing'))

context Issue inv resolvedBeforeClosed:
  until(not(self.status = 'Closed'), self.status = 'Resolved')

context Issue inv resolutionRecorded:
  everytime(self.status = 'Resolved', self.resolution.isDefined())

context Issue inv parentClosedLast:
  always(not(self.parent.status = 'Closed') or self.status = 'Closed' or self.status = 'Resolved')

context Issue inv reworkGoesToReview:
  everytime(self.status = 'In Development Again', eventually(self.status = 'Ready For Review'))

context Issue inv openIsPickedUp:
  atLeastOnce(self.status = 'Open', next(self.status = 'In Development' or self.status = 'Resolved'))

context Issue inv epicHasChildren:
  eventually(not(self.issueType = 'Epic') or not(self.children->isEmpty()))

context Issue inv priorityKept:
  always(self.priority.isDefined())

context Issue inv childrenStartedBeforeReview:
  everytime(self.status = 'Ready For Review', self.children->forAll(c | c.status <> 'Open'))
)";

inline const std::vector<std::string>& statuses() {
  static const std::vector<std::string> s = {
      "Open",     "In Development", "Ready For Review", "Reviewed", "In Testing",           "Resolved",
      "Closed",   "Reopened",       "In Development Again",        "Suspended Development", "Suspended Test"};
  return s;
}

struct Workload {
  json artifacts;
  std::vector<ChangeRecord> changes;
};

namespace detail {

inline const std::map<std::string, std::vector<std::string>>& transitions() {
  static const std::map<std::string, std::vector<std::string>> t = {
      {"Open", {"In Development", "In Development", "In Development", "Resolved"}},
      {"In Development", {"Ready For Review", "Ready For Review", "Ready For Review", "Suspended Development"}},
      {"Suspended Development", {"In Development"}},
      {"Ready For Review", {"Reviewed", "Reviewed", "In Development Again"}},
      {"Reviewed", {"In Testing"}},
      {"In Testing", {"Resolved", "Resolved", "Resolved", "Suspended Test", "In Development Again"}},
      {"Suspended Test", {"In Testing"}},
      {"In Development Again", {"Ready For Review"}},
      {"Resolved", {"Closed", "Closed", "Closed", "Reopened"}},
      {"Reopened", {"In Development Again"}},
      {"Closed", {"Reopened"}},
  };
  return t;
}

struct Issue {
  std::string id;
  std::string status = "Open";
  std::string type;
  bool assigned = false;
  std::vector<std::string> children;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(g_() % n); }
  bool chance(unsigned percent) { return below(100) < percent; }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

 private:
  std::mt19937_64 g_;
};

inline std::string timestamp(std::int64_t minutes) {
  std::int64_t days = minutes / (24 * 60);
  std::int64_t h = (minutes / 60) % 24, m = minutes % 60;
  std::int64_t year = 2020 + days / (12 * 28), month = 1 + (days / 28) % 12, day = 1 + days % 28;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04lld-%02lld-%02lldT%02lld:%02lld:00Z", static_cast<long long>(year),
                static_cast<long long>(month), static_cast<long long>(day), static_cast<long long>(h),
                static_cast<long long>(m));
  return buf;
}

}  // namespace detail

/// Deterministic issue-tracker history: `issues` issues created with status
/// 'Open' and moved through the workflow, with assignment, resolution,
/// parent/child links and unrelated edits interleaved.
inline Workload generate(std::uint64_t seed, std::size_t issues) {
  using namespace detail;
  Rng rng(seed);
  Workload w;
  w.artifacts = json::array({{{"id", "PRJ"}, {"type", "Project"}, {"properties", {{"key", "PRJ"}, {"name", "Sample"}}}}});

  static const std::vector<std::string> priorities = {"Blocker", "Critical", "Major", "Minor", "Trivial"};
  static const std::vector<std::string> people = {"ana", "ben", "chen", "dora", "eli", "fay"};
  static const std::vector<std::string> types = {"Epic", "Story", "Story", "Task", "Task", "Bug", "Bug", "Bug"};
  static const std::vector<std::string> labels = {"backend", "ui", "infra", "docs", "perf"};

  std::vector<Issue> all;
  std::vector<std::size_t> active;
  std::int64_t seq = 0, clock = 0;
  auto emit = [&](Change c) { w.changes.push_back(ChangeRecord{++seq, timestamp(clock), std::move(c), 0}); };

  auto create = [&]() {
    Issue is;
    is.id = "PRJ-" + std::to_string(all.size() + 1);
    is.type = rng.pick(types);
    std::vector<std::pair<std::string, Value>> init = {
        {"key", Value(is.id)},
        {"issueType", Value(is.type)},
        {"status", Value(std::string("Open"))},
        {"priority", Value(rng.pick(priorities))},
        {"summary", Value("Issue " + std::to_string(all.size() + 1))},
        {"project", Value(Ref{"PRJ"})},
    };
    std::string parent;
    if (is.type != "Epic") {
      std::vector<std::size_t> epics;
      for (std::size_t i : active) {
        if (all[i].type == "Epic" && all[i].status != "Closed") epics.push_back(i);
      }
      if (!epics.empty() && rng.chance(60)) parent = all[rng.pick(epics)].id;
    }
    if (!parent.empty()) init.emplace_back("parent", Value(Ref{parent}));
    emit(Change::create(is.id, "Issue", std::move(init)));
    if (!parent.empty()) {
      emit(Change::add(parent, "children", Value(Ref{is.id})));
      for (auto& p : all) {
        if (p.id == parent) p.children.push_back(is.id);
      }
    }
    active.push_back(all.size());
    all.push_back(std::move(is));
  };

  auto advance = [&](std::size_t k) {
    Issue& is = all[active[k]];
    auto t = transitions().find(is.status);
    if (t == transitions().end()) {
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(k));
      return;
    }
    std::string next = rng.pick(t->second);
    if (next == "In Development" && !is.assigned && rng.chance(92)) {
      emit(Change::set(is.id, "assignee", Value(rng.pick(people))));
      is.assigned = true;
    }
    if (next == "Resolved" && rng.chance(95)) {
      emit(Change::set(is.id, "resolution", Value(std::string(is.status == "Open" ? "Won't Fix" : "Fixed"))));
    }
    if (next == "Reopened") emit(Change::set(is.id, "resolution", Value()));
    emit(Change::set(is.id, "status", Value(next)));
    is.status = next;
    if (next == "Closed" && !rng.chance(15)) active.erase(active.begin() + static_cast<std::ptrdiff_t>(k));
  };

  auto noise = [&]() {
    const Issue& is = all[rng.below(all.size())];
    switch (rng.below(4)) {
      case 0: emit(Change::set(is.id, "summary", Value("Issue " + is.id + " rev " + std::to_string(seq)))); break;
      case 1: emit(Change::add(is.id, "labels", Value(rng.pick(labels)))); break;
      case 2: emit(Change::set(is.id, "storyPoints", Value(static_cast<std::int64_t>(1 + rng.below(13))))); break;
      default: emit(Change::set(is.id, "priority", Value(rng.pick(priorities)))); break;
    }
  };

  std::size_t created = 0;
  while (created < issues || !active.empty()) {
    clock += 1 + static_cast<std::int64_t>(rng.below(90));
    std::size_t roll = rng.below(100);
    if (created < issues && (active.empty() || roll < 14)) {
      create();
      ++created;
    } else if (!all.empty() && roll < 26) {
      noise();
    } else if (!active.empty()) {
      advance(rng.below(active.size()));
    }
  }
  return w;
}

inline std::string changes_to_jsonl(const std::vector<ChangeRecord>& records) {
  std::string out;
  for (const auto& r : records) out += change_to_json(r).dump() + "\n";
  return out;
}

/// The workload as replay input, without going through files.
inline ReplayInput replay_input(const Workload& w, bool batch_by_timestamp = false) {
  ReplayInput in{schema_from_json(parse_json(std::string(kSchema), "schema")), {}, {}, {}};
  in.defs = parse_constraint_file(std::string(kConstraints), in.schema);
  in.initial = artifacts_from_json(w.artifacts, in.schema);
  in.changes = group_change_sets(w.changes, batch_by_timestamp);
  return in;
}

}  // namespace tocl::workload
