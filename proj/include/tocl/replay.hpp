#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tocl/checker.hpp"
#include "tocl/engine.hpp"
#include "tocl/io.hpp"
#include "tocl/oracle.hpp"

namespace tocl {

struct RunStats {
  std::size_t total_events = 0;          // change sets replayed from the log
  std::size_t trigger_events = 0;        // of those, the ones that caused an evaluation
  std::size_t evaluations = 0;           // including those of the initial artifacts
  std::size_t initial_evaluations = 0;
  double avg_eval_millis = 0.0;
  double total_seconds = 0.0;
  std::vector<std::size_t> evaluations_per_change_set;  // initial state first
};

struct ReplayInput {
  Schema schema;
  std::vector<ConstraintDef> defs;
  ChangeSet initial;
  std::vector<ChangeSet> changes;
};

struct ReplayOptions {
  bool oracle = false;
};

struct ReplayResult {
  RunStats stats;
  std::vector<std::string> oracle_disagreements;
  std::vector<Verdict> final_verdicts;  // latest verdict of every instance
};

inline ReplayInput load_replay_input(const std::string& schema_path, const std::string& constraints_path,
                                     const std::string& artifacts_path, const std::string& changes_path,
                                     bool batch_by_timestamp) {
  ReplayInput in{load_schema(schema_path), {}, {}, {}};
  in.defs = parse_constraint_file(read_file(constraints_path), in.schema);
  try {
    in.initial = artifacts_from_json(parse_json(read_file(artifacts_path), artifacts_path), in.schema);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, artifacts_path + ": " + e.what());
  }
  std::map<std::string, std::string> types;
  for (const auto& c : in.initial.changes) types[c.artifact] = c.type;
  in.changes = group_change_sets(parse_change_log(read_file(changes_path), in.schema, types), batch_by_timestamp);
  return in;
}

/// Replays the initial state and then every change set, passing each verdict to `sink`.
inline ReplayResult run_replay(const ReplayInput& in, const ReplayOptions& options,
                               const std::function<void(const Verdict&)>& sink = {}) {
  auto start = std::chrono::steady_clock::now();
  ReplayResult out;
  Engine engine(in.schema, in.defs);
  std::optional<Oracle> oracle;
  if (options.oracle) oracle.emplace(in.schema, in.defs);
  constexpr std::size_t kMaxReported = 50;
  std::size_t disagreements = 0;
  auto report = [&](std::string what) {
    if (++disagreements <= kMaxReported) out.oracle_disagreements.push_back(std::move(what));
  };

  auto step = [&](const ChangeSet& cs) {
    StepReport r = engine.apply(cs);
    out.stats.evaluations_per_change_set.push_back(r.evaluations());
    if (sink) {
      for (const auto& v : r.verdicts) sink(v);
    }
    if (oracle) {
      oracle->apply(cs);
      std::set<InstanceId> evaluated;
      for (const auto& v : r.verdicts) evaluated.insert(v.instance);
      if (evaluated != oracle->moments()) report("seq " + std::to_string(cs.sequence) + ": evaluated instances differ");
      if (oracle->instance_count() != engine.instances().size()) {
        report("seq " + std::to_string(cs.sequence) + ": instance counts differ");
      }
      for (const auto& inst : engine.instances()) {
        if (inst.id >= oracle->instance_count()) break;
        TruthValue expected = oracle->value(inst.id);
        if (inst.value != expected) {
          report("instance " + std::to_string(inst.id) + " at seq " + std::to_string(cs.sequence) + ": engine " +
                 std::string(to_string(inst.value)) + ", oracle " + std::string(to_string(expected)));
        }
      }
    }
    return r.evaluations();
  };

  out.stats.initial_evaluations = step(in.initial);
  for (const auto& cs : in.changes) {
    ++out.stats.total_events;
    if (step(cs) > 0) ++out.stats.trigger_events;
  }

  out.stats.evaluations = engine.evaluations();
  if (out.stats.evaluations > 0) {
    out.stats.avg_eval_millis =
        std::chrono::duration<double, std::milli>(engine.evaluation_time()).count() / out.stats.evaluations;
  }
  for (const auto& inst : engine.instances()) {
    out.final_verdicts.push_back(Verdict{inst.id, 0, in.defs[inst.def].name(), inst.context, inst.value,
                                         inst.terminated, inst.errors});
  }
  out.stats.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (oracle) {
    for (const auto& v : oracle->skip_violations()) report("skip not invariant: " + v);
    if (disagreements > kMaxReported) {
      out.oracle_disagreements.push_back(std::to_string(disagreements - kMaxReported) + " more");
    }
  }
  return out;
}

inline json stats_to_json(const RunStats& s) {
  return {{"totalEvents", s.total_events},       {"triggerEvents", s.trigger_events},
          {"evaluations", s.evaluations},        {"initialEvaluations", s.initial_evaluations},
          {"avgEvalMillis", s.avg_eval_millis}, {"totalSeconds", s.total_seconds}};
}

}  // namespace tocl
