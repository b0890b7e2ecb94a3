#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tocl/artifact_graph.hpp"
#include "tocl/checker.hpp"
#include "tocl/eval_tree.hpp"
#include "tocl/scope_index.hpp"

namespace tocl {

/// Result of one instance evaluation at one change set.
struct Verdict {
  InstanceId instance = 0;
  std::int64_t sequence = 0;
  std::string constraint;
  std::string context;
  TruthValue value = TruthValue::TempFalse;
  bool terminated = false;
  std::vector<std::string> errors;
};

struct ConstraintInstance {
  InstanceId id = 0;
  std::size_t def = 0;  // index into Engine::defs()
  std::string context;
  std::int64_t created_at = 0;
  TruthValue value = TruthValue::TempFalse;
  bool terminated = false;  // root verdict is permanent
  bool retired = false;     // context artifact was deleted
  std::size_t evaluations = 0;
  std::vector<std::string> errors;  // from the latest evaluation
  std::unique_ptr<EvalTree> tree;   // released once terminated or retired
};

/// What one change set did.
struct StepReport {
  std::int64_t sequence = 0;
  ChangedTuples changed;
  std::vector<InstanceId> created;
  std::vector<InstanceId> retired;
  std::vector<Verdict> verdicts;  // one per evaluation, in instance order

  std::size_t evaluations() const noexcept { return verdicts.size(); }
};

/// The incremental checker: artifact model, constraint instances and scope index.
class Engine {
 public:
  Engine(const Schema& schema, std::vector<ConstraintDef> defs)
      : model_(schema), defs_(std::move(defs)) {}

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  StepReport apply(const ChangeSet& cs) {
    StepReport report;
    report.sequence = cs.sequence;
    report.changed = model_.apply(cs);

    for (const auto& id : report.changed.deleted) {
      auto it = by_context_.find(id);
      if (it == by_context_.end()) continue;
      for (InstanceId i : it->second) {
        retire(instances_[i]);
        report.retired.push_back(i);
      }
      by_context_.erase(it);
    }

    std::set<InstanceId> due = index_.select_affected(report.changed);
    for (const auto& id : report.changed.created) {
      for (InstanceId i : on_artifact_created(id, cs.sequence)) {
        report.created.push_back(i);
        due.insert(i);
      }
    }
    for (InstanceId i : due) report.verdicts.push_back(evaluate(instances_[i], cs.sequence));
    return report;
  }

  const ArtifactGraph& model() const noexcept { return model_; }
  const Schema& schema() const noexcept { return model_.schema(); }
  const std::vector<ConstraintDef>& defs() const noexcept { return defs_; }
  const ScopeIndex& index() const noexcept { return index_; }
  const std::vector<ConstraintInstance>& instances() const noexcept { return instances_; }

  const ConstraintInstance& instance(InstanceId id) const {
    if (id >= instances_.size()) {
      throw Error(ErrorKind::UnknownInstance, "unknown instance " + std::to_string(id));
    }
    return instances_[id];
  }

  std::size_t evaluations() const noexcept { return evaluations_; }
  std::chrono::nanoseconds evaluation_time() const noexcept { return evaluation_time_; }

  /// Live operator state over all instances still being checked.
  StateCensus census() const {
    StateCensus c;
    for (const auto& inst : instances_) {
      if (inst.tree) c += inst.tree->census();
    }
    return c;
  }

  std::size_t live_instances() const noexcept { return index_.instance_count(); }

 private:
  std::vector<InstanceId> on_artifact_created(const std::string& artifact, std::int64_t seq) {
    std::vector<InstanceId> out;
    const std::string& type = model_.get(artifact).type_name();
    for (std::size_t d = 0; d < defs_.size(); ++d) {
      if (defs_[d].context_type() != type) continue;
      ConstraintInstance inst;
      inst.id = instances_.size();
      inst.def = d;
      inst.context = artifact;
      inst.created_at = seq;
      inst.tree = std::make_unique<EvalTree>(defs_[d]);
      index_.add_instance(inst.id);
      by_context_[artifact].push_back(inst.id);
      out.push_back(inst.id);
      instances_.push_back(std::move(inst));
    }
    return out;
  }

  Verdict evaluate(ConstraintInstance& inst, std::int64_t seq) {
    auto start = std::chrono::steady_clock::now();
    Evaluation e = inst.tree->evaluate(model_, inst.context);
    evaluation_time_ += std::chrono::steady_clock::now() - start;
    ++evaluations_;
    ++inst.evaluations;

    inst.value = e.value;
    inst.errors = std::move(e.errors);
    if (is_permanent(e.value)) {
      inst.terminated = true;
      inst.tree.reset();
      index_.remove_instance(inst.id);
    } else {
      index_.update_scope(inst.id, e.reads);
    }
    return Verdict{inst.id, seq, defs_[inst.def].name(), inst.context, inst.value, inst.terminated,
                   inst.errors};
  }

  void retire(ConstraintInstance& inst) {
    inst.retired = true;
    inst.tree.reset();
    index_.remove_instance(inst.id);
  }

  ArtifactGraph model_;
  std::vector<ConstraintDef> defs_;
  std::vector<ConstraintInstance> instances_;
  std::map<std::string, std::vector<InstanceId>> by_context_;
  ScopeIndex index_;
  std::size_t evaluations_ = 0;
  std::chrono::nanoseconds evaluation_time_{0};
};

}  // namespace tocl
