#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tocl/artifact_graph.hpp"
#include "tocl/error.hpp"

namespace tocl {

using InstanceId = std::uint64_t;

/// Bidirectional map between (artifact, property) tuples and the constraint
/// instances that read them in their latest evaluation.
class ScopeIndex {
 public:
  /// Registers an instance with an empty scope.
  void add_instance(InstanceId id) { instance_to_tuples_.try_emplace(id); }

  bool contains(InstanceId id) const noexcept { return instance_to_tuples_.contains(id); }

  /// Replaces the instance's scope with `reads`.
  void update_scope(InstanceId id, const std::vector<Tuple>& reads) {
    auto it = instance_to_tuples_.find(id);
    if (it == instance_to_tuples_.end()) {
      throw Error(ErrorKind::UnknownInstance, "unknown instance " + std::to_string(id));
    }
    std::set<Tuple> next(reads.begin(), reads.end());
    if (next == it->second) return;
    for (const auto& t : it->second) {
      if (!next.contains(t)) unlink(t, id);
    }
    for (const auto& t : next) {
      if (!it->second.contains(t)) tuple_to_instances_[t].insert(id);
    }
    it->second = std::move(next);
  }

  /// Drops the instance and its scope entirely.
  void remove_instance(InstanceId id) {
    auto it = instance_to_tuples_.find(id);
    if (it == instance_to_tuples_.end()) return;
    for (const auto& t : it->second) unlink(t, id);
    instance_to_tuples_.erase(it);
  }

  /// Instances with at least one changed tuple in scope, each once.
  std::set<InstanceId> select_affected(const ChangedTuples& changed) const {
    std::set<InstanceId> out;
    for (const auto& t : changed.tuples) {
      auto it = tuple_to_instances_.find(t);
      if (it != tuple_to_instances_.end()) out.insert(it->second.begin(), it->second.end());
    }
    return out;
  }

  const std::set<Tuple>& scope(InstanceId id) const {
    auto it = instance_to_tuples_.find(id);
    if (it == instance_to_tuples_.end()) {
      throw Error(ErrorKind::UnknownInstance, "unknown instance " + std::to_string(id));
    }
    return it->second;
  }

  std::set<InstanceId> instances_of(const Tuple& t) const {
    auto it = tuple_to_instances_.find(t);
    return it == tuple_to_instances_.end() ? std::set<InstanceId>{} : it->second;
  }

  std::size_t instance_count() const noexcept { return instance_to_tuples_.size(); }
  std::size_t tuple_count() const noexcept { return tuple_to_instances_.size(); }

  /// True when both maps describe the same relation.
  bool consistent() const {
    std::size_t forward = 0;
    for (const auto& [t, ids] : tuple_to_instances_) {
      if (ids.empty()) return false;
      for (InstanceId id : ids) {
        auto it = instance_to_tuples_.find(id);
        if (it == instance_to_tuples_.end() || !it->second.contains(t)) return false;
        ++forward;
      }
    }
    std::size_t backward = 0;
    for (const auto& [id, tuples] : instance_to_tuples_) backward += tuples.size();
    return forward == backward;
  }

 private:
  void unlink(const Tuple& t, InstanceId id) {
    auto it = tuple_to_instances_.find(t);
    if (it == tuple_to_instances_.end()) return;
    it->second.erase(id);
    if (it->second.empty()) tuple_to_instances_.erase(it);
  }

  std::unordered_map<Tuple, std::set<InstanceId>, TupleHash> tuple_to_instances_;
  std::unordered_map<InstanceId, std::set<Tuple>> instance_to_tuples_;
};

}  // namespace tocl
