#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tocl/error.hpp"
#include "tocl/schema.hpp"
#include "tocl/value.hpp"

namespace tocl {

/// An (artifact, property) pair: the unit of constraint scope and of change relevance.
struct Tuple {
  std::string artifact;
  std::string property;

  friend bool operator==(const Tuple&, const Tuple&) = default;
  friend auto operator<=>(const Tuple&, const Tuple&) = default;
};

struct TupleHash {
  std::size_t operator()(const Tuple& t) const noexcept {
    std::size_t h = std::hash<std::string>{}(t.artifact);
    return h ^ (std::hash<std::string>{}(t.property) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

class Artifact {
 public:
  Artifact(std::string id, const TypeDef& type) : id_(std::move(id)), type_(&type) {
    values_.reserve(type.properties.size());
    for (const auto& p : type.properties) values_.push_back(Schema::default_value(p));
  }

  const std::string& id() const noexcept { return id_; }
  const TypeDef& type() const noexcept { return *type_; }
  const std::string& type_name() const noexcept { return type_->name; }

  /// Current value, or nullptr when the type declares no such property.
  const Value* find(std::string_view property) const noexcept {
    for (std::size_t i = 0; i < type_->properties.size(); ++i) {
      if (type_->properties[i].name == property) return &values_[i];
    }
    return nullptr;
  }

  const std::vector<Value>& values() const noexcept { return values_; }

  friend bool operator==(const Artifact& a, const Artifact& b) {
    return a.id_ == b.id_ && a.type_->name == b.type_->name && a.values_ == b.values_;
  }

 private:
  friend class ArtifactGraph;

  Value& slot(std::string_view property) {
    for (std::size_t i = 0; i < type_->properties.size(); ++i) {
      if (type_->properties[i].name == property) return values_[i];
    }
    throw Error(ErrorKind::UnknownProperty,
                "type '" + type_->name + "' has no property '" + std::string(property) + "'");
  }

  std::string id_;
  const TypeDef* type_;
  std::vector<Value> values_;
};

enum class ChangeOp { Create, Delete, Set, Add, Remove };

struct Change {
  ChangeOp op = ChangeOp::Set;
  std::string artifact;
  std::string type;      // Create only
  std::string property;  // Set / Add / Remove
  Value value;           // new value (Set) or element (Add / Remove)
  std::vector<std::pair<std::string, Value>> initial;  // Create only

  static Change create(std::string id, std::string type,
                       std::vector<std::pair<std::string, Value>> initial = {}) {
    Change c;
    c.op = ChangeOp::Create;
    c.artifact = std::move(id);
    c.type = std::move(type);
    c.initial = std::move(initial);
    return c;
  }
  static Change remove_artifact(std::string id) {
    Change c;
    c.op = ChangeOp::Delete;
    c.artifact = std::move(id);
    return c;
  }
  static Change set(std::string id, std::string property, Value v) {
    return Change{ChangeOp::Set, std::move(id), {}, std::move(property), std::move(v), {}};
  }
  static Change add(std::string id, std::string property, Value element) {
    return Change{ChangeOp::Add, std::move(id), {}, std::move(property), std::move(element), {}};
  }
  static Change remove(std::string id, std::string property, Value element) {
    return Change{ChangeOp::Remove, std::move(id), {}, std::move(property), std::move(element), {}};
  }
};

/// One atomically applied batch of changes; one evaluation point.
struct ChangeSet {
  std::int64_t sequence = 0;
  std::string timestamp;
  std::vector<Change> changes;
};

/// Result of applying a change set: exactly the tuples whose value differs.
struct ChangedTuples {
  std::set<Tuple> tuples;
  std::vector<std::string> created;
  std::vector<std::string> deleted;

  bool empty() const noexcept { return tuples.empty() && created.empty() && deleted.empty(); }
};

/// The artifact model. Value type: copying yields an independent snapshot.
class ArtifactGraph {
 public:
  explicit ArtifactGraph(const Schema& schema) : schema_(&schema) {}

  const Schema& schema() const noexcept { return *schema_; }
  std::size_t size() const noexcept { return artifacts_.size(); }
  std::optional<std::int64_t> last_sequence() const noexcept { return last_sequence_; }

  const Artifact* find(std::string_view id) const noexcept {
    auto it = artifacts_.find(std::string(id));
    return it == artifacts_.end() ? nullptr : &it->second;
  }

  const Artifact& get(std::string_view id) const {
    if (auto* a = find(id)) return *a;
    throw Error(ErrorKind::UnknownArtifact, "unknown artifact '" + std::string(id) + "'");
  }

  /// Current value of a property; Null when unset.
  const Value& read(std::string_view id, std::string_view property) const {
    const Artifact& a = get(id);
    if (auto* v = a.find(property)) return *v;
    throw Error(ErrorKind::UnknownProperty,
                "type '" + a.type_name() + "' has no property '" + std::string(property) + "'");
  }

  /// Ids in ascending order, for deterministic iteration.
  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(artifacts_.size());
    for (const auto& [id, a] : artifacts_) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// (artifact, property, target) for every reference whose target does not exist.
  std::vector<std::pair<Tuple, std::string>> dangling_references() const {
    std::vector<std::pair<Tuple, std::string>> out;
    for (const auto& id : ids()) {
      const Artifact& a = artifacts_.at(id);
      for (std::size_t i = 0; i < a.values().size(); ++i) {
        auto check = [&](const Value& v) {
          if (v.is_ref() && !find(v.as_ref().id)) {
            out.push_back({Tuple{id, a.type().properties[i].name}, v.as_ref().id});
          }
        };
        const Value& v = a.values()[i];
        if (v.is_list()) {
          for (const auto& e : v.as_list()) check(e);
        } else {
          check(v);
        }
      }
    }
    return out;
  }

  /// Applies all changes or none. Returns the tuples whose value actually changed.
  ChangedTuples apply(const ChangeSet& cs) {
    if (last_sequence_ && cs.sequence <= *last_sequence_) {
      throw Error(ErrorKind::StaleSequence, "change set " + std::to_string(cs.sequence) +
                                                " is not after " + std::to_string(*last_sequence_));
    }
    std::map<std::string, std::optional<Artifact>> before;
    std::set<std::string> replaced;
    try {
      std::set<Tuple> touched;
      auto touch = [&](const std::string& id, const std::string& prop) {
        if (!touched.insert(Tuple{id, prop}).second) {
          throw Error(ErrorKind::DuplicateChange,
                      "'" + id + "." + prop + "' changed twice in change set " + std::to_string(cs.sequence));
        }
      };
      for (const auto& ch : cs.changes) {
        if (!before.contains(ch.artifact)) before.emplace(ch.artifact, snapshot_of(ch.artifact));
        if (ch.op == ChangeOp::Create && before.at(ch.artifact)) replaced.insert(ch.artifact);
        apply_one(ch, touch);
      }
    } catch (...) {
      for (auto& [id, prior] : before) {
        if (prior) {
          artifacts_.insert_or_assign(id, std::move(*prior));
        } else {
          artifacts_.erase(id);
        }
      }
      throw;
    }
    last_sequence_ = cs.sequence;
    return diff(before, replaced);
  }

  friend bool operator==(const ArtifactGraph& a, const ArtifactGraph& b) {
    return a.artifacts_ == b.artifacts_;
  }

 private:
  std::optional<Artifact> snapshot_of(const std::string& id) const {
    auto it = artifacts_.find(id);
    if (it == artifacts_.end()) return std::nullopt;
    return it->second;
  }

  Artifact& mutable_get(const std::string& id) {
    auto it = artifacts_.find(id);
    if (it == artifacts_.end()) throw Error(ErrorKind::UnknownArtifact, "unknown artifact '" + id + "'");
    return it->second;
  }

  const PropertyDecl& decl(const Artifact& a, const std::string& property) const {
    if (auto* p = a.type().find(property)) return *p;
    throw Error(ErrorKind::UnknownProperty,
                "type '" + a.type_name() + "' has no property '" + property + "'");
  }

  static void require_conforming(const Artifact& a, const PropertyDecl& p, const Value& v) {
    if (!Schema::conforms(p, v)) {
      throw Error(ErrorKind::TypeMismatch, "value " + to_string(v) + " does not fit " + a.type_name() +
                                               "." + p.name + " (" + std::string(to_string(p.kind)) + ")");
    }
  }

  template <class Touch>
  void apply_one(const Change& ch, Touch& touch) {
    switch (ch.op) {
      case ChangeOp::Create: {
        if (artifacts_.contains(ch.artifact)) {
          throw Error(ErrorKind::DuplicateArtifact, "artifact '" + ch.artifact + "' already exists");
        }
        Artifact a(ch.artifact, schema_->get(ch.type));
        for (const auto& [prop, v] : ch.initial) {
          const PropertyDecl& p = decl(a, prop);
          Value value = coerce(p, v);
          require_conforming(a, p, value);
          touch(ch.artifact, prop);
          a.slot(prop) = std::move(value);
        }
        artifacts_.emplace(ch.artifact, std::move(a));
        return;
      }
      case ChangeOp::Delete:
        if (artifacts_.erase(ch.artifact) == 0) {
          throw Error(ErrorKind::UnknownArtifact, "unknown artifact '" + ch.artifact + "'");
        }
        return;
      case ChangeOp::Set: {
        Artifact& a = mutable_get(ch.artifact);
        const PropertyDecl& p = decl(a, ch.property);
        Value value = coerce(p, ch.value);
        require_conforming(a, p, value);
        touch(ch.artifact, ch.property);
        a.slot(ch.property) = std::move(value);
        return;
      }
      case ChangeOp::Add:
      case ChangeOp::Remove: {
        Artifact& a = mutable_get(ch.artifact);
        const PropertyDecl& p = decl(a, ch.property);
        if (!is_list_kind(p.kind)) {
          throw Error(ErrorKind::TypeMismatch, a.type_name() + "." + p.name + " is not a collection");
        }
        PropertyDecl element{p.name, element_kind(p.kind), p.target};
        Value value = coerce(element, ch.value);
        if (!Schema::conforms(element, value) || value.is_null()) {
          throw Error(ErrorKind::TypeMismatch, "element " + to_string(value) + " does not fit " +
                                                   a.type_name() + "." + p.name);
        }
        touch(ch.artifact, ch.property);
        auto& list = a.slot(ch.property).as_list();
        if (ch.op == ChangeOp::Add) {
          list.push_back(std::move(value));
        } else if (auto it = std::find(list.begin(), list.end(), value); it != list.end()) {
          list.erase(it);
        }
        return;
      }
    }
  }

  /// Integers are accepted for Real properties.
  static Value coerce(const PropertyDecl& p, const Value& v) {
    if (element_kind(p.kind) == PropertyKind::Real && !is_list_kind(p.kind) && v.is_int()) {
      return Value(static_cast<double>(v.as_int()));
    }
    return v;
  }

  ChangedTuples diff(const std::map<std::string, std::optional<Artifact>>& before,
                     const std::set<std::string>& replaced) const {
    ChangedTuples out;
    for (const auto& [id, prior] : before) {
      const Artifact* now = find(id);
      auto all = [&](const Artifact& a) {
        for (const auto& p : a.type().properties) out.tuples.insert(Tuple{id, p.name});
      };
      if (!prior && !now) continue;
      if (!prior) {
        out.created.push_back(id);
        all(*now);
        continue;
      }
      if (!now) {
        out.deleted.push_back(id);
        all(*prior);
        continue;
      }
      if (replaced.contains(id)) {
        // Deleted and recreated inside one change set.
        out.deleted.push_back(id);
        out.created.push_back(id);
        all(*prior);
        all(*now);
        continue;
      }
      for (std::size_t i = 0; i < now->values().size(); ++i) {
        if (!(prior->values()[i] == now->values()[i])) {
          out.tuples.insert(Tuple{id, now->type().properties[i].name});
        }
      }
    }
    return out;
  }

  const Schema* schema_;
  std::unordered_map<std::string, Artifact> artifacts_;
  std::optional<std::int64_t> last_sequence_;
};

}  // namespace tocl
