#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tocl/artifact_graph.hpp"
#include "tocl/checker.hpp"
#include "tocl/engine.hpp"

// Reference evaluator used to test the incremental engine. It shares no state
// layout, scope index or change diff with the engine: operator state lives in a
// flat map keyed by node path and binding chain, and moments are found by
// comparing each touched artifact before and after a change set on the tuples
// the previous evaluation read.

namespace tocl {

using VerdictMap = std::map<std::pair<InstanceId, std::int64_t>, TruthValue>;

struct OracleResult {
  VerdictMap verdicts;
  std::size_t skips_checked = 0;
  std::vector<std::string> skip_violations;
  std::set<std::pair<InstanceId, std::int64_t>> moments;  // evaluations the oracle performed
};

namespace oracle_detail {

struct TV {
  bool value = false;
  bool perm = false;
};

inline TruthValue tv(TV t) {
  if (t.perm) return t.value ? TruthValue::PermTrue : TruthValue::PermFalse;
  return t.value ? TruthValue::TempTrue : TruthValue::TempFalse;
}

inline TV from_tv(TruthValue t) {
  return {t == TruthValue::TempTrue || t == TruthValue::PermTrue,
          t == TruthValue::PermTrue || t == TruthValue::PermFalse};
}

struct Record {
  std::optional<TruthValue> frozen;
  bool started = false;
  bool last_a = false;
  std::uint64_t opened = 0;
  std::vector<std::uint64_t> cycles;
  bool second = false;
  std::optional<TV> first_done;
  std::optional<TV> second_done;
};

using Store = std::map<std::string, Record>;

struct Val {
  Value v;
  bool perm = false;
};

inline void erase_prefix(Store& s, const std::string& prefix) {
  auto it = s.lower_bound(prefix);
  while (it != s.end() && it->first.compare(0, prefix.size(), prefix) == 0) it = s.erase(it);
}

inline bool same_value(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) return a.as_number() == b.as_number();
  return a == b;
}

class Eval {
 public:
  Eval(const ArtifactGraph& g, Store& store) : g_(g), store_(&store) {}

  std::set<Tuple> reads;

  TruthValue root(const Node& n, const std::string& self) {
    self_ = Value(Ref{self});
    Val r = eval(n, "", "0", false);
    return tv({r.v.is_bool() && r.v.as_bool(), r.perm});
  }

 private:
  static bool truthy(const Val& x) { return x.v.is_bool() && x.v.as_bool(); }
  static TV truth(const Val& x) { return {truthy(x), x.perm}; }

  Val eval(const Node& n, const std::string& ctx, const std::string& path, bool temporal) {
    auto sub = [&](std::size_t i, bool t) { return eval(n.child(i), ctx, path + "." + std::to_string(i), t); };
    switch (n.kind) {
      case NodeKind::Literal: return {n.literal, temporal};
      case NodeKind::SelfRef: return {self_, temporal};
      case NodeKind::VarRef: {
        for (auto it = vars_.rbegin(); it != vars_.rend(); ++it) {
          if (it->first == n.name) return {it->second, temporal};
        }
        return {Value(), temporal};
      }
      case NodeKind::Navigate: {
        Val r = sub(0, temporal);
        if (!r.v.is_ref()) return {Value(), r.perm};
        reads.insert(Tuple{r.v.as_ref().id, n.name});
        const Artifact* a = g_.find(r.v.as_ref().id);
        const Value* v = a ? a->find(n.name) : nullptr;
        return {v ? *v : Value(), r.perm};
      }
      case NodeKind::Call: return call(n, sub, temporal);
      case NodeKind::Compare: {
        Val l = sub(0, temporal), r = sub(1, temporal);
        return {Value(compare(n.compare, l.v, r.v)), l.perm && r.perm};
      }
      case NodeKind::BoolOp: {
        Val l = sub(0, temporal), r = sub(1, temporal);
        if (!l.v.is_bool() || !r.v.is_bool()) return {Value(false), l.perm && r.perm};
        TV a = truth(l), b = truth(r), o;
        switch (n.bool_op) {
          case BoolOpKind::And:
            o.value = a.value && b.value;
            o.perm = o.value ? (a.perm && b.perm) : ((!a.value && a.perm) || (!b.value && b.perm));
            break;
          case BoolOpKind::Or:
            o.value = a.value || b.value;
            o.perm = o.value ? ((a.value && a.perm) || (b.value && b.perm)) : (a.perm && b.perm);
            break;
          case BoolOpKind::Xor:
            o.value = a.value != b.value;
            o.perm = a.perm && b.perm;
            break;
        }
        return {Value(o.value), o.perm};
      }
      case NodeKind::Not: {
        Val x = sub(0, temporal);
        if (!x.v.is_bool()) return {Value(false), x.perm};
        return {Value(!x.v.as_bool()), x.perm};
      }
      case NodeKind::Iterator: return iterate(n, ctx, path, temporal);
      case NodeKind::Temporal: return temporal_op(n, ctx, path);
    }
    return {};
  }

  template <class Sub>
  Val call(const Node& n, Sub& sub, bool temporal) {
    Val r = sub(0, temporal);
    std::vector<Value> args;
    bool perm = r.perm;
    for (std::size_t i = 1; i < n.arity(); ++i) {
      Val a = sub(i, temporal);
      perm = perm && a.perm;
      args.push_back(a.v);
    }
    const Value& x = r.v;
    Value out;
    switch (n.builtin) {
      case Builtin::IsDefined: out = Value(!x.is_null()); break;
      case Builtin::Size:
        if (x.is_string()) out = Value(static_cast<std::int64_t>(x.as_string().size()));
        if (x.is_list()) out = Value(static_cast<std::int64_t>(x.as_list().size()));
        break;
      case Builtin::Contains:
        if (x.is_string() && args[0].is_string()) out = Value(x.as_string().find(args[0].as_string()) != std::string::npos);
        break;
      case Builtin::IsEmpty:
        if (x.is_list()) out = Value(x.as_list().empty());
        break;
      case Builtin::Includes:
        if (x.is_list() && !args[0].is_null()) {
          bool found = false;
          for (const auto& e : x.as_list()) found = found || same_value(e, args[0]);
          out = Value(found);
        }
        break;
      case Builtin::At:
        if (x.is_list() && args[0].is_int() && args[0].as_int() >= 1 &&
            args[0].as_int() <= static_cast<std::int64_t>(x.as_list().size())) {
          out = x.as_list()[static_cast<std::size_t>(args[0].as_int() - 1)];
        }
        break;
      case Builtin::First:
        if (x.is_list() && !x.as_list().empty()) out = x.as_list()[0];
        break;
    }
    return {out, perm};
  }

  static bool compare(CompareOp op, const Value& l, const Value& r) {
    if (l.is_null() || r.is_null()) return false;
    if (op == CompareOp::Eq) return same_value(l, r);
    if (op == CompareOp::Ne) return !same_value(l, r);
    int c;
    if (l.is_number() && r.is_number()) {
      c = (l.as_number() > r.as_number()) - (l.as_number() < r.as_number());
    } else if (l.is_string() && r.is_string()) {
      c = (l.as_string() > r.as_string()) - (l.as_string() < r.as_string());
    } else {
      return false;
    }
    switch (op) {
      case CompareOp::Lt: return c < 0;
      case CompareOp::Le: return c <= 0;
      case CompareOp::Gt: return c > 0;
      case CompareOp::Ge: return c >= 0;
      default: return false;
    }
  }

  Val iterate(const Node& n, const std::string& ctx, const std::string& path, bool temporal) {
    Val src = eval(n.child(0), ctx, path + ".0", temporal);
    if (!src.v.is_list()) return {Value(), src.perm};
    const auto& elems = src.v.as_list();
    std::map<std::string, int> seen;
    std::set<std::string> live;
    std::vector<TV> bodies;
    Value::List picked;
    for (const auto& e : elems) {
      std::string key = e.is_ref() ? e.as_ref().id : to_string(e);
      if (int k = ++seen[key]; k > 1) key += "#" + std::to_string(k);
      live.insert(key);
      vars_.emplace_back(n.name, e);
      Val b = eval(n.child(1), ctx + path + "[" + key + "]/", "1", temporal);
      vars_.pop_back();
      bodies.push_back(truth(b));
      if (n.iterator == IteratorKind::Select && truthy(b)) picked.push_back(e);
      if (n.iterator == IteratorKind::Collect) picked.push_back(b.v);
      if (n.iterator == IteratorKind::Collect || n.iterator == IteratorKind::Select) {
        bodies.back().value = true;
      }
    }
    keys_gc(ctx + path, live);

    bool all_perm = true;
    for (const auto& b : bodies) all_perm = all_perm && b.perm;
    if (n.iterator == IteratorKind::ForAll || n.iterator == IteratorKind::Exists) {
      bool want = n.iterator == IteratorKind::ForAll;
      bool value = want;
      bool decided_perm = false;
      for (const auto& b : bodies) {
        if (b.value != want) {
          value = !want;
          decided_perm = decided_perm || b.perm;
        }
      }
      bool perm = value == want ? all_perm : decided_perm;
      return {Value(value), src.perm && perm};
    }
    return {Value(std::move(picked)), src.perm && all_perm};
  }

  // Drops the state of elements that left the collection.
  void keys_gc(const std::string& base, const std::set<std::string>& live) {
    std::string prefix = base + "[";
    std::set<std::string> gone;
    for (auto it = store_->lower_bound(prefix); it != store_->end() && it->first.starts_with(prefix); ++it) {
      std::string key = it->first.substr(prefix.size(), it->first.find("]/", prefix.size()) - prefix.size());
      if (!live.contains(key)) gone.insert(key);
    }
    for (const auto& k : gone) erase_prefix(*store_, prefix + k + "]/");
  }

  Val temporal_op(const Node& n, const std::string& ctx, const std::string& path) {
    Record& self = (*store_)[ctx + path];
    if (self.frozen) return {Value(from_tv(*self.frozen).value), true};
    auto arg = [&](std::size_t i) { return truth(eval(n.child(i), ctx, path + "." + std::to_string(i), true)); };
    TV r{};
    switch (n.temporal) {
      case TemporalKind::Next:
        if (!self.started) {
          Store scratch;
          Store* saved = std::exchange(store_, &scratch);
          arg(0);
          store_ = saved;
          (*store_)[ctx + path].started = true;
          r = {false, false};
        } else {
          r = arg(0);
        }
        break;
      case TemporalKind::Eventually: {
        TV a = arg(0);
        r = {a.value, a.value && a.perm};
        break;
      }
      case TemporalKind::Always: {
        TV a = arg(0);
        r = {a.value, !a.value};
        break;
      }
      case TemporalKind::Until: {
        TV a = arg(0), b = arg(1);
        if (b.value) r = b;
        else r = {false, !a.value};
        break;
      }
      case TemporalKind::AtLeastOnce:
      case TemporalKind::Everytime:
        r = trigger(n, ctx, path);
        break;
    }
    Record& rec = (*store_)[ctx + path];
    if (r.perm) {
      rec.frozen = tv(r);
      erase_prefix(*store_, ctx + path + "{");
    }
    return {Value(r.value), r.perm};
  }

  TV trigger(const Node& n, const std::string& ctx, const std::string& path) {
    bool a = truthy(eval(n.child(0), ctx, path + ".0", true));
    std::string key = ctx + path;
    bool fresh = false;
    std::string base;
    {
      Record& rec = (*store_)[key];
      if (rec.cycles.empty() && a && !rec.last_a) {
        rec.cycles.push_back(rec.opened++);
        rec.second = false;
        rec.first_done.reset();
        rec.second_done.reset();
        fresh = true;
      }
      rec.last_a = a;
      if (rec.cycles.empty()) {
        if (n.temporal == TemporalKind::AtLeastOnce) return {rec.opened == 0, false};
        return {true, false};
      }
      base = key + "{" + std::to_string(rec.cycles.front());
      if (!fresh) rec.second = true;
    }
    auto branch = [&](const std::string& prefix, std::optional<TV> Record::*done) {
      if (auto d = (*store_)[key].*done) return *d;
      TV r = truth(eval(n.child(1), prefix, "1", true));
      if (r.perm) {
        (*store_)[key].*done = r;
        erase_prefix(*store_, prefix);
      }
      return r;
    };
    TV b = branch(base + "}/", &Record::first_done);
    if ((*store_)[key].second) {
      TV c = branch(base + "+}/", &Record::second_done);
      b = {b.value || c.value, (b.value && b.perm) || (c.value && c.perm) || (b.perm && c.perm)};
    }
    auto close = [&] {
      erase_prefix(*store_, base);
      (*store_)[key].cycles.clear();
    };
    if (n.temporal == TemporalKind::AtLeastOnce) {
      if (b.value && b.perm) return {true, true};
      if (fresh) return {true, false};
      if (b.perm) close();
      return {b.value, false};
    }
    if (b.value) {
      if (b.perm) close();
      return {true, false};
    }
    return {false, b.perm && !fresh};
  }

  const ArtifactGraph& g_;
  Store* store_;
  Value self_;
  std::vector<std::pair<std::string, Value>> vars_;
};

struct Inst {
  std::size_t def;
  std::string context;
  Store store;
  Store before_last;
  TruthValue value = TruthValue::TempFalse;
  std::set<Tuple> reads;
  bool done = false;
};

}  // namespace oracle_detail

/// Feeds change sets one at a time through the reference evaluator.
/// With `check_skips`, every instance that a change set leaves alone is
/// evaluated anyway from its state before its last moment, and the outcome
/// must equal its standing verdict and read set.
class Oracle {
 public:
  Oracle(const Schema& schema, const std::vector<ConstraintDef>& defs, bool check_skips = true)
      : graph_(schema), defs_(&defs), check_skips_(check_skips) {}

  void apply(const ChangeSet& cs) {
    using namespace oracle_detail;
    std::map<std::string, std::optional<Artifact>> before;
    for (const auto& ch : cs.changes) {
      if (before.contains(ch.artifact)) continue;
      const Artifact* a = graph_.find(ch.artifact);
      before.emplace(ch.artifact, a ? std::optional<Artifact>(*a) : std::nullopt);
    }
    graph_.apply(cs);
    std::set<std::string> deleted, recreated, created;
    for (const auto& ch : cs.changes) {
      if (ch.op == ChangeOp::Delete) deleted.insert(ch.artifact);
      if (ch.op == ChangeOp::Create && graph_.find(ch.artifact)) {
        created.insert(ch.artifact);
        if (deleted.contains(ch.artifact)) recreated.insert(ch.artifact);
      }
    }
    auto changed = [&](const Tuple& t) {
      auto it = before.find(t.artifact);
      if (it == before.end()) return false;
      if (recreated.contains(t.artifact)) return true;
      const Artifact* a = it->second ? &*it->second : nullptr;
      const Artifact* b = graph_.find(t.artifact);
      if (!a || !b) return (a == nullptr) != (b == nullptr);
      const Value* x = a->find(t.property);
      const Value* y = b->find(t.property);
      if (!x || !y) return (x == nullptr) != (y == nullptr);
      return !(*x == *y);
    };

    sequence_ = cs.sequence;
    moments_.clear();
    for (InstanceId id = 0; id < insts_.size(); ++id) {
      Inst& in = insts_[id];
      if (in.done) continue;
      if (!graph_.find(in.context) || recreated.contains(in.context)) {
        in.done = true;
        continue;
      }
      bool moment = false;
      for (const auto& t : in.reads) moment = moment || changed(t);
      if (moment) {
        evaluate(id);
      } else if (check_skips_) {
        Store probe = in.before_last;
        Eval e(graph_, probe);
        TruthValue again = e.root((*defs_)[in.def].root(), in.context);
        ++skips_checked_;
        if (again != in.value || e.reads != in.reads) {
          skip_violations_.push_back("instance " + std::to_string(id) + " at seq " + std::to_string(cs.sequence));
        }
      }
    }
    for (const auto& ctx : created) {
      const std::string& type = graph_.get(ctx).type_name();
      for (std::size_t d = 0; d < defs_->size(); ++d) {
        if ((*defs_)[d].context_type() != type) continue;
        insts_.push_back(Inst{d, ctx, {}, {}, TruthValue::TempFalse, {}, false});
        evaluate(insts_.size() - 1);
      }
    }
  }

  std::size_t instance_count() const noexcept { return insts_.size(); }
  TruthValue value(InstanceId id) const { return insts_.at(id).value; }
  /// Instances evaluated by the latest change set.
  const std::set<InstanceId>& moments() const noexcept { return moments_; }
  std::int64_t sequence() const noexcept { return sequence_; }
  std::size_t skips_checked() const noexcept { return skips_checked_; }
  const std::vector<std::string>& skip_violations() const noexcept { return skip_violations_; }

 private:
  void evaluate(InstanceId id) {
    using namespace oracle_detail;
    Inst& in = insts_[id];
    if (check_skips_) in.before_last = in.store;
    Eval e(graph_, in.store);
    in.value = e.root((*defs_)[in.def].root(), in.context);
    in.reads = std::move(e.reads);
    if (is_permanent(in.value)) in.done = true;
    moments_.insert(id);
  }

  ArtifactGraph graph_;
  const std::vector<ConstraintDef>* defs_;
  bool check_skips_;
  std::vector<oracle_detail::Inst> insts_;
  std::set<InstanceId> moments_;
  std::int64_t sequence_ = 0;
  std::size_t skips_checked_ = 0;
  std::vector<std::string> skip_violations_;
};

/// Verdict of every instance after every change set.
inline OracleResult oracle_verdicts(const Schema& schema, const std::vector<ChangeSet>& sets,
                                    const std::vector<ConstraintDef>& defs, bool check_skips = true) {
  Oracle oracle(schema, defs, check_skips);
  OracleResult out;
  for (const auto& cs : sets) {
    oracle.apply(cs);
    for (InstanceId id = 0; id < oracle.instance_count(); ++id) out.verdicts[{id, cs.sequence}] = oracle.value(id);
    for (InstanceId id : oracle.moments()) out.moments.insert({id, cs.sequence});
  }
  out.skips_checked = oracle.skips_checked();
  out.skip_violations = oracle.skip_violations();
  return out;
}

/// Records every instance's current verdict after a change set.
inline void record_verdicts(const Engine& engine, std::int64_t sequence, VerdictMap& out) {
  for (const auto& inst : engine.instances()) out[{inst.id, sequence}] = inst.value;
}

/// Human-readable differences between two verdict maps.
inline std::vector<std::string> compare_verdicts(const VerdictMap& engine, const VerdictMap& oracle) {
  std::vector<std::string> out;
  auto key = [](const auto& k) {
    return "instance " + std::to_string(k.first) + " at seq " + std::to_string(k.second);
  };
  for (const auto& [k, v] : oracle) {
    auto it = engine.find(k);
    if (it == engine.end()) {
      out.push_back(key(k) + ": missing from engine (oracle " + std::string(to_string(v)) + ")");
    } else if (it->second != v) {
      out.push_back(key(k) + ": engine " + std::string(to_string(it->second)) + ", oracle " +
                    std::string(to_string(v)));
    }
  }
  for (const auto& [k, v] : engine) {
    if (!oracle.contains(k)) out.push_back(key(k) + ": missing from oracle");
  }
  return out;
}

}  // namespace tocl
