#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tocl/artifact_graph.hpp"
#include "tocl/checker.hpp"
#include "tocl/operators.hpp"
#include "tocl/truth_value.hpp"

// Per-instance evaluation state. Region 0 is the constraint body; iterator
// bodies and trigger consequences that contain temporal operators get a child
// Frame per binding or per cycle.

namespace tocl {

struct Frame;
using FramePtr = std::unique_ptr<Frame>;

struct IteratorState {
  std::map<std::string, FramePtr> bindings;
};

using OperatorState =
    std::variant<std::monostate, NextState, AlwaysState, TriggerState<FramePtr>, IteratorState>;

struct Slot {
  OperatorState state;
  std::optional<TruthValue> final;  // set once terminated
};

struct Frame {
  int region = 0;
  std::vector<Slot> slots;
};

inline FramePtr make_frame(const ConstraintDef& def, int region) {
  auto f = std::make_unique<Frame>();
  f->region = region;
  const auto& nodes = def.regions().at(static_cast<std::size_t>(region)).slots;
  f->slots.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = *nodes[i];
    if (n.kind == NodeKind::Iterator) {
      f->slots[i].state = IteratorState{};
      continue;
    }
    switch (n.temporal) {
      case TemporalKind::Next: f->slots[i].state = NextState{}; break;
      case TemporalKind::Always: f->slots[i].state = AlwaysState{}; break;
      case TemporalKind::AtLeastOnce:
      case TemporalKind::Everytime: f->slots[i].state = TriggerState<FramePtr>{}; break;
      default: break;
    }
  }
  return f;
}

/// Size of the live state, for memory accounting.
struct StateCensus {
  std::size_t frames = 0;
  std::size_t operator_states = 0;  // non-terminated temporal operator nodes
  std::size_t terminated = 0;
  std::size_t cycles = 0;    // pending triggers
  std::size_t bindings = 0;  // iterator child instances
  std::size_t booleans = 0;  // Boolean state bits held by operators

  std::size_t records() const noexcept { return frames + operator_states + cycles + bindings; }

  StateCensus& operator+=(const StateCensus& o) noexcept {
    frames += o.frames;
    operator_states += o.operator_states;
    terminated += o.terminated;
    cycles += o.cycles;
    bindings += o.bindings;
    booleans += o.booleans;
    return *this;
  }
};

inline StateCensus census(const Frame& f) {
  StateCensus c;
  c.frames = 1;
  for (const auto& slot : f.slots) {
    if (slot.final) {
      ++c.terminated;
      continue;
    }
    std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, IteratorState>) {
            c.bindings += s.bindings.size();
            for (const auto& [key, child] : s.bindings) c += census(*child);
          } else {
            ++c.operator_states;
            if constexpr (std::is_same_v<S, NextState> || std::is_same_v<S, AlwaysState>) {
              c.booleans += 1;
            } else if constexpr (std::is_same_v<S, TriggerState<FramePtr>>) {
              c.booleans += 3;  // last A, pending trigger, second branch started
              if (s.active) ++c.cycles;
              if (s.body) c += census(*s.body);
              if (s.next) c += census(*s.next);
            }
          }
        },
        slot.state);
  }
  return c;
}

/// Collects the tuples read during one evaluation.
class ReadSet {
 public:
  void add(const std::string& artifact, const std::string& property) {
    tuples_.push_back(Tuple{artifact, property});
  }

  /// Sorted, duplicate-free.
  std::vector<Tuple> take() {
    std::sort(tuples_.begin(), tuples_.end());
    tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
    return std::move(tuples_);
  }

 private:
  std::vector<Tuple> tuples_;
};

namespace detail {

/// Value plus permanence. Plain values are permanent only when consumed by a
/// temporal operator (a moment's value never changes); outside any temporal
/// operator they are fluents.
struct Outcome {
  Value value;
  bool perm = false;

  TruthValue truth() const noexcept { return make_truth(value.truthy(), perm); }
};

inline bool values_equal(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) return a.as_number() == b.as_number();
  return a == b;
}

inline std::optional<bool> compare_values(CompareOp op, const Value& l, const Value& r) {
  if (l.is_null() || r.is_null()) return std::nullopt;
  switch (op) {
    case CompareOp::Eq: return values_equal(l, r);
    case CompareOp::Ne: return !values_equal(l, r);
    default: break;
  }
  int c = 0;
  if (l.is_number() && r.is_number()) {
    double a = l.as_number(), b = r.as_number();
    c = a < b ? -1 : (a > b ? 1 : 0);
  } else if (l.is_string() && r.is_string()) {
    int k = l.as_string().compare(r.as_string());
    c = k < 0 ? -1 : (k > 0 ? 1 : 0);
  } else {
    return std::nullopt;
  }
  switch (op) {
    case CompareOp::Lt: return c < 0;
    case CompareOp::Le: return c <= 0;
    case CompareOp::Gt: return c > 0;
    case CompareOp::Ge: return c >= 0;
    default: return std::nullopt;
  }
}

/// Builtin operations over already-evaluated operands. Undefined in, Undefined out
/// (isDefined excepted).
inline Value apply_builtin(Builtin b, const Value& recv, const std::vector<Value>& args) {
  if (b == Builtin::IsDefined) return Value(!recv.is_null());
  if (recv.is_null()) return Value();
  switch (b) {
    case Builtin::Size:
      if (recv.is_string()) return Value(static_cast<std::int64_t>(recv.as_string().size()));
      if (recv.is_list()) return Value(static_cast<std::int64_t>(recv.as_list().size()));
      return Value();
    case Builtin::Contains:
      if (!recv.is_string() || !args[0].is_string()) return Value();
      return Value(recv.as_string().find(args[0].as_string()) != std::string::npos);
    case Builtin::IsEmpty:
      return recv.is_list() ? Value(recv.as_list().empty()) : Value();
    case Builtin::Includes: {
      if (!recv.is_list() || args[0].is_null()) return Value();
      for (const auto& e : recv.as_list()) {
        if (values_equal(e, args[0])) return Value(true);
      }
      return Value(false);
    }
    case Builtin::At: {
      // 1-based, as in OCL.
      if (!recv.is_list() || !args[0].is_int()) return Value();
      std::int64_t i = args[0].as_int();
      const auto& l = recv.as_list();
      if (i < 1 || i > static_cast<std::int64_t>(l.size())) return Value();
      return l[static_cast<std::size_t>(i - 1)];
    }
    case Builtin::First:
      if (!recv.is_list() || recv.as_list().empty()) return Value();
      return recv.as_list().front();
    default:
      return Value();
  }
}

/// Key under which an iterator element's child state is kept.
inline std::vector<std::string> binding_keys(const Value::List& elements) {
  std::vector<std::string> keys;
  keys.reserve(elements.size());
  std::map<std::string, int> seen;
  for (const auto& e : elements) {
    std::string k = e.is_ref() ? e.as_ref().id : to_string(e);
    int n = ++seen[k];
    if (n > 1) k += "#" + std::to_string(n);
    keys.push_back(std::move(k));
  }
  return keys;
}

class Evaluator {
 public:
  Evaluator(const ConstraintDef& def, const ArtifactGraph& model, ReadSet& reads,
            std::vector<std::string>& errors)
      : def_(def), model_(model), reads_(reads), errors_(errors) {}

  TruthValue run(Frame& root, const std::string& self_id) {
    env_.clear();
    self_ = Value(Ref{self_id});
    return eval(def_.root(), root, false).truth();
  }

 private:
  Outcome eval(const Node& n, Frame& frame, bool in_temporal) {
    switch (n.kind) {
      case NodeKind::Literal:
        return {n.literal, in_temporal};
      case NodeKind::SelfRef:
        return {self_, in_temporal};
      case NodeKind::VarRef:
        for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
          if (it->first == n.name) return {it->second, in_temporal};
        }
        errors_.push_back("unbound variable '" + n.name + "'");
        return {Value(), in_temporal};
      case NodeKind::Navigate: {
        Outcome recv = eval(n.child(0), frame, in_temporal);
        return {navigate(recv.value, n.name), recv.perm};
      }
      case NodeKind::Call: {
        Outcome recv = eval(n.child(0), frame, in_temporal);
        bool perm = recv.perm;
        std::vector<Value> args;
        for (std::size_t i = 1; i < n.arity(); ++i) {
          Outcome a = eval(n.child(i), frame, in_temporal);
          perm = perm && a.perm;
          args.push_back(std::move(a.value));
        }
        return {apply_builtin(n.builtin, recv.value, args), perm};
      }
      case NodeKind::Compare: {
        Outcome l = eval(n.child(0), frame, in_temporal);
        Outcome r = eval(n.child(1), frame, in_temporal);
        auto res = compare_values(n.compare, l.value, r.value);
        return {Value(res.value_or(false)), l.perm && r.perm};
      }
      case NodeKind::BoolOp: {
        Outcome l = eval(n.child(0), frame, in_temporal);
        Outcome r = eval(n.child(1), frame, in_temporal);
        if (l.value.is_null() || r.value.is_null()) return {Value(false), l.perm && r.perm};
        TruthValue t = n.bool_op == BoolOpKind::And   ? conjoin(l.truth(), r.truth())
                       : n.bool_op == BoolOpKind::Or ? disjoin(l.truth(), r.truth())
                                                     : exclusive_or(l.truth(), r.truth());
        return {Value(holds(t)), is_permanent(t)};
      }
      case NodeKind::Not: {
        Outcome o = eval(n.child(0), frame, in_temporal);
        if (o.value.is_null()) return {Value(false), o.perm};
        return {Value(!o.value.truthy()), o.perm};
      }
      case NodeKind::Iterator:
        return iterate(n, frame, in_temporal);
      case NodeKind::Temporal:
        return temporal(n, frame);
    }
    return {};
  }

  Value navigate(const Value& recv, const std::string& property) {
    if (recv.is_null()) return Value();
    if (!recv.is_ref()) {
      errors_.push_back("cannot navigate '" + property + "' on a non-reference value");
      return Value();
    }
    const std::string& id = recv.as_ref().id;
    reads_.add(id, property);
    const Artifact* a = model_.find(id);
    if (!a) {
      errors_.push_back("dangling reference to '" + id + "' while reading '" + property + "'");
      return Value();
    }
    const Value* v = a->find(property);
    if (!v) {
      errors_.push_back("artifact '" + id + "' of type " + a->type_name() + " has no property '" +
                        property + "'");
      return Value();
    }
    return *v;
  }

  Outcome iterate(const Node& n, Frame& frame, bool in_temporal) {
    Outcome source = eval(n.child(0), frame, in_temporal);
    if (!source.value.is_list()) return {Value(), source.perm};
    const auto& elements = source.value.as_list();

    IteratorState* state = nullptr;
    std::vector<std::string> keys;
    if (n.slot >= 0) {
      state = &std::get<IteratorState>(frame.slots[static_cast<std::size_t>(n.slot)].state);
      keys = binding_keys(elements);
    }

    TruthValue acc = n.iterator == IteratorKind::Exists ? TruthValue::PermFalse : TruthValue::PermTrue;
    bool perm = true;
    Value::List collected;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      env_.emplace_back(n.name, elements[i]);
      Outcome body;
      if (state) {
        auto& child = state->bindings[keys[i]];
        if (!child) child = make_frame(def_, n.child_region);
        body = eval(n.child(1), *child, in_temporal);
      } else {
        body = eval(n.child(1), frame, in_temporal);
      }
      env_.pop_back();
      perm = perm && body.perm;
      switch (n.iterator) {
        case IteratorKind::ForAll: acc = conjoin(acc, body.truth()); break;
        case IteratorKind::Exists: acc = disjoin(acc, body.truth()); break;
        case IteratorKind::Select:
          if (body.value.truthy()) collected.push_back(elements[i]);
          break;
        case IteratorKind::Collect: collected.push_back(std::move(body.value)); break;
      }
    }
    if (state) {
      // Elements that left the collection lose their state.
      std::erase_if(state->bindings, [&](const auto& kv) {
        return std::find(keys.begin(), keys.end(), kv.first) == keys.end();
      });
    }
    if (n.iterator == IteratorKind::ForAll || n.iterator == IteratorKind::Exists) {
      return {Value(holds(acc)), source.perm && is_permanent(acc)};
    }
    return {Value(std::move(collected)), source.perm && perm};
  }

  Outcome temporal(const Node& n, Frame& frame) {
    Slot& slot = frame.slots[static_cast<std::size_t>(n.slot)];
    if (slot.final) return {Value(holds(*slot.final)), true};

    TruthValue r = TruthValue::TempFalse;
    switch (n.temporal) {
      case TemporalKind::Next: {
        auto& s = std::get<NextState>(slot.state);
        if (!s.activated) {
          FramePtr scratch = make_frame(def_, frame.region);
          eval(n.child(0), *scratch, true);
          r = step_next(s, TruthValue::TempFalse);
        } else {
          r = step_next(s, eval(n.child(0), frame, true).truth());
        }
        break;
      }
      case TemporalKind::Eventually:
        r = step_eventually(eval(n.child(0), frame, true).truth());
        break;
      case TemporalKind::Always:
        r = step_always(std::get<AlwaysState>(slot.state), eval(n.child(0), frame, true).truth());
        break;
      case TemporalKind::Until: {
        TruthValue a = eval(n.child(0), frame, true).truth();
        TruthValue b = eval(n.child(1), frame, true).truth();
        r = step_until(a, b);
        break;
      }
      case TemporalKind::AtLeastOnce:
      case TemporalKind::Everytime: {
        auto& s = std::get<TriggerState<FramePtr>>(slot.state);
        bool a = eval(n.child(0), frame, true).value.truthy();
        auto open = [&]() -> FramePtr {
          return n.child_region >= 0 ? make_frame(def_, n.child_region) : nullptr;
        };
        auto eval_b = [&](FramePtr& body) {
          return eval(n.child(1), body ? *body : frame, true).truth();
        };
        r = n.temporal == TemporalKind::AtLeastOnce ? step_at_least_once(s, a, open, eval_b)
                                                    : step_everytime(s, a, open, eval_b);
        break;
      }
    }
    if (is_permanent(r)) {
      slot.final = r;
      slot.state = std::monostate{};
    }
    return {Value(holds(r)), is_permanent(r)};
  }

  const ConstraintDef& def_;
  const ArtifactGraph& model_;
  ReadSet& reads_;
  std::vector<std::string>& errors_;
  std::vector<std::pair<std::string, Value>> env_;
  Value self_;
};

}  // namespace detail

/// Result of one evaluation of one instance.
struct Evaluation {
  TruthValue value = TruthValue::TempFalse;
  std::vector<Tuple> reads;          // sorted, unique
  std::vector<std::string> errors;   // runtime navigation problems, if any
};

/// Persistent per-instance evaluation tree.
class EvalTree {
 public:
  explicit EvalTree(const ConstraintDef& def) : def_(&def), root_(make_frame(def, 0)) {}

  Evaluation evaluate(const ArtifactGraph& model, const std::string& self_id) {
    Evaluation out;
    ReadSet reads;
    detail::Evaluator ev(*def_, model, reads, out.errors);
    out.value = ev.run(*root_, self_id);
    out.reads = reads.take();
    return out;
  }

  StateCensus census() const { return tocl::census(*root_); }
  const ConstraintDef& def() const noexcept { return *def_; }

 private:
  const ConstraintDef* def_;
  FramePtr root_;
};

}  // namespace tocl
