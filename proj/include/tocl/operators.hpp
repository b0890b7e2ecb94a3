#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tocl/truth_value.hpp"

// Per-node state machines of the six temporal operators. A result that is
// permanent terminates the node; callers freeze it and stop evaluating the
// operands. Operand values for plain OCL arguments are always permanent.

namespace tocl {

struct NextState {
  bool activated = false;
};

/// Activation returns tempF; afterwards next() reports the argument as it
/// stands from the following moment on.
inline TruthValue step_next(NextState& s, TruthValue a) noexcept {
  if (!s.activated) {
    s.activated = true;
    return TruthValue::TempFalse;
  }
  return a;
}

constexpr TruthValue step_eventually(TruthValue a) noexcept {
  switch (a) {
    case TruthValue::PermTrue: return TruthValue::PermTrue;
    case TruthValue::TempTrue: return TruthValue::TempTrue;
    default: return TruthValue::TempFalse;
  }
}

struct AlwaysState {
  bool last_a = true;
};

inline TruthValue step_always(AlwaysState& s, TruthValue a) noexcept {
  s.last_a = holds(a);
  return s.last_a ? TruthValue::TempTrue : TruthValue::PermFalse;
}

/// Strong until.
constexpr TruthValue step_until(TruthValue a, TruthValue b) noexcept {
  if (b == TruthValue::PermTrue) return TruthValue::PermTrue;
  if (b == TruthValue::TempTrue) return TruthValue::TempTrue;
  return holds(a) ? TruthValue::TempFalse : TruthValue::PermFalse;
}

/// Shared by atLeastOnce and everytime. While a trigger is pending, further
/// rises of A are ignored. The consequence of a trigger at moment t is
/// `B or next(B)`: `body` judges B from t, `next` judges B from t+1.
template <class Body>
struct TriggerState {
  bool last_a = false;
  bool active = false;
  bool next_started = false;
  std::uint64_t opened = 0;  // triggers so far
  Body body{};
  Body next{};
  std::optional<TruthValue> body_final;
  std::optional<TruthValue> next_final;
};

namespace detail {

template <class Body, class Open>
bool trigger_on_rise(TriggerState<Body>& s, bool a, Open& open) {
  bool rise = a && !s.last_a;
  s.last_a = a;
  if (s.active || !rise) return false;
  s.active = true;
  s.next_started = false;
  s.body_final.reset();
  s.next_final.reset();
  ++s.opened;
  s.body = open();
  s.next = Body{};
  return true;
}

template <class Body>
void release(TriggerState<Body>& s) {
  s.active = false;
  s.body = Body{};
  s.next = Body{};
}

template <class Body, class EvalB>
TruthValue judge(Body& body, std::optional<TruthValue>& fin, EvalB& eval_b) {
  if (fin) return *fin;
  TruthValue v = eval_b(body);
  if (is_permanent(v)) {
    fin = v;
    body = Body{};
  }
  return v;
}

/// The consequence of the pending trigger at this moment.
template <class Body, class Open, class EvalB>
TruthValue consequence(TriggerState<Body>& s, bool fresh, Open& open, EvalB& eval_b) {
  TruthValue now = judge(s.body, s.body_final, eval_b);
  if (fresh) return now;
  if (!s.next_started) {
    s.next = open();
    s.next_started = true;
  }
  return disjoin(now, judge(s.next, s.next_final, eval_b));
}

}  // namespace detail

/// atLeastOnce(A, B): for at least one rise of A, B holds at that moment or
/// the next one. Never permanently false.
template <class Body, class Open, class EvalB>
TruthValue step_at_least_once(TriggerState<Body>& s, bool a, Open&& open, EvalB&& eval_b) {
  bool fresh = detail::trigger_on_rise(s, a, open);
  if (!s.active) return s.opened == 0 ? TruthValue::TempTrue : TruthValue::TempFalse;
  TruthValue b = detail::consequence(s, fresh, open, eval_b);
  if (b == TruthValue::PermTrue) return TruthValue::PermTrue;
  if (fresh) return TruthValue::TempTrue;
  if (b == TruthValue::PermFalse) {
    detail::release(s);
    return TruthValue::TempFalse;
  }
  return b;
}

/// everytime(A, B): every rise of A is met by B at that moment or the next
/// one. Never permanently true.
template <class Body, class Open, class EvalB>
TruthValue step_everytime(TriggerState<Body>& s, bool a, Open&& open, EvalB&& eval_b) {
  bool fresh = detail::trigger_on_rise(s, a, open);
  if (!s.active) return TruthValue::TempTrue;
  TruthValue b = detail::consequence(s, fresh, open, eval_b);
  if (holds(b)) {
    if (b == TruthValue::PermTrue) detail::release(s);
    return TruthValue::TempTrue;
  }
  if (b == TruthValue::PermFalse && !fresh) return TruthValue::PermFalse;
  return TruthValue::TempFalse;
}

}  // namespace tocl
