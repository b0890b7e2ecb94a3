#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>

namespace tocl {

/// Four-valued verdict of a (sub)expression inside a temporal constraint.
/// Permanent values are absorbing: a node that yields one is terminated.
enum class TruthValue : std::uint8_t { TempTrue, TempFalse, PermTrue, PermFalse };

constexpr TruthValue make_truth(bool value, bool permanent) noexcept {
  if (permanent) return value ? TruthValue::PermTrue : TruthValue::PermFalse;
  return value ? TruthValue::TempTrue : TruthValue::TempFalse;
}

/// Boolean projection used by non-temporal parents.
constexpr bool holds(TruthValue v) noexcept {
  return v == TruthValue::TempTrue || v == TruthValue::PermTrue;
}

constexpr bool is_permanent(TruthValue v) noexcept {
  return v == TruthValue::PermTrue || v == TruthValue::PermFalse;
}

constexpr TruthValue negate(TruthValue v) noexcept {
  return make_truth(!holds(v), is_permanent(v));
}

/// Conjunction: false is permanent once any permanently false operand exists,
/// true is permanent only when both operands are.
constexpr TruthValue conjoin(TruthValue a, TruthValue b) noexcept {
  if (!holds(a) || !holds(b)) {
    bool perm = (!holds(a) && is_permanent(a)) || (!holds(b) && is_permanent(b));
    return make_truth(false, perm);
  }
  return make_truth(true, is_permanent(a) && is_permanent(b));
}

constexpr TruthValue disjoin(TruthValue a, TruthValue b) noexcept {
  return negate(conjoin(negate(a), negate(b)));
}

constexpr TruthValue exclusive_or(TruthValue a, TruthValue b) noexcept {
  return make_truth(holds(a) != holds(b), is_permanent(a) && is_permanent(b));
}

constexpr std::string_view to_string(TruthValue v) noexcept {
  switch (v) {
    case TruthValue::TempTrue: return "tempT";
    case TruthValue::TempFalse: return "tempF";
    case TruthValue::PermTrue: return "permT";
    case TruthValue::PermFalse: return "permF";
  }
  return "?";
}

inline std::optional<TruthValue> parse_truth(std::string_view s) noexcept {
  if (s == "tempT") return TruthValue::TempTrue;
  if (s == "tempF") return TruthValue::TempFalse;
  if (s == "permT") return TruthValue::PermTrue;
  if (s == "permF") return TruthValue::PermFalse;
  return std::nullopt;
}

inline std::ostream& operator<<(std::ostream& os, TruthValue v) { return os << to_string(v); }

}  // namespace tocl
