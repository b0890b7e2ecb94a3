#pragma once

#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace tocl {

/// Reference to another artifact by id. The target may be missing (dangling).
struct Ref {
  std::string id;
  friend bool operator==(const Ref&, const Ref&) = default;
};

struct Null {
  friend bool operator==(Null, Null) = default;
};

/// Property value. Null doubles as OCL's Undefined.
class Value {
 public:
  using List = std::vector<Value>;
  using Storage = std::variant<Null, bool, std::int64_t, double, std::string, Ref, List>;

  Value() = default;
  Value(Null) {}
  Value(bool b) : v_(b) {}
  Value(int i) : v_(std::int64_t{i}) {}
  Value(std::int64_t i) : v_(i) {}
  Value(double d) : v_(d) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(const char* s) : v_(std::string(s)) {}
  Value(Ref r) : v_(std::move(r)) {}
  Value(List l) : v_(std::move(l)) {}

  bool is_null() const noexcept { return std::holds_alternative<Null>(v_); }
  bool is_bool() const noexcept { return std::holds_alternative<bool>(v_); }
  bool is_int() const noexcept { return std::holds_alternative<std::int64_t>(v_); }
  bool is_real() const noexcept { return std::holds_alternative<double>(v_); }
  bool is_number() const noexcept { return is_int() || is_real(); }
  bool is_string() const noexcept { return std::holds_alternative<std::string>(v_); }
  bool is_ref() const noexcept { return std::holds_alternative<Ref>(v_); }
  bool is_list() const noexcept { return std::holds_alternative<List>(v_); }

  bool as_bool() const { return std::get<bool>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_number() const { return is_int() ? static_cast<double>(as_int()) : std::get<double>(v_); }
  const std::string& as_string() const { return std::get<std::string>(v_); }
  const Ref& as_ref() const { return std::get<Ref>(v_); }
  const List& as_list() const { return std::get<List>(v_); }
  List& as_list() { return std::get<List>(v_); }

  /// True only for a Boolean true; Undefined and non-Booleans count as false.
  bool truthy() const noexcept { return is_bool() && std::get<bool>(v_); }

  const Storage& storage() const noexcept { return v_; }

  friend bool operator==(const Value&, const Value&) = default;

 private:
  Storage v_;
};

inline void write_value(std::ostream& os, const Value& v) {
  if (v.is_null()) {
    os << "null";
  } else if (v.is_bool()) {
    os << (v.as_bool() ? "true" : "false");
  } else if (v.is_int()) {
    os << v.as_int();
  } else if (v.is_real()) {
    os << v.as_number();
  } else if (v.is_string()) {
    os << '\'' << v.as_string() << '\'';
  } else if (v.is_ref()) {
    os << '@' << v.as_ref().id;
  } else {
    os << '[';
    bool first = true;
    for (const auto& e : v.as_list()) {
      if (!first) os << ", ";
      first = false;
      write_value(os, e);
    }
    os << ']';
  }
}

inline std::ostream& operator<<(std::ostream& os, const Value& v) {
  write_value(os, v);
  return os;
}

inline std::string to_string(const Value& v) {
  std::ostringstream os;
  write_value(os, v);
  return os.str();
}

}  // namespace tocl
