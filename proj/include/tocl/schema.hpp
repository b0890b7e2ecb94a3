#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tocl/error.hpp"
#include "tocl/value.hpp"

namespace tocl {

enum class PropertyKind { Bool, Int, Real, String, Ref, ListRef, ListBool, ListInt, ListReal, ListString };

constexpr bool is_list_kind(PropertyKind k) noexcept {
  return k == PropertyKind::ListRef || k == PropertyKind::ListBool || k == PropertyKind::ListInt ||
         k == PropertyKind::ListReal || k == PropertyKind::ListString;
}

constexpr PropertyKind element_kind(PropertyKind k) noexcept {
  switch (k) {
    case PropertyKind::ListRef: return PropertyKind::Ref;
    case PropertyKind::ListBool: return PropertyKind::Bool;
    case PropertyKind::ListInt: return PropertyKind::Int;
    case PropertyKind::ListReal: return PropertyKind::Real;
    case PropertyKind::ListString: return PropertyKind::String;
    default: return k;
  }
}

constexpr std::string_view to_string(PropertyKind k) noexcept {
  switch (k) {
    case PropertyKind::Bool: return "bool";
    case PropertyKind::Int: return "int";
    case PropertyKind::Real: return "real";
    case PropertyKind::String: return "string";
    case PropertyKind::Ref: return "ref";
    case PropertyKind::ListRef: return "list-ref";
    case PropertyKind::ListBool: return "list-bool";
    case PropertyKind::ListInt: return "list-int";
    case PropertyKind::ListReal: return "list-real";
    case PropertyKind::ListString: return "list-string";
  }
  return "?";
}

inline std::optional<PropertyKind> parse_property_kind(std::string_view s) noexcept {
  for (auto k : {PropertyKind::Bool, PropertyKind::Int, PropertyKind::Real, PropertyKind::String,
                 PropertyKind::Ref, PropertyKind::ListRef, PropertyKind::ListBool,
                 PropertyKind::ListInt, PropertyKind::ListReal, PropertyKind::ListString}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

struct PropertyDecl {
  std::string name;
  PropertyKind kind = PropertyKind::String;
  std::string target;  // Ref / ListRef only
};

struct TypeDef {
  std::string name;
  std::vector<PropertyDecl> properties;

  const PropertyDecl* find(std::string_view property) const noexcept {
    for (const auto& p : properties) {
      if (p.name == property) return &p;
    }
    return nullptr;
  }
};

/// Artifact type universe. Immutable once validated.
class Schema {
 public:
  Schema() = default;

  explicit Schema(std::vector<TypeDef> types) {
    for (auto& t : types) {
      std::string name = t.name;
      if (!types_.emplace(name, std::move(t)).second) {
        throw Error(ErrorKind::Format, "duplicate type '" + name + "'");
      }
    }
    validate();
  }

  const TypeDef* find(std::string_view type) const noexcept {
    auto it = types_.find(std::string(type));
    return it == types_.end() ? nullptr : &it->second;
  }

  const TypeDef& get(std::string_view type) const {
    if (auto* t = find(type)) return *t;
    throw Error(ErrorKind::UnknownType, "unknown type '" + std::string(type) + "'");
  }

  const PropertyDecl& property(std::string_view type, std::string_view prop) const {
    const auto& t = get(type);
    if (auto* p = t.find(prop)) return *p;
    throw Error(ErrorKind::UnknownProperty,
                "type '" + std::string(type) + "' has no property '" + std::string(prop) + "'");
  }

  const std::map<std::string, TypeDef, std::less<>>& types() const noexcept { return types_; }

  /// Whether a concrete value is acceptable for a declared property.
  static bool conforms(const PropertyDecl& decl, const Value& v) noexcept {
    if (v.is_null()) return !is_list_kind(decl.kind);
    auto scalar_ok = [](PropertyKind k, const Value& x) {
      switch (k) {
        case PropertyKind::Bool: return x.is_bool();
        case PropertyKind::Int: return x.is_int();
        case PropertyKind::Real: return x.is_number();
        case PropertyKind::String: return x.is_string();
        case PropertyKind::Ref: return x.is_ref();
        default: return false;
      }
    };
    if (!is_list_kind(decl.kind)) return scalar_ok(decl.kind, v);
    if (!v.is_list()) return false;
    for (const auto& e : v.as_list()) {
      if (!scalar_ok(element_kind(decl.kind), e)) return false;
    }
    return true;
  }

  static Value default_value(const PropertyDecl& decl) {
    if (is_list_kind(decl.kind)) return Value(Value::List{});
    return Value();
  }

 private:
  void validate() const {
    for (const auto& [name, t] : types_) {
      for (std::size_t i = 0; i < t.properties.size(); ++i) {
        const auto& p = t.properties[i];
        for (std::size_t j = 0; j < i; ++j) {
          if (t.properties[j].name == p.name) {
            throw Error(ErrorKind::Format, "duplicate property '" + p.name + "' in type '" + name + "'");
          }
        }
        bool needs_target = p.kind == PropertyKind::Ref || p.kind == PropertyKind::ListRef;
        if (needs_target && !find(p.target)) {
          throw Error(ErrorKind::UnknownType, "property '" + name + "." + p.name +
                                                  "' targets unknown type '" + p.target + "'");
        }
      }
    }
  }

  std::map<std::string, TypeDef, std::less<>> types_;
};

}  // namespace tocl
