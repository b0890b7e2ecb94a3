#pragma once

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tocl/artifact_graph.hpp"
#include "tocl/engine.hpp"
#include "tocl/error.hpp"
#include "tocl/schema.hpp"

namespace tocl {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Format, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Format, where + ": " + e.what());
  }
}

// ---- schema ----

inline Schema schema_from_json(const json& j) {
  if (!j.is_object() || !j.contains("types") || !j["types"].is_array()) {
    throw Error(ErrorKind::Format, "schema: expected an object with a \"types\" array");
  }
  std::vector<TypeDef> types;
  for (const auto& t : j["types"]) {
    TypeDef def;
    def.name = t.at("name").get<std::string>();
    for (const auto& p : t.value("properties", json::array())) {
      PropertyDecl d;
      d.name = p.at("name").get<std::string>();
      std::string kind = p.at("kind").get<std::string>();
      auto k = parse_property_kind(kind);
      if (!k) throw Error(ErrorKind::Format, "schema: unknown property kind '" + kind + "'");
      d.kind = *k;
      d.target = p.value("target", std::string());
      def.properties.push_back(std::move(d));
    }
    types.push_back(std::move(def));
  }
  return Schema(std::move(types));
}

inline json schema_to_json(const Schema& s) {
  json types = json::array();
  for (const auto& [name, t] : s.types()) {
    json props = json::array();
    for (const auto& p : t.properties) {
      json jp = {{"name", p.name}, {"kind", std::string(to_string(p.kind))}};
      if (!p.target.empty()) jp["target"] = p.target;
      props.push_back(std::move(jp));
    }
    types.push_back({{"name", t.name}, {"properties", std::move(props)}});
  }
  return {{"types", std::move(types)}};
}

inline Schema load_schema(const std::string& path) {
  try {
    return schema_from_json(parse_json(read_file(path), path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, path + ": " + e.what());
  }
}

// ---- values ----

inline Value scalar_from_json(PropertyKind kind, const json& j, const std::string& where) {
  if (j.is_null()) return Value();
  auto bad = [&]() {
    return Error(ErrorKind::TypeMismatch, where + ": " + j.dump() + " is not a " + std::string(to_string(kind)));
  };
  switch (kind) {
    case PropertyKind::Bool:
      if (!j.is_boolean()) throw bad();
      return Value(j.get<bool>());
    case PropertyKind::Int:
      if (!j.is_number_integer()) throw bad();
      return Value(j.get<std::int64_t>());
    case PropertyKind::Real:
      if (!j.is_number()) throw bad();
      return Value(j.get<double>());
    case PropertyKind::String:
      if (!j.is_string()) throw bad();
      return Value(j.get<std::string>());
    case PropertyKind::Ref:
      if (!j.is_string()) throw bad();
      return Value(Ref{j.get<std::string>()});
    default:
      throw bad();
  }
}

inline Value value_from_json(const PropertyDecl& p, const json& j, const std::string& where) {
  if (!is_list_kind(p.kind)) return scalar_from_json(p.kind, j, where);
  if (j.is_null()) return Value(Value::List{});
  if (!j.is_array()) throw Error(ErrorKind::TypeMismatch, where + ": " + p.name + " expects a list");
  Value::List out;
  for (const auto& e : j) out.push_back(scalar_from_json(element_kind(p.kind), e, where));
  return Value(std::move(out));
}

/// Without a declaration: strings stay strings.
inline Value untyped_from_json(const json& j) {
  if (j.is_null()) return Value();
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_number()) return Value(j.get<double>());
  if (j.is_string()) return Value(j.get<std::string>());
  if (j.is_array()) {
    Value::List out;
    for (const auto& e : j) out.push_back(untyped_from_json(e));
    return Value(std::move(out));
  }
  return Value();
}

inline json value_to_json(const Value& v) {
  if (v.is_null()) return nullptr;
  if (v.is_bool()) return v.as_bool();
  if (v.is_int()) return v.as_int();
  if (v.is_real()) return v.as_number();
  if (v.is_string()) return v.as_string();
  if (v.is_ref()) return v.as_ref().id;
  json out = json::array();
  for (const auto& e : v.as_list()) out.push_back(value_to_json(e));
  return out;
}

namespace io_detail {

inline std::vector<std::pair<std::string, Value>> initial_properties(const TypeDef& type, const json& props,
                                                                     const std::string& where) {
  std::vector<std::pair<std::string, Value>> out;
  if (props.is_null()) return out;
  if (!props.is_object()) throw Error(ErrorKind::Format, where + ": properties must be an object");
  for (const auto& [name, j] : props.items()) {
    const PropertyDecl* p = type.find(name);
    if (!p) {
      throw Error(ErrorKind::UnknownProperty, where + ": type '" + type.name + "' has no property '" + name + "'");
    }
    out.emplace_back(name, value_from_json(*p, j, where));
  }
  return out;
}

}  // namespace io_detail

// ---- artifact dump ----

/// The initial state as one change set of creations.
inline ChangeSet artifacts_from_json(const json& j, const Schema& schema, std::int64_t sequence = 0) {
  if (!j.is_array()) throw Error(ErrorKind::Format, "artifacts: expected an array");
  ChangeSet cs;
  cs.sequence = sequence;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& a = j[i];
    std::string where = "artifacts[" + std::to_string(i) + "]";
    if (!a.is_object() || !a.contains("id") || !a.contains("type")) {
      throw Error(ErrorKind::Format, where + ": expected {\"id\",\"type\",\"properties\"}");
    }
    std::string type = a["type"].get<std::string>();
    cs.changes.push_back(Change::create(a["id"].get<std::string>(), type,
                                        io_detail::initial_properties(schema.get(type),
                                                                      a.value("properties", json::object()), where)));
  }
  return cs;
}

inline json artifacts_to_json(const ArtifactGraph& g) {
  json out = json::array();
  for (const auto& id : g.ids()) {
    const Artifact& a = g.get(id);
    json props = json::object();
    for (std::size_t i = 0; i < a.type().properties.size(); ++i) {
      props[a.type().properties[i].name] = value_to_json(a.values()[i]);
    }
    out.push_back({{"id", id}, {"type", a.type_name()}, {"properties", std::move(props)}});
  }
  return out;
}

// ---- change log ----

struct ChangeRecord {
  std::int64_t sequence = 0;
  std::string timestamp;
  Change change;
  int line = 0;
};

/// Parses JSON Lines. `types` maps known artifact ids to type names and is
/// updated by creations and deletions so that values can be typed.
inline std::vector<ChangeRecord> parse_change_log(const std::string& text, const Schema& schema,
                                                  std::map<std::string, std::string> types = {}) {
  std::vector<ChangeRecord> out;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string where = "line " + std::to_string(n);
    json j = parse_json(line, where);
    try {
      if (!j.is_object()) throw Error(ErrorKind::Format, where + ": expected an object");
      ChangeRecord r;
      r.line = n;
      r.sequence = j.at("seq").get<std::int64_t>();
      r.timestamp = j.value("ts", std::string());
      std::string op = j.at("op").get<std::string>();
      std::string id = j.at("artifact").get<std::string>();
      if (op == "create") {
        std::string type = j.at("type").get<std::string>();
        r.change = Change::create(id, type, io_detail::initial_properties(schema.get(type), j.value("value", json()), where));
        types[id] = type;
      } else if (op == "delete") {
        r.change = Change::remove_artifact(id);
        types.erase(id);
      } else if (op == "set" || op == "add" || op == "remove") {
        std::string prop = j.at("property").get<std::string>();
        const json& v = j.contains("value") ? j["value"] : json();
        Value value;
        auto t = types.find(id);
        const PropertyDecl* decl = t == types.end() ? nullptr : schema.get(t->second).find(prop);
        if (!decl) {
          value = untyped_from_json(v);
        } else if (op == "set") {
          value = value_from_json(*decl, v, where);
        } else {
          if (!is_list_kind(decl->kind)) {
            throw Error(ErrorKind::TypeMismatch, where + ": " + prop + " is not a collection");
          }
          value = scalar_from_json(element_kind(decl->kind), v, where);
        }
        r.change = op == "set"   ? Change::set(id, prop, std::move(value))
                   : op == "add" ? Change::add(id, prop, std::move(value))
                                 : Change::remove(id, prop, std::move(value));
      } else {
        throw Error(ErrorKind::Format, where + ": unknown op '" + op + "'");
      }
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Format, where + ": " + e.what());
    }
  }
  return out;
}

inline json change_to_json(const ChangeRecord& r) {
  const Change& c = r.change;
  json j = {{"seq", r.sequence}, {"ts", r.timestamp}, {"artifact", c.artifact}};
  switch (c.op) {
    case ChangeOp::Create: {
      j["op"] = "create";
      j["type"] = c.type;
      json v = json::object();
      for (const auto& [k, x] : c.initial) v[k] = value_to_json(x);
      j["value"] = std::move(v);
      break;
    }
    case ChangeOp::Delete: j["op"] = "delete"; break;
    case ChangeOp::Set: j["op"] = "set"; break;
    case ChangeOp::Add: j["op"] = "add"; break;
    case ChangeOp::Remove: j["op"] = "remove"; break;
  }
  if (c.op == ChangeOp::Set || c.op == ChangeOp::Add || c.op == ChangeOp::Remove) {
    j["property"] = c.property;
    j["value"] = value_to_json(c.value);
  }
  return j;
}

/// One change set per record, or per run of records sharing a timestamp.
inline std::vector<ChangeSet> group_change_sets(const std::vector<ChangeRecord>& records, bool by_timestamp) {
  std::vector<ChangeSet> out;
  for (const auto& r : records) {
    if (by_timestamp && !out.empty() && !r.timestamp.empty() && out.back().timestamp == r.timestamp) {
      out.back().changes.push_back(r.change);
      continue;
    }
    out.push_back(ChangeSet{r.sequence, r.timestamp, {r.change}});
  }
  return out;
}

// ---- verdicts ----

inline json verdict_to_json(const Verdict& v) {
  json j = {{"seq", v.sequence},
            {"constraint", v.constraint},
            {"context", v.context},
            {"verdict", std::string(to_string(v.value))},
            {"terminated", v.terminated}};
  if (!v.errors.empty()) j["errors"] = v.errors;
  return j;
}

enum class VerdictFormat { Json, Text };

inline void write_verdict(std::ostream& os, const Verdict& v, VerdictFormat f) {
  if (f == VerdictFormat::Json) {
    os << verdict_to_json(v).dump() << '\n';
    return;
  }
  std::ostringstream line;
  line << std::left;
  line.width(8);
  line << v.sequence << ' ';
  line.width(32);
  line << v.constraint << ' ';
  line.width(16);
  line << v.context << ' ';
  line.width(6);
  line << to_string(v.value) << (v.terminated ? " terminated" : "");
  for (const auto& e : v.errors) line << "  ! " << e;
  os << line.str() << '\n';
}

}  // namespace tocl
