#ifndef METACOMP_DESCRIPTOR_HPP
#define METACOMP_DESCRIPTOR_HPP

// Machine-readable component declarations: parameters with bounds, plus the
// environment keys a component reads (requires) and writes (provides).
// Assembly derives the valid configuration space from these alone.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "metacomp/env.hpp"
#include "metacomp/env_json.hpp"
#include "metacomp/errors.hpp"

namespace metacomp {

enum class Kind { perturb, accept, terminate, evaluate, initializer };

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::perturb: return "perturb";
    case Kind::accept: return "accept";
    case Kind::terminate: return "terminate";
    case Kind::evaluate: return "evaluate";
    case Kind::initializer: return "initializer";
  }
  return "?";
}

inline Kind kind_from_string(const std::string& s) {
  for (Kind k : {Kind::perturb, Kind::accept, Kind::terminate, Kind::evaluate, Kind::initializer}) {
    if (s == to_string(k)) return k;
  }
  throw SerializationError("unknown component kind '" + s + "'");
}

using ParamValue = std::variant<std::int64_t, double>;
using ParamBindings = std::map<std::string, ParamValue>;

enum class ParamType { integer, real };

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::integer;
  ParamValue default_value = std::int64_t{0};
  std::optional<double> min;
  std::optional<double> max;

  friend bool operator==(const ParamSpec&, const ParamSpec&) = default;
};

struct ComponentDescriptor {
  std::string name;
  Kind kind = Kind::perturb;
  std::vector<ParamSpec> params;
  std::set<EnvKey> requires_keys;
  std::set<EnvKey> provides_keys;

  friend bool operator==(const ComponentDescriptor&, const ComponentDescriptor&) = default;
};

inline double as_double(const ParamValue& v) {
  return std::visit([](auto x) { return static_cast<double>(x); }, v);
}

inline json to_json(const ParamValue& v) {
  return std::visit([](auto x) { return json(x); }, v);
}

inline json to_json(const ParamSpec& p) {
  auto bound = [](const std::optional<double>& b) -> json {
    if (!b) return nullptr;
    if (*b == static_cast<double>(static_cast<std::int64_t>(*b))) return static_cast<std::int64_t>(*b);
    return *b;
  };
  return {{"name", p.name},
          {"type", p.type == ParamType::integer ? "int" : "real"},
          {"default", to_json(p.default_value)},
          {"min", bound(p.min)},
          {"max", bound(p.max)}};
}

inline json to_json(const ComponentDescriptor& d) {
  json params = json::array();
  for (const auto& p : d.params) params.push_back(to_json(p));
  json req = json::array();
  for (const auto& k : d.requires_keys) req.push_back(k.str());
  json prov = json::array();
  for (const auto& k : d.provides_keys) prov.push_back(k.str());
  return {{"name", d.name},
          {"kind", to_string(d.kind)},
          {"params", std::move(params)},
          {"requires", std::move(req)},
          {"provides", std::move(prov)}};
}

inline ParamValue param_value_from_json(const json& j, ParamType type, const std::string& where) {
  if (type == ParamType::integer) {
    if (!j.is_number_integer()) throw SerializationError(where + ": integer expected");
    return j.get<std::int64_t>();
  }
  if (!j.is_number()) throw SerializationError(where + ": number expected");
  return j.get<double>();
}

inline ComponentDescriptor descriptor_from_json(const json& j) {
  try {
    ComponentDescriptor d;
    d.name = j.at("name").get<std::string>();
    d.kind = kind_from_string(j.at("kind").get<std::string>());
    for (const auto& p : j.at("params")) {
      ParamSpec spec;
      spec.name = p.at("name").get<std::string>();
      const auto type = p.at("type").get<std::string>();
      if (type == "int") {
        spec.type = ParamType::integer;
      } else if (type == "real") {
        spec.type = ParamType::real;
      } else {
        throw SerializationError("param '" + spec.name + "': unknown type '" + type + "'");
      }
      spec.default_value = param_value_from_json(p.at("default"), spec.type, d.name + "." + spec.name);
      if (p.contains("min") && !p["min"].is_null()) spec.min = p["min"].get<double>();
      if (p.contains("max") && !p["max"].is_null()) spec.max = p["max"].get<double>();
      d.params.push_back(std::move(spec));
    }
    for (const auto& k : j.at("requires")) d.requires_keys.insert(EnvKey::parse(k.get<std::string>()));
    for (const auto& k : j.at("provides")) d.provides_keys.insert(EnvKey::parse(k.get<std::string>()));
    return d;
  } catch (const json::exception& e) {
    throw SerializationError(std::string("malformed descriptor: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SerializationError(std::string("malformed descriptor: ") + e.what());
  }
}

inline json to_json(const ParamBindings& b) {
  json out = json::object();
  for (const auto& [k, v] : b) out[k] = to_json(v);
  return out;
}

/// Reads bindings against a descriptor so ints stay ints and reals stay reals.
inline ParamBindings bindings_from_json(const json& j, const ComponentDescriptor& d) {
  if (!j.is_object()) throw SerializationError("params must be an object");
  ParamBindings out;
  for (const auto& [k, v] : j.items()) {
    auto it = std::find_if(d.params.begin(), d.params.end(), [&](const ParamSpec& p) { return p.name == k; });
    if (it == d.params.end()) throw SerializationError(d.name + ": unknown parameter '" + k + "'");
    out[k] = param_value_from_json(v, it->type, d.name + "." + k);
  }
  return out;
}

/// Problems found when binding parameters; empty means the bindings are usable.
inline std::vector<std::string> check_bindings(const ComponentDescriptor& d, const ParamBindings& b) {
  std::vector<std::string> problems;
  for (const auto& [name, value] : b) {
    auto it = std::find_if(d.params.begin(), d.params.end(), [&](const ParamSpec& p) { return p.name == name; });
    if (it == d.params.end()) {
      problems.push_back(d.name + ": unknown parameter '" + name + "'");
      continue;
    }
    if (it->type == ParamType::integer && !std::holds_alternative<std::int64_t>(value)) {
      problems.push_back(d.name + "." + name + ": integer expected");
      continue;
    }
    const double x = as_double(value);
    if ((it->min && x < *it->min) || (it->max && x > *it->max)) {
      problems.push_back(d.name + "." + name + ": value out of bounds");
    }
  }
  return problems;
}

/// Defaults filled in for every parameter the bindings leave out.
inline ParamBindings with_defaults(const ComponentDescriptor& d, ParamBindings b) {
  for (const auto& p : d.params) b.try_emplace(p.name, p.default_value);
  return b;
}

inline std::int64_t param_int(const ParamBindings& b, const std::string& name) {
  auto it = b.find(name);
  if (it == b.end()) throw ConfigurationError(name, "missing parameter '" + name + "'");
  if (auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
  throw ConfigurationError(name, "parameter '" + name + "' must be an integer");
}

inline double param_real(const ParamBindings& b, const std::string& name) {
  auto it = b.find(name);
  if (it == b.end()) throw ConfigurationError(name, "missing parameter '" + name + "'");
  return as_double(it->second);
}

}  // namespace metacomp

#endif  // METACOMP_DESCRIPTOR_HPP
