#ifndef METACOMP_ENV_JSON_HPP
#define METACOMP_ENV_JSON_HPP

// Canonical wire form of an Environment:
//   {"rng":{"seed":"<u64>","counter":"<u64>"},
//    "entries":{"<ns.name>":{"t":"<tag>","v":<payload>}}}
// with tags int|real|bool|text|rseq|iseq|dseq|sol. u64 values (seed,
// counter, digests) travel as decimal strings.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <system_error>

#include "json.hpp"
#include "metacomp/env.hpp"
#include "metacomp/errors.hpp"

namespace metacomp {

using json = nlohmann::json;

namespace detail {

inline std::string u64_to_string(std::uint64_t v) { return std::to_string(v); }

inline std::uint64_t u64_from_json(const json& j, const char* what) {
  if (!j.is_string()) throw SerializationError(std::string(what) + ": expected a decimal string");
  const auto& s = j.get_ref<const std::string&>();
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) {
    throw SerializationError(std::string(what) + ": not a u64: '" + s + "'");
  }
  return v;
}

inline json real_to_json(double x) {
  if (!std::isfinite(x)) throw SerializationError("non-finite real cannot be serialized");
  return json(x);
}

inline double real_from_json(const json& j) {
  if (!j.is_number()) throw SerializationError("expected a number");
  return j.get<double>();
}

inline std::int64_t int_from_json(const json& j) {
  if (!j.is_number_integer()) throw SerializationError("expected an integer");
  return j.get<std::int64_t>();
}

}  // namespace detail

inline json to_json(const EnvValue& value) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          return {{"t", "int"}, {"v", v}};
        } else if constexpr (std::is_same_v<T, double>) {
          return {{"t", "real"}, {"v", detail::real_to_json(v)}};
        } else if constexpr (std::is_same_v<T, bool>) {
          return {{"t", "bool"}, {"v", v}};
        } else if constexpr (std::is_same_v<T, std::string>) {
          return {{"t", "text"}, {"v", v}};
        } else if constexpr (std::is_same_v<T, RealSeq>) {
          json arr = json::array();
          for (double x : v) arr.push_back(detail::real_to_json(x));
          return {{"t", "rseq"}, {"v", std::move(arr)}};
        } else if constexpr (std::is_same_v<T, IntSeq>) {
          return {{"t", "iseq"}, {"v", v}};
        } else if constexpr (std::is_same_v<T, DigestSeq>) {
          json arr = json::array();
          for (auto d : v.digests) arr.push_back(detail::u64_to_string(d));
          return {{"t", "dseq"}, {"v", std::move(arr)}};
        } else {
          static_assert(std::is_same_v<T, SerializedSolution>);
          return {{"t", "sol"}, {"v", v.text}};
        }
      },
      value);
}

inline EnvValue env_value_from_json(const json& j) {
  if (!j.is_object() || !j.contains("t") || !j.contains("v") || !j["t"].is_string()) {
    throw SerializationError("env value must be an object with 't' and 'v'");
  }
  const auto& tag = j["t"].get_ref<const std::string&>();
  const json& v = j["v"];
  if (tag == "int") return detail::int_from_json(v);
  if (tag == "real") return detail::real_from_json(v);
  if (tag == "bool") {
    if (!v.is_boolean()) throw SerializationError("bool payload expected");
    return v.get<bool>();
  }
  if (tag == "text") {
    if (!v.is_string()) throw SerializationError("text payload expected");
    return v.get<std::string>();
  }
  if (!v.is_array() && tag != "sol") throw SerializationError(tag + " payload must be an array");
  if (tag == "rseq") {
    RealSeq out;
    for (const auto& x : v) out.push_back(detail::real_from_json(x));
    return out;
  }
  if (tag == "iseq") {
    IntSeq out;
    for (const auto& x : v) out.push_back(detail::int_from_json(x));
    return out;
  }
  if (tag == "dseq") {
    DigestSeq out;
    for (const auto& x : v) out.digests.push_back(detail::u64_from_json(x, "digest"));
    return out;
  }
  if (tag == "sol") {
    if (!v.is_string()) throw SerializationError("sol payload expected");
    return SerializedSolution{v.get<std::string>()};
  }
  throw SerializationError("unknown env value tag '" + tag + "'");
}

inline json to_json(const Environment& env) {
  json entries = json::object();
  for (const auto& [k, v] : env.entries()) entries[k.str()] = to_json(v);
  return {{"rng",
           {{"seed", detail::u64_to_string(env.rng().seed)},
            {"counter", detail::u64_to_string(env.rng().counter)}}},
          {"entries", std::move(entries)}};
}

inline Environment environment_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rng") || !j.contains("entries")) {
    throw SerializationError("environment must have 'rng' and 'entries'");
  }
  const json& rng = j["rng"];
  if (!rng.is_object() || !rng.contains("seed") || !rng.contains("counter")) {
    throw SerializationError("rng must have 'seed' and 'counter'");
  }
  RngState state{detail::u64_from_json(rng["seed"], "rng.seed"),
                 detail::u64_from_json(rng["counter"], "rng.counter")};
  if (!j["entries"].is_object()) throw SerializationError("entries must be an object");
  Environment::Entries entries;
  for (const auto& [k, v] : j["entries"].items()) {
    try {
      entries.emplace(EnvKey::parse(k), env_value_from_json(v));
    } catch (const std::invalid_argument& e) {
      throw SerializationError(e.what());
    }
  }
  return Environment(std::move(entries), state);
}

inline std::string serialize_environment(const Environment& env) { return to_json(env).dump(); }

inline Environment deserialize_environment(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SerializationError(std::string("environment is not valid JSON: ") + e.what());
  }
  return environment_from_json(j);
}

}  // namespace metacomp

#endif  // METACOMP_ENV_JSON_HPP
