#ifndef METACOMP_SOLUTION_HPP
#define METACOMP_SOLUTION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "metacomp/env_json.hpp"
#include "metacomp/errors.hpp"

namespace metacomp {

struct BitVector {
  std::vector<std::uint8_t> bits;

  BitVector() = default;
  explicit BitVector(std::vector<std::uint8_t> b) : bits(std::move(b)) {}
  /// From a "0101" literal.
  static BitVector from_string(std::string_view s) {
    BitVector out;
    out.bits.reserve(s.size());
    for (char c : s) {
      if (c != '0' && c != '1') throw SerializationError("bit string may only contain 0 and 1");
      out.bits.push_back(c == '1' ? 1 : 0);
    }
    return out;
  }
  std::string str() const {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
  }
  std::size_t size() const noexcept { return bits.size(); }
  friend bool operator==(const BitVector&, const BitVector&) = default;
};

struct Permutation {
  std::vector<std::int64_t> order;

  Permutation() = default;
  explicit Permutation(std::vector<std::int64_t> o) : order(std::move(o)) {}
  static Permutation identity(std::size_t n) {
    Permutation p;
    p.order.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.order[i] = static_cast<std::int64_t>(i);
    return p;
  }
  bool valid() const {
    std::vector<bool> seen(order.size(), false);
    for (auto v : order) {
      if (v < 0 || static_cast<std::size_t>(v) >= order.size() || seen[static_cast<std::size_t>(v)]) return false;
      seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
  }
  std::size_t size() const noexcept { return order.size(); }
  friend bool operator==(const Permutation&, const Permutation&) = default;
};

struct RealVector {
  std::vector<double> coords;

  RealVector() = default;
  explicit RealVector(std::vector<double> c) : coords(std::move(c)) {}
  std::size_t size() const noexcept { return coords.size(); }
  friend bool operator==(const RealVector&, const RealVector&) = default;
};

using Solution = std::variant<BitVector, Permutation, RealVector>;

enum class Representation { bits, perm, real };

inline Representation representation_of(const Solution& s) {
  return static_cast<Representation>(s.index());
}

inline const char* to_string(Representation r) {
  switch (r) {
    case Representation::bits: return "bits";
    case Representation::perm: return "perm";
    case Representation::real: return "real";
  }
  return "?";
}

inline Representation representation_from_string(std::string_view s) {
  if (s == "bits") return Representation::bits;
  if (s == "perm") return Representation::perm;
  if (s == "real") return Representation::real;
  throw SerializationError("unknown representation tag '" + std::string(s) + "'");
}

/// Fetches the expected alternative or throws a ComponentError naming `who`.
template <class T>
const T& expect_representation(const Solution& s, std::string_view who) {
  if (auto* p = std::get_if<T>(&s)) return *p;
  constexpr auto wanted = std::is_same_v<T, BitVector> ? "bits" : std::is_same_v<T, Permutation> ? "perm" : "real";
  throw ComponentError(std::string(who), std::string("expected a ") + wanted + " solution, got " +
                                             to_string(representation_of(s)));
}

inline json to_json(const Solution& sol) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BitVector>) {
          return {{"t", "bits"}, {"v", s.str()}};
        } else if constexpr (std::is_same_v<T, Permutation>) {
          return {{"t", "perm"}, {"v", s.order}};
        } else {
          json arr = json::array();
          for (double x : s.coords) arr.push_back(detail::real_to_json(x));
          return {{"t", "real"}, {"v", std::move(arr)}};
        }
      },
      sol);
}

inline Solution solution_from_json(const json& j) {
  if (!j.is_object() || !j.contains("t") || !j.contains("v") || !j["t"].is_string()) {
    throw SerializationError("solution must be an object with 't' and 'v'");
  }
  const auto rep = representation_from_string(j["t"].get<std::string>());
  const json& v = j["v"];
  switch (rep) {
    case Representation::bits: {
      if (!v.is_string()) throw SerializationError("bits payload must be a string");
      auto b = BitVector::from_string(v.get<std::string>());
      if (b.size() == 0) throw SerializationError("bit vector must be nonempty");
      return b;
    }
    case Representation::perm: {
      if (!v.is_array()) throw SerializationError("perm payload must be an array");
      Permutation p;
      for (const auto& x : v) p.order.push_back(detail::int_from_json(x));
      if (!p.valid()) throw SerializationError("perm payload is not a permutation of 0..n-1");
      return p;
    }
    case Representation::real: {
      if (!v.is_array()) throw SerializationError("real payload must be an array");
      RealVector r;
      for (const auto& x : v) r.coords.push_back(detail::real_from_json(x));
      return r;
    }
  }
  throw SerializationError("unreachable representation");
}

inline std::string serialize_solution(const Solution& sol) { return to_json(sol).dump(); }

/// Parses and validates; when `expected` is given the tag must match it.
inline Solution deserialize_solution(const std::string& text, std::optional<Representation> expected = {}) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SerializationError(std::string("solution is not valid JSON: ") + e.what());
  }
  Solution s = solution_from_json(j);
  if (expected && representation_of(s) != *expected) {
    throw SerializationError(std::string("expected a ") + to_string(*expected) + " solution");
  }
  return s;
}

constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Stable 64-bit identity of a solution: FNV-1a over its canonical text.
inline std::uint64_t digest(const Solution& sol) { return fnv1a64(serialize_solution(sol)); }

}  // namespace metacomp

#endif  // METACOMP_SOLUTION_HPP
