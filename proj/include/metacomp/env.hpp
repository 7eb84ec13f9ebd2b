#ifndef METACOMP_ENV_HPP
#define METACOMP_ENV_HPP

// The threaded environment: an immutable, namespaced, typed key-value store
// plus a counter-based random stream. Every component receives an
// Environment and hands back a new one; nothing is mutated in place.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "metacomp/errors.hpp"

namespace metacomp {

class EnvKey {
 public:
  EnvKey(std::string ns, std::string name) : ns_(std::move(ns)), name_(std::move(name)) {
    if (!valid_token(ns_) || !valid_token(name_)) {
      throw std::invalid_argument("invalid env key token: '" + ns_ + "." + name_ + "'");
    }
  }

  /// Parses the rendered "namespace.name" form.
  static EnvKey parse(std::string_view rendered) {
    auto dot = rendered.find('.');
    if (dot == std::string_view::npos) {
      throw std::invalid_argument("env key lacks a namespace: '" + std::string(rendered) + "'");
    }
    return EnvKey(std::string(rendered.substr(0, dot)), std::string(rendered.substr(dot + 1)));
  }

  const std::string& ns() const noexcept { return ns_; }
  const std::string& name() const noexcept { return name_; }
  std::string str() const { return ns_ + "." + name_; }

  static bool valid_token(std::string_view t) noexcept {
    return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) {
      return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    });
  }

  friend auto operator<=>(const EnvKey&, const EnvKey&) = default;
  friend bool operator==(const EnvKey&, const EnvKey&) = default;

 private:
  std::string ns_;
  std::string name_;
};

using RealSeq = std::vector<double>;
using IntSeq = std::vector<std::int64_t>;

/// 64-bit solution digests, e.g. a tabu list. Most recent last.
struct DigestSeq {
  std::vector<std::uint64_t> digests;
  friend bool operator==(const DigestSeq&, const DigestSeq&) = default;
};

/// A solution kept in the environment in its canonical JSON text form.
struct SerializedSolution {
  std::string text;
  friend bool operator==(const SerializedSolution&, const SerializedSolution&) = default;
};

using EnvValue = std::variant<std::int64_t, double, bool, std::string, RealSeq, IntSeq, DigestSeq,
                              SerializedSolution>;

/// Equality with reals compared by their 64-bit pattern.
inline bool bit_equal(const EnvValue& a, const EnvValue& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<double>(&a)) {
    return std::bit_cast<std::uint64_t>(*x) == std::bit_cast<std::uint64_t>(std::get<double>(b));
  }
  if (auto* x = std::get_if<RealSeq>(&a)) {
    const auto& y = std::get<RealSeq>(b);
    return std::equal(x->begin(), x->end(), y.begin(), y.end(), [](double p, double q) {
      return std::bit_cast<std::uint64_t>(p) == std::bit_cast<std::uint64_t>(q);
    });
  }
  return a == b;
}

struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;
  friend bool operator==(const RngState&, const RngState&) = default;
};

/// Records which keys were read and written through an Environment lineage.
/// Only used by test harnesses; invisible to equality and serialization.
class AccessLog {
 public:
  void record_read(const EnvKey& k) {
    std::lock_guard lock(mu_);
    reads_.insert(k);
  }
  void record_write(const EnvKey& k) {
    std::lock_guard lock(mu_);
    writes_.insert(k);
  }
  std::set<EnvKey> reads() const {
    std::lock_guard lock(mu_);
    return reads_;
  }
  std::set<EnvKey> writes() const {
    std::lock_guard lock(mu_);
    return writes_;
  }

 private:
  mutable std::mutex mu_;
  std::set<EnvKey> reads_;
  std::set<EnvKey> writes_;
};

class Environment {
 public:
  using Entries = std::map<EnvKey, EnvValue>;

  Environment() = default;
  Environment(Entries entries, RngState rng) : entries_(std::move(entries)), rng_(rng) {}

  static Environment seeded(std::uint64_t seed) { return Environment({}, RngState{seed, 0}); }

  std::optional<EnvValue> get(const EnvKey& key) const {
    if (log_) log_->record_read(key);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const EnvKey& key) const {
    if (log_) log_->record_read(key);
    return entries_.count(key) != 0;
  }

  Environment put(const EnvKey& key, EnvValue value) const& {
    Environment next(*this);
    return std::move(next).put(key, std::move(value));
  }

  Environment put(const EnvKey& key, EnvValue value) && {
    if (log_) log_->record_write(key);
    entries_.insert_or_assign(key, std::move(value));
    return std::move(*this);
  }

  Environment with_rng(RngState rng) const& {
    Environment next(*this);
    next.rng_ = rng;
    return next;
  }
  Environment with_rng(RngState rng) && {
    rng_ = rng;
    return std::move(*this);
  }

  /// Attach an access log to this lineage (propagates through put/with_rng).
  Environment observed_by(std::shared_ptr<AccessLog> log) const {
    Environment next(*this);
    next.log_ = std::move(log);
    return next;
  }

  const Entries& entries() const noexcept { return entries_; }
  const RngState& rng() const noexcept { return rng_; }

  friend bool operator==(const Environment& a, const Environment& b) {
    if (!(a.rng_ == b.rng_) || a.entries_.size() != b.entries_.size()) return false;
    return std::equal(a.entries_.begin(), a.entries_.end(), b.entries_.begin(),
                      [](const auto& x, const auto& y) {
                        return x.first == y.first && bit_equal(x.second, y.second);
                      });
  }

 private:
  Entries entries_;
  RngState rng_;
  std::shared_ptr<AccessLog> log_;
};

/// Typed read. Absent key yields nullopt; a present key of another type is
/// a configuration error.
template <class T>
std::optional<T> get_as(const Environment& env, const EnvKey& key) {
  auto v = env.get(key);
  if (!v) return std::nullopt;
  if (auto* p = std::get_if<T>(&*v)) return *p;
  throw ConfigurationError(key.str(), "environment key '" + key.str() + "' holds an unexpected type");
}

/// Typed read of a key that must be present.
template <class T>
T require_as(const Environment& env, const EnvKey& key, std::string_view who) {
  auto v = get_as<T>(env, key);
  if (!v) {
    throw ConfigurationError(key.str(), std::string(who) + " requires environment key '" + key.str() + "'");
  }
  return *v;
}

// ---------------------------------------------------------------------------
// Counter-based RNG. A draw is mix(mix(seed) + (counter+1) * golden), i.e. the
// SplitMix64 stream started from a scrambled seed, addressed by position.

namespace detail {
inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

constexpr std::uint64_t rng_word(std::uint64_t seed, std::uint64_t counter) noexcept {
  return detail::mix64(detail::mix64(seed) + (counter + 1) * detail::golden_gamma);
}

/// Raw 64-bit draw; advances the counter by one.
inline std::pair<std::uint64_t, Environment> rng_next(Environment env) {
  RngState s = env.rng();
  std::uint64_t w = rng_word(s.seed, s.counter);
  ++s.counter;
  return {w, std::move(env).with_rng(s)};
}

/// Uniform real in [0, 1) with 53 bits of resolution.
inline std::pair<double, Environment> rng_uniform(Environment env) {
  auto [w, next] = rng_next(std::move(env));
  return {static_cast<double>(w >> 11) * 0x1.0p-53, std::move(next)};
}

/// Unbiased integer in [0, n) by rejection over the full 64-bit word.
inline std::pair<std::uint64_t, Environment> rng_below(Environment env, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("rng_below: n must be positive");
  // Largest multiple of n that fits in 2^64; words at or above it are redrawn.
  const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
  for (;;) {
    auto [w, next] = rng_next(std::move(env));
    env = std::move(next);
    if (w < limit) return {w % n, std::move(env)};
  }
}

}  // namespace metacomp

#endif  // METACOMP_ENV_HPP
