#ifndef METACOMP_COMPONENTS_HPP
#define METACOMP_COMPONENTS_HPP

// The built-in component palette: perturbations, acceptance criteria,
// termination conditions and environment initializers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "metacomp/component.hpp"
#include "metacomp/keys.hpp"

namespace metacomp {

/// Draws from the environment's random stream while keeping track of the
/// advanced environment. Hand the environment back with `release()`.
class RngCursor {
 public:
  explicit RngCursor(Environment env) : env_(std::move(env)) {}

  std::uint64_t below(std::uint64_t n) {
    auto [v, next] = rng_below(std::move(env_), n);
    env_ = std::move(next);
    return v;
  }
  double uniform() {
    auto [v, next] = rng_uniform(std::move(env_));
    env_ = std::move(next);
    return v;
  }
  const Environment& env() const noexcept { return env_; }
  Environment release() && { return std::move(env_); }

 private:
  Environment env_;
};

// ---------------------------------------------------------------------------
// Pure move kernels. `below(n)` must return an integer in [0, n).

/// Flips `k` distinct positions, redrawing any index already chosen.
template <class Below>
BitVector flip_distinct(BitVector v, std::size_t k, Below&& below) {
  const auto n = v.size();
  std::vector<bool> chosen(n, false);
  for (std::size_t flipped = 0; flipped < k;) {
    const auto i = static_cast<std::size_t>(below(n));
    if (chosen[i]) continue;
    chosen[i] = true;
    v.bits[i] ^= 1;
    ++flipped;
  }
  return v;
}

/// Two distinct positions: the second draw skips over the first.
template <class Below>
std::pair<std::size_t, std::size_t> distinct_pair(std::size_t n, Below&& below) {
  const auto i = static_cast<std::size_t>(below(n));
  auto j = static_cast<std::size_t>(below(n - 1));
  if (j >= i) ++j;
  return {i, j};
}

/// Reverses the inclusive segment [i, j].
inline Permutation two_opt_at(Permutation p, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  std::reverse(p.order.begin() + static_cast<std::ptrdiff_t>(i), p.order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
  return p;
}

/// Box–Muller pair from two uniforms in [0,1). Uses 1-u1 so the log
/// argument lies in (0,1].
inline std::pair<double, double> box_muller(double u1, double u2) {
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

// ---------------------------------------------------------------------------
// Perturbations

inline Perturb perturb_bitflip(std::int64_t k) {
  if (k < 1) throw std::invalid_argument("bitflip: k must be positive");
  ComponentDescriptor d{"bitflip", Kind::perturb, {{"k", ParamType::integer, std::int64_t{1}, 1.0, std::nullopt}}, {}, {}};
  return Perturb(std::move(d), [k](const Solution& s, Environment env) {
    const auto& bits = expect_representation<BitVector>(s, "bitflip");
    if (static_cast<std::size_t>(k) > bits.size()) {
      throw ComponentError("bitflip", "k exceeds the bit vector length");
    }
    RngCursor rng(std::move(env));
    auto out = flip_distinct(bits, static_cast<std::size_t>(k), [&](std::uint64_t n) { return rng.below(n); });
    return Threaded<Solution>{std::move(out), std::move(rng).release()};
  });
}

inline Perturb perturb_swap() {
  return Perturb({"swap", Kind::perturb, {}, {}, {}}, [](const Solution& s, Environment env) {
    auto p = expect_representation<Permutation>(s, "swap");
    if (p.size() < 2) throw ComponentError("swap", "needs at least two positions");
    RngCursor rng(std::move(env));
    auto [i, j] = distinct_pair(p.size(), [&](std::uint64_t n) { return rng.below(n); });
    std::swap(p.order[i], p.order[j]);
    return Threaded<Solution>{std::move(p), std::move(rng).release()};
  });
}

inline Perturb perturb_two_opt() {
  return Perturb({"two_opt", Kind::perturb, {}, {}, {}}, [](const Solution& s, Environment env) {
    const auto& p = expect_representation<Permutation>(s, "two_opt");
    if (p.size() < 2) throw ComponentError("two_opt", "needs at least two positions");
    RngCursor rng(std::move(env));
    auto [i, j] = distinct_pair(p.size(), [&](std::uint64_t n) { return rng.below(n); });
    return Threaded<Solution>{two_opt_at(p, i, j), std::move(rng).release()};
  });
}

/// Adds N(0, sigma^2) noise per coordinate, clamped to problem.bounds
/// ([lo, hi]) when the environment carries it.
inline Perturb perturb_gaussian(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian: sigma must be positive");
  ComponentDescriptor d{"gaussian", Kind::perturb, {{"sigma", ParamType::real, 0.1, 1e-9, std::nullopt}}, {}, {}};
  return Perturb(std::move(d), [sigma](const Solution& s, Environment env) {
    auto x = expect_representation<RealVector>(s, "gaussian");
    auto bounds = get_as<RealSeq>(env, keys::problem_bounds);
    if (bounds && bounds->size() != 2) throw ComponentError("gaussian", "problem.bounds must hold [lo, hi]");
    RngCursor rng(std::move(env));
    for (std::size_t i = 0; i < x.size(); i += 2) {
      const double u1 = rng.uniform();
      const double u2 = rng.uniform();
      auto [z0, z1] = box_muller(u1, u2);
      x.coords[i] += sigma * z0;
      if (i + 1 < x.size()) x.coords[i + 1] += sigma * z1;
    }
    if (bounds) {
      for (auto& c : x.coords) c = std::clamp(c, (*bounds)[0], (*bounds)[1]);
    }
    return Threaded<Solution>{std::move(x), std::move(rng).release()};
  });
}

// ---------------------------------------------------------------------------
// Acceptance. The framework publishes both objective values before calling.

namespace detail {
inline std::pair<double, double> published_values(const Environment& env, std::string_view who) {
  return {require_as<double>(env, keys::incumbent_value, who), require_as<double>(env, keys::incoming_value, who)};
}
}  // namespace detail

/// Accepts the incoming solution unless it is strictly worse.
template <class Sol = Solution>
AcceptC<Sol> accept_improving() {
  ComponentDescriptor d{"improving", Kind::accept, {}, {keys::incumbent_value, keys::incoming_value}, {}};
  return AcceptC<Sol>(std::move(d), [](const Candidates<Sol>& c, Environment env) {
    auto [incumbent, incoming] = detail::published_values(env, "improving");
    return Threaded<Sol>{incoming <= incumbent ? c.incoming : c.incumbent, std::move(env)};
  });
}

/// Random walk: always takes the incoming solution.
template <class Sol = Solution>
AcceptC<Sol> accept_always() {
  return AcceptC<Sol>({"always", Kind::accept, {}, {}, {}}, [](const Candidates<Sol>& c, Environment env) {
    return Threaded<Sol>{c.incoming, std::move(env)};
  });
}

/// Metropolis rule for a minimization step of size `delta` given the
/// uniform draw `u`.
inline bool metropolis_accepts(double delta, double temperature, double u) {
  return delta <= 0.0 || (temperature > 0.0 && u < std::exp(-delta / temperature));
}

/// Metropolis criterion on sa.temperature, followed by geometric cooling.
/// Improving moves and zero temperature consume no randomness.
template <class Sol = Solution>
AcceptC<Sol> accept_metropolis(double cooling) {
  if (!(cooling > 0.0 && cooling <= 1.0)) throw std::invalid_argument("metropolis: cooling must lie in (0, 1]");
  ComponentDescriptor d{"metropolis",
                        Kind::accept,
                        {{"cooling", ParamType::real, 0.99, 1e-9, 1.0}},
                        {keys::incumbent_value, keys::incoming_value, keys::sa_temperature},
                        {keys::sa_temperature}};
  return AcceptC<Sol>(std::move(d), [cooling](const Candidates<Sol>& c, Environment env) {
    auto [incumbent, incoming] = detail::published_values(env, "metropolis");
    const double temperature = require_as<double>(env, keys::sa_temperature, "metropolis");
    const double delta = incoming - incumbent;
    bool take = false;
    if (delta <= 0.0) {
      take = true;
    } else if (temperature > 0.0) {
      auto [u, next] = rng_uniform(std::move(env));
      env = std::move(next);
      take = metropolis_accepts(delta, temperature, u);
    }
    env = std::move(env).put(keys::sa_temperature, temperature * cooling);
    return Threaded<Sol>{take ? c.incoming : c.incumbent, std::move(env)};
  });
}

/// Rejects any incoming solution whose digest is among the last `tenure`
/// accepted ones. Ignores objective values.
inline Accept accept_tabu(std::int64_t tenure) {
  if (tenure < 1) throw std::invalid_argument("tabu: tenure must be positive");
  ComponentDescriptor d{"tabu",
                        Kind::accept,
                        {{"tenure", ParamType::integer, std::int64_t{10}, 1.0, std::nullopt}},
                        {keys::tabu_list},
                        {keys::tabu_list}};
  return Accept(std::move(d), [tenure](const Candidates<Solution>& c, Environment env) {
    auto list = get_as<DigestSeq>(env, keys::tabu_list).value_or(DigestSeq{});
    const auto h = digest(c.incoming);
    if (std::find(list.digests.begin(), list.digests.end(), h) != list.digests.end()) {
      return Threaded<Solution>{c.incumbent, std::move(env)};
    }
    list.digests.push_back(h);
    const auto cap = static_cast<std::size_t>(tenure);
    if (list.digests.size() > cap) {
      list.digests.erase(list.digests.begin(), list.digests.end() - static_cast<std::ptrdiff_t>(cap));
    }
    env = std::move(env).put(keys::tabu_list, std::move(list));
    return Threaded<Solution>{c.incoming, std::move(env)};
  });
}

// ---------------------------------------------------------------------------
// Termination

template <class Sol = Solution>
TerminateC<Sol> terminate_iterations(std::int64_t max) {
  if (max < 0) throw std::invalid_argument("iterations: max must be nonnegative");
  ComponentDescriptor d{"iterations", Kind::terminate, {{"max", ParamType::integer, std::int64_t{1000}, 0.0, std::nullopt}}, {keys::iteration}, {}};
  return TerminateC<Sol>(std::move(d), [max](const Sol&, Environment env) {
    const bool done = require_as<std::int64_t>(env, keys::iteration, "iterations") >= max;
    return Threaded<bool>{done, std::move(env)};
  });
}

template <class Sol = Solution>
TerminateC<Sol> terminate_evaluations(std::int64_t max) {
  if (max < 0) throw std::invalid_argument("evaluations: max must be nonnegative");
  ComponentDescriptor d{"evaluations", Kind::terminate, {{"max", ParamType::integer, std::int64_t{1000}, 0.0, std::nullopt}}, {keys::evaluations}, {}};
  return TerminateC<Sol>(std::move(d), [max](const Sol&, Environment env) {
    const bool done = require_as<std::int64_t>(env, keys::evaluations, "evaluations") >= max;
    return Threaded<bool>{done, std::move(env)};
  });
}

template <class Sol = Solution>
TerminateC<Sol> terminate_target(double target) {
  ComponentDescriptor d{"target", Kind::terminate, {{"value", ParamType::real, 0.0, std::nullopt, std::nullopt}}, {keys::best_value}, {}};
  return TerminateC<Sol>(std::move(d), [target](const Sol&, Environment env) {
    const bool done = require_as<double>(env, keys::best_value, "target") <= target;
    return Threaded<bool>{done, std::move(env)};
  });
}

/// True as soon as either condition holds. Both are always consulted so the
/// environment lineage does not depend on short-circuiting.
template <class Sol = Solution>
TerminateC<Sol> terminate_any(TerminateC<Sol> a, TerminateC<Sol> b) {
  ComponentDescriptor d = a.descriptor();
  d.name = a.descriptor().name + "|" + b.descriptor().name;
  d.params.clear();
  d.requires_keys.insert(b.descriptor().requires_keys.begin(), b.descriptor().requires_keys.end());
  d.provides_keys.insert(b.descriptor().provides_keys.begin(), b.descriptor().provides_keys.end());
  return TerminateC<Sol>(std::move(d), [a = std::move(a), b = std::move(b)](const Sol& s, Environment env) {
    auto first = a(s, std::move(env));
    auto second = b(s, std::move(first.env));
    return Threaded<bool>{first.value || second.value, std::move(second.env)};
  });
}

// ---------------------------------------------------------------------------
// Initializers

/// Writes fixed entries into the environment.
inline InitializerC initializer(std::string name, std::vector<std::pair<EnvKey, EnvValue>> entries) {
  ComponentDescriptor d{std::move(name), Kind::initializer, {}, {}, {}};
  for (const auto& [k, v] : entries) d.provides_keys.insert(k);
  return InitializerC(std::move(d), [entries = std::move(entries)](const std::monostate&, Environment env) {
    for (const auto& [k, v] : entries) env = std::move(env).put(k, v);
    return Threaded<std::monostate>{{}, std::move(env)};
  });
}

}  // namespace metacomp

#endif  // METACOMP_COMPONENTS_HPP
