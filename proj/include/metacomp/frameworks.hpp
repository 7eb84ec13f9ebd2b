#ifndef METACOMP_FRAMEWORKS_HPP
#define METACOMP_FRAMEWORKS_HPP

// Algorithm templates as higher-order functions over components. Each
// template threads a single Environment through every component call, in a
// fixed order, and maintains the framework.* counters.

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "metacomp/components.hpp"
#include "metacomp/keys.hpp"

namespace metacomp {

struct TraceRow {
  std::int64_t iteration = 0;
  std::int64_t evaluations = 0;
  double best_value = 0.0;
  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

template <class Sol>
struct RunResult {
  Sol best;
  double best_value = 0.0;
  Environment final_env;
  std::vector<TraceRow> trace;
  std::int64_t iterations = 0;
  std::int64_t evaluations = 0;
  Sol incumbent{};  // where the search ended; may differ from best
};

/// Slots and environment contract of a framework template.
struct FrameworkDescriptor {
  std::string name;
  std::vector<std::pair<std::string, Kind>> slots;
  std::set<EnvKey> provides_keys;
  std::set<EnvKey> requires_keys;
};

inline const FrameworkDescriptor& local_search_descriptor() {
  static const FrameworkDescriptor d{
      "local_search",
      {{"perturb", Kind::perturb}, {"accept", Kind::accept}, {"terminate", Kind::terminate}},
      {keys::iteration, keys::evaluations, keys::incumbent_value, keys::incoming_value, keys::best_value},
      {}};
  return d;
}

inline const FrameworkDescriptor& ils_descriptor() {
  static const FrameworkDescriptor d{"ils",
                                     {{"kick", Kind::perturb},
                                      {"perturb", Kind::perturb},
                                      {"accept", Kind::accept},
                                      {"inner_terminate", Kind::terminate},
                                      {"outer_accept", Kind::accept},
                                      {"terminate", Kind::terminate}},
                                     local_search_descriptor().provides_keys,
                                     {}};
  return d;
}

inline const FrameworkDescriptor& ga_descriptor() {
  static const FrameworkDescriptor d{"ga",
                                     {{"mutate", Kind::perturb}, {"terminate", Kind::terminate}},
                                     {keys::iteration, keys::evaluations, keys::best_value},
                                     {keys::ga_pop_size, keys::ga_tournament_size}};
  return d;
}

inline const FrameworkDescriptor& framework_descriptor(const std::string& name) {
  if (name == "local_search") return local_search_descriptor();
  if (name == "ils") return ils_descriptor();
  if (name == "ga") return ga_descriptor();
  throw UnknownComponentError("unknown framework '" + name + "'");
}

namespace detail {

inline Environment publish_counters(Environment env, std::int64_t iteration, std::int64_t evaluations, double best) {
  env = std::move(env).put(keys::iteration, iteration);
  env = std::move(env).put(keys::evaluations, evaluations);
  return std::move(env).put(keys::best_value, best);
}

inline Environment publish_values(Environment env, double incumbent, double incoming) {
  env = std::move(env).put(keys::incumbent_value, incumbent);
  return std::move(env).put(keys::incoming_value, incoming);
}

}  // namespace detail

/// Local search: while not finished(incumbent), incumbent =
/// accept(incumbent, perturb(incumbent)). The termination check happens
/// before each move. Best-so-far over every evaluated solution is returned.
template <class Sol>
RunResult<Sol> local_search(Sol incumbent, const EvaluateC<Sol>& evaluate, const PerturbC<Sol>& perturb,
                            const AcceptC<Sol>& accept, const TerminateC<Sol>& terminate, Environment env) {
  auto first = evaluate(incumbent, std::move(env));
  env = std::move(first.env);
  double incumbent_value = first.value;
  std::int64_t iteration = 0;
  std::int64_t evaluations = 1;
  RunResult<Sol> result{incumbent, incumbent_value, {}, {}, 0, 0, {}};
  env = detail::publish_counters(std::move(env), iteration, evaluations, result.best_value);

  for (;;) {
    auto done = terminate(incumbent, std::move(env));
    env = std::move(done.env);
    if (done.value) break;

    auto moved = perturb(incumbent, std::move(env));
    ++iteration;
    auto scored = evaluate(moved.value, std::move(moved.env));
    ++evaluations;
    const double incoming_value = scored.value;
    env = detail::publish_values(std::move(scored.env), incumbent_value, incoming_value);

    auto chosen = accept(Candidates<Sol>{incumbent, moved.value}, std::move(env));
    env = std::move(chosen.env);
    const bool took_incoming = !(chosen.value == incumbent);
    incumbent = std::move(chosen.value);
    if (took_incoming) incumbent_value = incoming_value;

    if (incoming_value < result.best_value) {
      result.best = moved.value;
      result.best_value = incoming_value;
    }
    env = detail::publish_counters(std::move(env), iteration, evaluations, result.best_value);
    result.trace.push_back({iteration, evaluations, result.best_value});
  }
  result.final_env = std::move(env);
  result.iterations = iteration;
  result.evaluations = evaluations;
  result.incumbent = std::move(incumbent);
  return result;
}

/// Local search components used for each descent inside ILS.
template <class Sol>
struct LocalSearchParts {
  PerturbC<Sol> perturb;
  AcceptC<Sol> accept;
  TerminateC<Sol> terminate;
};

/// Iterated local search: candidate = descend(kick(current));
/// current = outer_accept(current, candidate). Each descent runs on the same
/// environment lineage; the outer framework.* counters are restored after it.
template <class Sol>
RunResult<Sol> iterated_local_search(Sol start, const EvaluateC<Sol>& evaluate, const PerturbC<Sol>& kick,
                                     const LocalSearchParts<Sol>& inner, const AcceptC<Sol>& outer_accept,
                                     const TerminateC<Sol>& terminate, Environment env) {
  auto first = evaluate(start, std::move(env));
  env = std::move(first.env);
  Sol current = std::move(start);
  double current_value = first.value;
  std::int64_t iteration = 0;
  std::int64_t evaluations = 1;
  RunResult<Sol> result{current, current_value, {}, {}, 0, 0, {}};
  env = detail::publish_counters(std::move(env), iteration, evaluations, result.best_value);

  for (;;) {
    auto done = terminate(current, std::move(env));
    env = std::move(done.env);
    if (done.value) break;

    auto kicked = kick(current, std::move(env));
    ++iteration;
    auto descent = local_search(kicked.value, evaluate, inner.perturb, inner.accept, inner.terminate,
                                std::move(kicked.env));
    evaluations += descent.evaluations;
    env = detail::publish_values(std::move(descent.final_env), current_value, descent.best_value);
    env = detail::publish_counters(std::move(env), iteration, evaluations, result.best_value);

    auto chosen = outer_accept(Candidates<Sol>{current, descent.best}, std::move(env));
    env = std::move(chosen.env);
    if (!(chosen.value == current)) current_value = descent.best_value;
    current = std::move(chosen.value);

    if (descent.best_value < result.best_value) {
      result.best = descent.best;
      result.best_value = descent.best_value;
    }
    env = detail::publish_counters(std::move(env), iteration, evaluations, result.best_value);
    result.trace.push_back({iteration, evaluations, result.best_value});
  }
  result.final_env = std::move(env);
  result.iterations = iteration;
  result.evaluations = evaluations;
  result.incumbent = std::move(current);
  return result;
}

// ---------------------------------------------------------------------------
// Genetic algorithm

template <class Sol>
using SamplerC = Component<std::monostate, Sol>;
template <class Sol>
using CrossoverC = Component<std::pair<Sol, Sol>, std::pair<Sol, Sol>>;

class GaSettings {
 public:
  GaSettings(std::int64_t pop_size, std::int64_t tournament_size)
      : pop_size_(pop_size), tournament_size_(tournament_size) {
    if (pop_size < 2 || pop_size % 2 != 0) throw std::invalid_argument("ga: pop_size must be even and positive");
    if (tournament_size < 1 || tournament_size > pop_size) {
      throw std::invalid_argument("ga: tournament size must lie in [1, pop_size]");
    }
  }
  std::size_t pop_size() const noexcept { return static_cast<std::size_t>(pop_size_); }
  std::size_t tournament_size() const noexcept { return static_cast<std::size_t>(tournament_size_); }

 private:
  std::int64_t pop_size_;
  std::int64_t tournament_size_;
};

/// Tournament over `t` distinct members (partial Fisher–Yates over indices).
/// Lowest value wins; ties go to the member drawn first.
template <class Below>
std::size_t tournament_pick(const std::vector<double>& values, std::size_t t, Below&& below) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::size_t winner = 0;
  for (std::size_t i = 0; i < t; ++i) {
    const auto j = i + static_cast<std::size_t>(below(values.size() - i));
    std::swap(idx[i], idx[j]);
    if (i == 0 || values[idx[i]] < values[winner]) winner = idx[i];
  }
  return winner;
}

/// Generational GA with elitism of one: the best parent replaces the worst
/// child (last one on ties).
template <class Sol>
RunResult<Sol> genetic_algorithm(const GaSettings& settings, const SamplerC<Sol>& init, const EvaluateC<Sol>& evaluate,
                                 const CrossoverC<Sol>& crossover, const PerturbC<Sol>& mutate,
                                 const TerminateC<Sol>& terminate, Environment env) {
  const auto pop_size = settings.pop_size();
  std::vector<Sol> pop;
  std::vector<double> values;
  pop.reserve(pop_size);
  values.reserve(pop_size);
  std::int64_t evaluations = 0;
  for (std::size_t i = 0; i < pop_size; ++i) {
    auto sampled = init(std::monostate{}, std::move(env));
    auto scored = evaluate(sampled.value, std::move(sampled.env));
    env = std::move(scored.env);
    ++evaluations;
    pop.push_back(std::move(sampled.value));
    values.push_back(scored.value);
  }
  auto argmin = [](const std::vector<double>& v) {
    return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
  };
  std::size_t elite = argmin(values);
  RunResult<Sol> result{pop[elite], values[elite], {}, {}, 0, 0, {}};
  std::int64_t generation = 0;
  env = detail::publish_counters(std::move(env), generation, evaluations, result.best_value);

  for (;;) {
    auto done = terminate(result.best, std::move(env));
    env = std::move(done.env);
    if (done.value) break;
    ++generation;

    RngCursor rng(std::move(env));
    auto below = [&](std::uint64_t n) { return rng.below(n); };
    std::vector<Sol> children;
    children.reserve(pop_size);
    for (std::size_t pair = 0; pair < pop_size / 2; ++pair) {
      const auto a = tournament_pick(values, settings.tournament_size(), below);
      const auto b = tournament_pick(values, settings.tournament_size(), below);
      auto crossed = crossover(std::pair<Sol, Sol>{pop[a], pop[b]}, std::move(rng).release());
      auto m1 = mutate(crossed.value.first, std::move(crossed.env));
      auto m2 = mutate(crossed.value.second, std::move(m1.env));
      rng = RngCursor(std::move(m2.env));
      children.push_back(std::move(m1.value));
      children.push_back(std::move(m2.value));
    }
    env = std::move(rng).release();

    std::vector<double> child_values;
    child_values.reserve(pop_size);
    for (const auto& child : children) {
      auto scored = evaluate(child, std::move(env));
      env = std::move(scored.env);
      ++evaluations;
      child_values.push_back(scored.value);
      if (scored.value < result.best_value) {
        result.best = child;
        result.best_value = scored.value;
      }
    }
    std::size_t worst = 0;
    for (std::size_t i = 1; i < child_values.size(); ++i) {
      if (child_values[i] >= child_values[worst]) worst = i;
    }
    children[worst] = pop[elite];
    child_values[worst] = values[elite];
    pop = std::move(children);
    values = std::move(child_values);
    elite = argmin(values);

    env = detail::publish_counters(std::move(env), generation, evaluations, result.best_value);
    result.trace.push_back({generation, evaluations, result.best_value});
  }
  result.final_env = std::move(env);
  result.iterations = generation;
  result.evaluations = evaluations;
  result.incumbent = pop[elite];
  return result;
}

// ---------------------------------------------------------------------------
// Crossover kernels

/// Children take a[0:cut]+b[cut:] and b[0:cut]+a[cut:].
inline std::pair<BitVector, BitVector> one_point_at(const BitVector& a, const BitVector& b, std::size_t cut) {
  BitVector c1 = a;
  BitVector c2 = b;
  for (std::size_t i = cut; i < a.size(); ++i) {
    c1.bits[i] = b.bits[i];
    c2.bits[i] = a.bits[i];
  }
  return {std::move(c1), std::move(c2)};
}

/// Order-1 crossover: the child keeps keep[i..j] in place and fills the
/// remaining positions, starting after j and wrapping, with `fill`'s
/// elements in their order from position j+1, skipping ones already kept.
inline Permutation order_one_at(const Permutation& keep, const Permutation& fill, std::size_t i, std::size_t j) {
  const auto n = keep.size();
  if (i > j) std::swap(i, j);
  Permutation child;
  child.order.assign(n, -1);
  std::vector<bool> used(n, false);
  for (std::size_t p = i; p <= j; ++p) {
    child.order[p] = keep.order[p];
    used[static_cast<std::size_t>(keep.order[p])] = true;
  }
  std::size_t write = (j + 1) % n;
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = fill.order[(j + 1 + k) % n];
    if (used[static_cast<std::size_t>(v)]) continue;
    child.order[write] = v;
    used[static_cast<std::size_t>(v)] = true;
    write = (write + 1) % n;
  }
  return child;
}

inline CrossoverC<Solution> crossover_one_point() {
  return CrossoverC<Solution>(
      {"one_point", Kind::perturb, {}, {}, {}}, [](const std::pair<Solution, Solution>& parents, Environment env) {
        const auto& a = expect_representation<BitVector>(parents.first, "one_point");
        const auto& b = expect_representation<BitVector>(parents.second, "one_point");
        if (a.size() != b.size()) throw ComponentError("one_point", "parents differ in length");
        std::size_t cut = a.size();
        if (a.size() >= 2) {
          auto [c, next] = rng_below(std::move(env), a.size() - 1);
          env = std::move(next);
          cut = static_cast<std::size_t>(c) + 1;
        }
        auto [c1, c2] = one_point_at(a, b, cut);
        return Threaded<std::pair<Solution, Solution>>{{std::move(c1), std::move(c2)}, std::move(env)};
      });
}

inline CrossoverC<Solution> crossover_order_one() {
  return CrossoverC<Solution>(
      {"order_one", Kind::perturb, {}, {}, {}}, [](const std::pair<Solution, Solution>& parents, Environment env) {
        const auto& a = expect_representation<Permutation>(parents.first, "order_one");
        const auto& b = expect_representation<Permutation>(parents.second, "order_one");
        if (a.size() != b.size()) throw ComponentError("order_one", "parents differ in length");
        RngCursor rng(std::move(env));
        const auto i = static_cast<std::size_t>(rng.below(a.size()));
        const auto j = static_cast<std::size_t>(rng.below(a.size()));
        std::pair<Solution, Solution> kids{order_one_at(a, b, i, j), order_one_at(b, a, i, j)};
        return Threaded<std::pair<Solution, Solution>>{std::move(kids), std::move(rng).release()};
      });
}

/// Per coordinate, w ~ U[0,1): children w*a+(1-w)*b and (1-w)*a+w*b.
inline CrossoverC<Solution> crossover_blend() {
  return CrossoverC<Solution>(
      {"blend", Kind::perturb, {}, {}, {}}, [](const std::pair<Solution, Solution>& parents, Environment env) {
        const auto& a = expect_representation<RealVector>(parents.first, "blend");
        const auto& b = expect_representation<RealVector>(parents.second, "blend");
        if (a.size() != b.size()) throw ComponentError("blend", "parents differ in length");
        RngCursor rng(std::move(env));
        RealVector c1 = a;
        RealVector c2 = b;
        for (std::size_t i = 0; i < a.size(); ++i) {
          const double w = rng.uniform();
          c1.coords[i] = w * a.coords[i] + (1.0 - w) * b.coords[i];
          c2.coords[i] = (1.0 - w) * a.coords[i] + w * b.coords[i];
        }
        return Threaded<std::pair<Solution, Solution>>{{std::move(c1), std::move(c2)}, std::move(rng).release()};
      });
}

inline CrossoverC<Solution> default_crossover(Representation rep) {
  switch (rep) {
    case Representation::bits: return crossover_one_point();
    case Representation::perm: return crossover_order_one();
    case Representation::real: return crossover_blend();
  }
  throw std::invalid_argument("no crossover for representation");
}

// ---------------------------------------------------------------------------
// Presets

/// Simulated annealing as a configuration bundle: an initializer for
/// sa.temperature and Metropolis acceptance with geometric cooling.
struct SimulatedAnnealingPreset {
  InitializerC init;
  Accept accept;
};

/// t0 = 0 is allowed and degenerates to improving-only acceptance.
inline SimulatedAnnealingPreset simulated_annealing_preset(double t0, double cooling) {
  if (!(t0 >= 0.0)) throw std::invalid_argument("simulated annealing: t0 must be nonnegative");
  return {initializer("sa_init", {{keys::sa_temperature, t0}}), accept_metropolis(cooling)};
}

}  // namespace metacomp

#endif  // METACOMP_FRAMEWORKS_HPP
