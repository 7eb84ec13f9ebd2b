#ifndef METACOMP_STEP_HPP
#define METACOMP_STEP_HPP

#include <functional>
#include <utility>

#include "metacomp/env.hpp"

namespace metacomp {

/// A value paired with the environment that results from computing it.
template <class T>
struct Threaded {
  T value;
  Environment env;
};

/// A state-threaded computation: (In, Environment) -> (Out, Environment).
template <class In, class Out>
using Step = std::function<Threaded<Out>(const In&, Environment)>;

template <class T>
Step<T, T> step_identity() {
  return [](const T& x, Environment env) { return Threaded<T>{x, std::move(env)}; };
}

/// Runs `first`, then feeds its value and environment to `second`.
template <class In, class Mid, class Out>
Step<In, Out> step_then(Step<In, Mid> first, Step<Mid, Out> second) {
  return [first = std::move(first), second = std::move(second)](const In& x, Environment env) {
    auto mid = first(x, std::move(env));
    return second(mid.value, std::move(mid.env));
  };
}

/// Lifts a plain function into a step that leaves the environment alone.
template <class In, class Out, class F>
Step<In, Out> step_pure(F f) {
  return [f = std::move(f)](const In& x, Environment env) { return Threaded<Out>{f(x), std::move(env)}; };
}

}  // namespace metacomp

#endif  // METACOMP_STEP_HPP
