#ifndef METACOMP_ASSEMBLY_HPP
#define METACOMP_ASSEMBLY_HPP

// Component registry, configuration specs, dependency validation, design
// space enumeration and instantiation of runnable configurations.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "metacomp/components.hpp"
#include "metacomp/frameworks.hpp"
#include "metacomp/problems.hpp"

namespace metacomp {

using AnyComponent = std::variant<Perturb, Accept, Terminate, Evaluate>;
/// Builds a component from complete (defaults filled, bounds checked) bindings.
using Factory = std::function<AnyComponent(const ParamBindings&)>;

class Registry {
 public:
  struct Entry {
    ComponentDescriptor descriptor;
    Factory factory;
  };
  using Key = std::pair<Kind, std::string>;

  /// Copy of this registry with one more component.
  Registry with(ComponentDescriptor d, Factory f) const {
    Key key{d.kind, d.name};
    if (entries_.count(key)) {
      throw RegistrationError(std::string("duplicate ") + to_string(d.kind) + " component '" + d.name + "'");
    }
    Registry next = *this;
    next.entries_.emplace(std::move(key), Entry{std::move(d), std::move(f)});
    return next;
  }

  const ComponentDescriptor* find(Kind kind, const std::string& name) const {
    auto it = entries_.find({kind, name});
    return it == entries_.end() ? nullptr : &it->second.descriptor;
  }

  const ComponentDescriptor& descriptor(Kind kind, const std::string& name) const {
    if (auto* d = find(kind, name)) return *d;
    throw UnknownComponentError(std::string("unknown ") + to_string(kind) + " component '" + name + "'");
  }

  /// Components of one kind, ordered by name.
  std::vector<const ComponentDescriptor*> of_kind(Kind kind) const {
    std::vector<const ComponentDescriptor*> out;
    for (const auto& [key, entry] : entries_) {
      if (key.first == kind) out.push_back(&entry.descriptor);
    }
    return out;
  }

  AnyComponent make(Kind kind, const std::string& name, const ParamBindings& bindings) const {
    auto it = entries_.find({kind, name});
    if (it == entries_.end()) {
      throw UnknownComponentError(std::string("unknown ") + to_string(kind) + " component '" + name + "'");
    }
    const auto& d = it->second.descriptor;
    auto problems = check_bindings(d, bindings);
    if (!problems.empty()) throw ConfigurationError(name, problems.front());
    try {
      return it->second.factory(with_defaults(d, bindings));
    } catch (const std::invalid_argument& e) {
      throw ConfigurationError(name, name + ": " + e.what());
    }
  }

  template <class C>
  C make_as(Kind kind, const std::string& name, const ParamBindings& bindings) const {
    auto any = make(kind, name, bindings);
    if (auto* c = std::get_if<C>(&any)) return std::move(*c);
    throw RegistrationError("component '" + name + "' built the wrong interface");
  }

  const std::map<Key, Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::map<Key, Entry> entries_;
};

inline Registry register_component(const Registry& reg, ComponentDescriptor d, Factory f) {
  return reg.with(std::move(d), std::move(f));
}

/// {"components":[descriptor...]} ordered by (kind, name).
inline json to_json(const Registry& reg) {
  json arr = json::array();
  for (const auto& [key, entry] : reg.entries()) arr.push_back(to_json(entry.descriptor));
  return {{"components", std::move(arr)}};
}

namespace detail {

/// The descriptor is taken from a component built with `defaults`.
template <class Make>
Registry add_builtin(Registry reg, Make make, const ParamBindings& defaults = {}) {
  AnyComponent sample = make(defaults);
  ComponentDescriptor d = std::visit([](const auto& c) { return c.descriptor(); }, sample);
  return reg.with(std::move(d), [make](const ParamBindings& b) { return make(b); });
}

/// Evaluator descriptors carry fixed defaults rather than the instance size.
inline Registry add_evaluator(Registry reg, std::string name, std::vector<ParamSpec> params,
                              std::function<ProblemInstance(const ParamBindings&)> build) {
  ComponentDescriptor d{name, Kind::evaluate, std::move(params), {}, {}};
  return reg.with(std::move(d), [build](const ParamBindings& b) -> AnyComponent { return build(b).evaluate; });
}

inline std::size_t size_param(const ParamBindings& b, const std::string& name) {
  return static_cast<std::size_t>(param_int(b, name));
}

}  // namespace detail

/// Every component the library ships, with its default parameters.
inline const Registry& builtin_registry() {
  static const Registry reg = [] {
    using B = const ParamBindings&;
    Registry r;
    const auto i64 = [](std::int64_t v) { return ParamValue{v}; };
    r = detail::add_builtin(r, [](B b) -> AnyComponent { return perturb_bitflip(param_int(b, "k")); }, {{"k", i64(1)}});
    r = detail::add_builtin(r, [](B) -> AnyComponent { return perturb_swap(); });
    r = detail::add_builtin(r, [](B) -> AnyComponent { return perturb_two_opt(); });
    r = detail::add_builtin(r, [](B b) -> AnyComponent { return perturb_gaussian(param_real(b, "sigma")); },
                            {{"sigma", 0.1}});
    r = detail::add_builtin(r, [](B) -> AnyComponent { return accept_improving(); });
    r = detail::add_builtin(r, [](B) -> AnyComponent { return accept_always(); });
    r = detail::add_builtin(r, [](B b) -> AnyComponent { return accept_metropolis(param_real(b, "cooling")); },
                            {{"cooling", 0.99}});
    r = detail::add_builtin(r, [](B b) -> AnyComponent { return accept_tabu(param_int(b, "tenure")); },
                            {{"tenure", i64(10)}});
    r = detail::add_builtin(r, [](B b) -> AnyComponent { return terminate_iterations(param_int(b, "max")); },
                            {{"max", i64(1000)}});
    r = detail::add_builtin(r, [](B b) -> AnyComponent { return terminate_evaluations(param_int(b, "max")); },
                            {{"max", i64(1000)}});
    r = detail::add_builtin(r, [](B b) -> AnyComponent { return terminate_target(param_real(b, "value")); },
                            {{"value", 0.0}});

    auto size = [](const char* n, std::int64_t def, double min) {
      return ParamSpec{n, ParamType::integer, def, min, std::nullopt};
    };
    using detail::size_param;
    r = detail::add_evaluator(r, "onemax", {size("n", 8, 1)}, [](B b) { return onemax(size_param(b, "n")); });
    r = detail::add_evaluator(r, "checkerboard", {size("s", 4, 2)},
                              [](B b) { return checkerboard(size_param(b, "s")); });
    r = detail::add_evaluator(r, "royal_road", {size("b", 4, 1), size("n", 16, 1)},
                              [](B b) { return royal_road(size_param(b, "n"), size_param(b, "b")); });
    r = detail::add_evaluator(r, "trap", {size("b", 4, 1), size("n", 16, 1)},
                              [](B b) { return trap(size_param(b, "n"), size_param(b, "b")); });
    r = detail::add_evaluator(r, "hiff", {size("n", 16, 1)}, [](B b) { return hiff(size_param(b, "n")); });
    r = detail::add_evaluator(r, "sphere", {size("d", 5, 1)},
                              [](B b) { return sphere(size_param(b, "d"), -5.12, 5.12); });
    r = detail::add_evaluator(r, "magic_square", {size("k", 3, 3)},
                              [](B b) { return magic_square(size_param(b, "k")); });
    return r;
  }();
  return reg;
}

/// Reads {"components":[...]}. Every entry must name a component known to
/// `known`, with the same kind, parameter names/types and key sets; defaults
/// and bounds may be narrowed. Factories come from `known`.
inline Registry registry_from_json(const json& j, const Registry& known = builtin_registry()) {
  if (!j.is_object() || !j.contains("components") || !j["components"].is_array()) {
    throw SerializationError("registry must be an object with a 'components' array");
  }
  Registry out;
  for (const auto& item : j["components"]) {
    auto d = descriptor_from_json(item);
    auto it = known.entries().find({d.kind, d.name});
    if (it == known.entries().end()) {
      throw RegistrationError(std::string("no implementation for ") + to_string(d.kind) + " component '" + d.name + "'");
    }
    const auto& ref = it->second.descriptor;
    bool same_params = d.params.size() == ref.params.size();
    for (std::size_t i = 0; same_params && i < d.params.size(); ++i) {
      same_params = d.params[i].name == ref.params[i].name && d.params[i].type == ref.params[i].type;
    }
    if (!same_params || d.requires_keys != ref.requires_keys || d.provides_keys != ref.provides_keys) {
      throw RegistrationError("descriptor for '" + d.name + "' does not match its implementation");
    }
    out = out.with(std::move(d), it->second.factory);
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path, e.what());
  }
}

inline Registry load_registry(const std::string& path) {
  try {
    return registry_from_json(parse_json_file(path));
  } catch (const SerializationError& e) {
    throw ParseError(path, e.what());
  }
}

// ---------------------------------------------------------------------------
// Configuration specs

struct SlotBinding {
  std::string component;
  ParamBindings params;
  friend bool operator==(const SlotBinding&, const SlotBinding&) = default;
};

struct ConfigurationSpec {
  std::string framework;
  std::map<std::string, SlotBinding> slots;
  std::map<EnvKey, EnvValue> initializers;

  friend bool operator==(const ConfigurationSpec& a, const ConfigurationSpec& b) {
    if (a.framework != b.framework || a.slots != b.slots || a.initializers.size() != b.initializers.size()) {
      return false;
    }
    for (auto ia = a.initializers.begin(), ib = b.initializers.begin(); ia != a.initializers.end(); ++ia, ++ib) {
      if (ia->first != ib->first || !bit_equal(ia->second, ib->second)) return false;
    }
    return true;
  }
};

using Initializers = std::map<EnvKey, EnvValue>;

inline json to_json(const ConfigurationSpec& spec) {
  json slots = json::object();
  for (const auto& [slot, b] : spec.slots) slots[slot] = {{"component", b.component}, {"params", to_json(b.params)}};
  json inits = json::object();
  for (const auto& [k, v] : spec.initializers) inits[k.str()] = to_json(v);
  return {{"framework", spec.framework}, {"slots", std::move(slots)}, {"initializers", std::move(inits)}};
}

/// Integers stay integers and other numbers become reals; real-typed
/// parameters are normalized later against the registry.
inline ParamBindings loose_bindings_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw SerializationError(where + ": params must be an object");
  ParamBindings out;
  for (const auto& [k, v] : j.items()) {
    if (v.is_number_integer()) {
      out[k] = v.get<std::int64_t>();
    } else if (v.is_number()) {
      out[k] = v.get<double>();
    } else {
      throw SerializationError(where + "." + k + ": number expected");
    }
  }
  return out;
}

inline Initializers initializers_from_json(const json& j) {
  if (!j.is_object()) throw SerializationError("initializers must be an object");
  Initializers out;
  for (const auto& [k, v] : j.items()) {
    try {
      out.emplace(EnvKey::parse(k), env_value_from_json(v));
    } catch (const std::invalid_argument& e) {
      throw SerializationError(std::string("initializer key: ") + e.what());
    }
  }
  return out;
}

inline ConfigurationSpec spec_from_json(const json& j) {
  try {
    ConfigurationSpec spec;
    spec.framework = j.at("framework").get<std::string>();
    const auto& slots = j.at("slots");
    if (!slots.is_object()) throw SerializationError("slots must be an object");
    for (const auto& [slot, b] : slots.items()) {
      SlotBinding binding;
      binding.component = b.at("component").get<std::string>();
      if (b.contains("params")) binding.params = loose_bindings_from_json(b["params"], slot);
      spec.slots.emplace(slot, std::move(binding));
    }
    if (j.contains("initializers")) spec.initializers = initializers_from_json(j["initializers"]);
    return spec;
  } catch (const json::exception& e) {
    throw SerializationError(std::string("malformed configuration: ") + e.what());
  }
}

/// The kind expected in `slot` of `framework`, if the slot exists.
inline std::optional<Kind> slot_kind(const FrameworkDescriptor& fw, const std::string& slot) {
  for (const auto& [name, kind] : fw.slots) {
    if (name == slot) return kind;
  }
  return std::nullopt;
}

/// Real-typed parameters stored as reals, so equal configurations hash equally.
inline ConfigurationSpec canonicalize(ConfigurationSpec spec, const Registry& reg) {
  const auto& fw = framework_descriptor(spec.framework);
  for (auto& [slot, b] : spec.slots) {
    auto kind = slot_kind(fw, slot);
    if (!kind) continue;
    const auto* d = reg.find(*kind, b.component);
    if (!d) continue;
    for (auto& [name, value] : b.params) {
      for (const auto& p : d->params) {
        if (p.name == name && p.type == ParamType::real) value = as_double(value);
      }
    }
  }
  return spec;
}

struct Violation {
  std::string component;  // slot component, or the framework name
  std::string key;        // missing key; empty for binding problems
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Keys that can satisfy a `requires` entry: framework-provided keys,
/// initializer keys, and keys a bound component provides without also
/// reading them (a read-modify-write key cannot seed its own first read).
inline std::set<EnvKey> available_keys(const FrameworkDescriptor& fw, const std::vector<const ComponentDescriptor*>& bound,
                                       const Initializers& inits) {
  std::set<EnvKey> out = fw.provides_keys;
  for (const auto& [k, v] : inits) out.insert(k);
  for (const auto* d : bound) {
    for (const auto& k : d->provides_keys) {
      if (!d->requires_keys.count(k)) out.insert(k);
    }
  }
  return out;
}

/// Empty result means valid. Unknown framework or component names throw
/// UnknownComponentError instead of producing violations.
inline std::vector<Violation> validate(const ConfigurationSpec& spec, const Registry& reg) {
  const auto& fw = framework_descriptor(spec.framework);
  std::vector<Violation> out;
  std::vector<std::pair<std::string, const ComponentDescriptor*>> bound;
  for (const auto& [slot, b] : spec.slots) {
    auto kind = slot_kind(fw, slot);
    if (!kind) {
      out.push_back({b.component, "", "framework " + fw.name + " has no slot '" + slot + "'"});
      continue;
    }
    bound.emplace_back(slot, &reg.descriptor(*kind, b.component));
  }
  for (const auto& [slot, kind] : fw.slots) {
    if (!spec.slots.count(slot)) out.push_back({fw.name, "", "slot '" + slot + "' is not bound"});
  }
  for (const auto& [slot, d] : bound) {
    for (const auto& problem : check_bindings(*d, spec.slots.at(slot).params)) out.push_back({d->name, "", problem});
  }
  std::vector<const ComponentDescriptor*> descs;
  for (const auto& [slot, d] : bound) descs.push_back(d);
  const auto available = available_keys(fw, descs, spec.initializers);
  for (const auto& [slot, d] : bound) {
    for (const auto& k : d->requires_keys) {
      if (!available.count(k)) {
        out.push_back({d->name, k.str(), d->name + " (slot " + slot + ") requires " + k.str() + " but nothing provides it"});
      }
    }
  }
  for (const auto& k : fw.requires_keys) {
    if (!available.count(k)) out.push_back({fw.name, k.str(), fw.name + " requires " + k.str() + " but nothing provides it"});
  }
  return out;
}

inline bool is_valid(const ConfigurationSpec& spec, const Registry& reg) { return validate(spec, reg).empty(); }

// ---------------------------------------------------------------------------
// Enumeration

/// component name -> parameter name -> candidate values.
using ParamGrids = std::map<std::string, std::map<std::string, std::vector<ParamValue>>>;

/// Reads {"<component>":{"<param>":[values...]}} with types taken from the
/// registry's descriptors (the first descriptor with that name).
inline ParamGrids grids_from_json(const json& j, const Registry& reg) {
  if (!j.is_object()) throw SerializationError("grids must be an object");
  ParamGrids out;
  for (const auto& [component, params] : j.items()) {
    const ComponentDescriptor* d = nullptr;
    for (const auto& [key, entry] : reg.entries()) {
      if (key.second == component) {
        d = &entry.descriptor;
        break;
      }
    }
    if (!d) throw UnknownComponentError("grid names unknown component '" + component + "'");
    if (!params.is_object()) throw SerializationError("grid for '" + component + "' must be an object");
    auto& grid = out[component];
    for (const auto& [name, values] : params.items()) {
      auto it = std::find_if(d->params.begin(), d->params.end(), [&](const ParamSpec& p) { return p.name == name; });
      if (it == d->params.end()) throw SerializationError(component + ": unknown parameter '" + name + "'");
      if (!values.is_array()) throw SerializationError(component + "." + name + ": list of values expected");
      auto& list = grid[name];
      for (const auto& v : values) list.push_back(param_value_from_json(v, it->type, component + "." + name));
    }
  }
  return out;
}

inline json to_json(const ParamGrids& grids) {
  json out = json::object();
  for (const auto& [component, params] : grids) {
    json g = json::object();
    for (const auto& [name, values] : params) {
      json arr = json::array();
      for (const auto& v : values) arr.push_back(to_json(v));
      g[name] = std::move(arr);
    }
    out[component] = std::move(g);
  }
  return out;
}

/// Grid points for one component: the product over its gridded parameters
/// (in parameter-name order); parameters without a grid keep defaults.
inline std::vector<ParamBindings> grid_points(const ComponentDescriptor& d, const ParamGrids& grids) {
  std::vector<ParamBindings> points{{}};
  auto it = grids.find(d.name);
  if (it == grids.end()) return points;
  for (const auto& [name, values] : it->second) {
    std::vector<ParamBindings> next;
    for (const auto& base : points) {
      for (const auto& v : values) {
        auto b = base;
        b[name] = v;
        next.push_back(std::move(b));
      }
    }
    points = std::move(next);
  }
  return points;
}

/// The Cartesian product over slot candidates and grid points, filtered by
/// validate. Ordered by the tuple of component names (slots in framework
/// order), then by the tuple of grid indices.
inline std::vector<ConfigurationSpec> enumerate_valid(const Registry& reg, const std::string& framework,
                                                      const ParamGrids& grids, const Initializers& inits = {}) {
  const auto& fw = framework_descriptor(framework);
  std::vector<std::vector<const ComponentDescriptor*>> candidates;
  for (const auto& [slot, kind] : fw.slots) {
    auto list = reg.of_kind(kind);
    if (list.empty()) throw ConfigurationError(slot, "no " + std::string(to_string(kind)) + " component for slot '" + slot + "'");
    candidates.push_back(std::move(list));
  }
  const auto n = fw.slots.size();
  std::vector<ConfigurationSpec> out;
  std::vector<std::size_t> pick(n, 0);
  for (;;) {
    std::vector<std::vector<ParamBindings>> points(n);
    for (std::size_t s = 0; s < n; ++s) points[s] = grid_points(*candidates[s][pick[s]], grids);
    std::vector<std::size_t> idx(n, 0);
    bool any = true;
    for (const auto& p : points) any = any && !p.empty();
    while (any) {
      ConfigurationSpec spec{framework, {}, inits};
      for (std::size_t s = 0; s < n; ++s) {
        spec.slots[fw.slots[s].first] = {candidates[s][pick[s]]->name, points[s][idx[s]]};
      }
      if (is_valid(spec, reg)) out.push_back(canonicalize(std::move(spec), reg));
      std::size_t s = n;
      while (s > 0 && ++idx[s - 1] == points[s - 1].size()) idx[--s] = 0;
      if (s == 0) break;
    }
    std::size_t s = n;
    while (s > 0 && ++pick[s - 1] == candidates[s - 1].size()) pick[--s] = 0;
    if (s == 0) break;
  }
  return out;
}

/// Stable identifier: enumeration index plus a 16-hex content hash.
inline std::string config_id(std::size_t index, const ConfigurationSpec& spec) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json(spec).dump())));
  return std::to_string(index) + "-" + hex;
}

/// Sets the accept slot to Metropolis with the given cooling and adds the
/// matching sa.temperature initializer.
inline ConfigurationSpec with_simulated_annealing(ConfigurationSpec spec, double t0, double cooling) {
  if (!(t0 >= 0.0)) throw std::invalid_argument("simulated annealing: t0 must be nonnegative");
  spec.slots["accept"] = {"metropolis", {{"cooling", cooling}}};
  spec.initializers[keys::sa_temperature] = t0;
  return spec;
}

// ---------------------------------------------------------------------------
// Instantiation

/// Run-wide caps, combined with the configured termination condition. For
/// ILS they also bound every descent, so a budgeted run always finishes.
struct Budget {
  std::optional<std::int64_t> iterations;
  std::optional<std::int64_t> evaluations;
};

using Runnable = std::function<RunResult<Solution>()>;

namespace detail {

inline Terminate with_budget(Terminate t, const Budget& budget) {
  if (budget.iterations) t = terminate_any(std::move(t), terminate_iterations(*budget.iterations));
  if (budget.evaluations) t = terminate_any(std::move(t), terminate_evaluations(*budget.evaluations));
  return t;
}

inline std::string describe_violations(const std::vector<Violation>& vs) {
  std::string msg = "invalid configuration:";
  for (const auto& v : vs) msg += " [" + v.message + "]";
  return msg;
}

}  // namespace detail

/// Validates, builds every component and returns a closure that runs the
/// configuration on `problem` from Environment::seeded(seed). The
/// environment is seeded with problem.bounds (when present) and the
/// initializers before the initial solution is sampled.
inline Runnable instantiate(const ConfigurationSpec& spec, const Registry& reg, const ProblemInstance& problem,
                            std::uint64_t seed, const Budget& budget = {}) {
  auto violations = validate(spec, reg);
  if (!violations.empty()) {
    throw ConfigurationError(violations.front().key, detail::describe_violations(violations));
  }
  const auto& fw = framework_descriptor(spec.framework);
  auto build = [&](const std::string& slot, Kind kind) {
    const auto& b = spec.slots.at(slot);
    return reg.make(kind, b.component, b.params);
  };

  Environment env = Environment::seeded(seed);
  if (problem.bounds) env = std::move(env).put(keys::problem_bounds, RealSeq{problem.bounds->first, problem.bounds->second});
  for (const auto& [k, v] : spec.initializers) env = std::move(env).put(k, v);

  if (fw.name == "local_search") {
    auto perturb = std::get<Perturb>(build("perturb", Kind::perturb));
    auto accept = std::get<Accept>(build("accept", Kind::accept));
    auto terminate = detail::with_budget(std::get<Terminate>(build("terminate", Kind::terminate)), budget);
    return [=] {
      auto start = sample_initial(problem, env);
      return local_search(start.value, problem.evaluate, perturb, accept, terminate, start.env);
    };
  }
  if (fw.name == "ils") {
    auto kick = std::get<Perturb>(build("kick", Kind::perturb));
    LocalSearchParts<Solution> inner{std::get<Perturb>(build("perturb", Kind::perturb)),
                                     std::get<Accept>(build("accept", Kind::accept)),
                                     detail::with_budget(std::get<Terminate>(build("inner_terminate", Kind::terminate)), budget)};
    auto outer = std::get<Accept>(build("outer_accept", Kind::accept));
    auto terminate = detail::with_budget(std::get<Terminate>(build("terminate", Kind::terminate)), budget);
    return [=] {
      auto start = sample_initial(problem, env);
      return iterated_local_search(start.value, problem.evaluate, kick, inner, outer, terminate, start.env);
    };
  }
  // ga
  auto mutate = std::get<Perturb>(build("mutate", Kind::perturb));
  auto terminate = detail::with_budget(std::get<Terminate>(build("terminate", Kind::terminate)), budget);
  std::optional<GaSettings> settings;
  try {
    settings.emplace(require_as<std::int64_t>(env, keys::ga_pop_size, "ga"),
                     require_as<std::int64_t>(env, keys::ga_tournament_size, "ga"));
  } catch (const std::invalid_argument& e) {
    throw ConfigurationError(keys::ga_pop_size.str(), e.what());
  }
  auto crossover = default_crossover(problem.representation);
  return [=] {
    return genetic_algorithm(*settings, problem.sample_initial, problem.evaluate, crossover, mutate, terminate, env);
  };
}

}  // namespace metacomp

#endif  // METACOMP_ASSEMBLY_HPP
