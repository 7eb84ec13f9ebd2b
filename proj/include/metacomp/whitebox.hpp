#ifndef METACOMP_WHITEBOX_HPP
#define METACOMP_WHITEBOX_HPP

// White-box problem descriptions: a small declarative constraint-model
// format, a structural TSP recognizer, and dispatch between a dedicated
// tour search and a generic penalty search.
//
// Model JSON:
//   {"variables":[{"name":"x0","lo":0,"hi":3},...],
//    "constraints":[{"type":"all_different","vars":[...]},
//                   {"type":"table","vars":[...],"tuples":[[...],...]}],
//    "objective":{"type":"circuit_sum","vars":[...],"weights":[[...]]}
//              | {"type":"linear_sum","coeffs":[...],"vars":[...]} | null}

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "metacomp/components.hpp"
#include "metacomp/frameworks.hpp"
#include "metacomp/problems.hpp"

namespace metacomp {

struct Variable {
  std::string name;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  friend bool operator==(const Variable&, const Variable&) = default;
};

struct AllDifferent {
  std::vector<std::string> vars;
  friend bool operator==(const AllDifferent&, const AllDifferent&) = default;
};

struct TableConstraint {
  std::vector<std::string> vars;
  std::vector<std::vector<std::int64_t>> tuples;
  friend bool operator==(const TableConstraint&, const TableConstraint&) = default;
};

using Constraint = std::variant<AllDifferent, TableConstraint>;

/// Sum of W[x[v_i]][x[v_{i+1 mod n}]] over the listed variables.
struct CircuitSum {
  std::vector<std::string> vars;
  std::vector<std::vector<std::int64_t>> weights;
  friend bool operator==(const CircuitSum&, const CircuitSum&) = default;
};

struct LinearSum {
  std::vector<double> coeffs;
  std::vector<std::string> vars;
  friend bool operator==(const LinearSum&, const LinearSum&) = default;
};

using Objective = std::variant<CircuitSum, LinearSum>;

struct ModelDescription {
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;
  std::optional<Objective> objective;  // always minimized
  friend bool operator==(const ModelDescription&, const ModelDescription&) = default;

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < variables.size(); ++i) {
      if (variables[i].name == name) return i;
    }
    throw std::out_of_range("unknown variable '" + name + "'");
  }
};

/// One value per model variable, in declaration order.
using Assignment = std::vector<std::int64_t>;

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const ModelDescription& m) {
  json vars = json::array();
  for (const auto& v : m.variables) vars.push_back({{"name", v.name}, {"lo", v.lo}, {"hi", v.hi}});
  json cons = json::array();
  for (const auto& c : m.constraints) {
    if (const auto* a = std::get_if<AllDifferent>(&c)) {
      cons.push_back({{"type", "all_different"}, {"vars", a->vars}});
    } else {
      const auto& t = std::get<TableConstraint>(c);
      cons.push_back({{"type", "table"}, {"vars", t.vars}, {"tuples", t.tuples}});
    }
  }
  json obj = nullptr;
  if (m.objective) {
    if (const auto* cs = std::get_if<CircuitSum>(&*m.objective)) {
      obj = {{"type", "circuit_sum"}, {"vars", cs->vars}, {"weights", cs->weights}};
    } else {
      const auto& ls = std::get<LinearSum>(*m.objective);
      obj = {{"type", "linear_sum"}, {"coeffs", ls.coeffs}, {"vars", ls.vars}};
    }
  }
  return {{"variables", std::move(vars)}, {"constraints", std::move(cons)}, {"objective", std::move(obj)}};
}

inline std::string serialize_model(const ModelDescription& m) { return to_json(m).dump(); }

namespace detail {

class ModelReader {
 public:
  ModelDescription read(const json& root) {
    const std::string p = "$";
    object(root, p, {"variables", "constraints", "objective"});
    ModelDescription m;
    const auto& vars = array(member(root, p, "variables"), p + ".variables");
    if (vars.empty()) fail(p + ".variables", "at least one variable is required");
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const auto vp = p + ".variables[" + std::to_string(i) + "]";
      object(vars[i], vp, {"name", "lo", "hi"});
      Variable v{string(member(vars[i], vp, "name"), vp + ".name"), integer(member(vars[i], vp, "lo"), vp + ".lo"),
                 integer(member(vars[i], vp, "hi"), vp + ".hi")};
      if (v.name.empty()) fail(vp + ".name", "name must be nonempty");
      if (v.lo > v.hi) fail(vp, "lo exceeds hi");
      if (v.hi - v.lo > (std::int64_t{1} << 40)) fail(vp, "domain too large");
      if (!names_.emplace(v.name, i).second) fail(vp + ".name", "duplicate variable '" + v.name + "'");
      m.variables.push_back(std::move(v));
    }
    if (root.contains("constraints")) {
      const auto& cons = array(root["constraints"], p + ".constraints");
      for (std::size_t i = 0; i < cons.size(); ++i) {
        m.constraints.push_back(constraint(cons[i], p + ".constraints[" + std::to_string(i) + "]", m));
      }
    }
    if (root.contains("objective") && !root["objective"].is_null()) {
      m.objective = objective(root["objective"], p + ".objective", m);
    }
    return m;
  }

 private:
  std::map<std::string, std::size_t> names_;

  [[noreturn]] static void fail(const std::string& path, const std::string& msg) { throw ParseError(path, msg); }

  static void object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "object expected");
    for (const auto& [k, v] : j.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
        fail(path + "." + k, "unexpected field");
      }
    }
  }
  static const json& member(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) fail(path + "." + key, "missing field");
    return j[key];
  }
  static const json::array_t& array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "array expected");
    return j.get_ref<const json::array_t&>();
  }
  static std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "string expected");
    return j.get<std::string>();
  }
  static std::int64_t integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "integer expected");
    return j.get<std::int64_t>();
  }

  std::vector<std::string> var_list(const json& j, const std::string& path, bool allow_empty = false) {
    const auto& arr = array(j, path);
    if (arr.empty() && !allow_empty) fail(path, "variable list must be nonempty");
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto ip = path + "[" + std::to_string(i) + "]";
      auto name = string(arr[i], ip);
      if (!names_.count(name)) fail(ip, "unknown variable '" + name + "'");
      if (!seen.insert(name).second) fail(ip, "variable '" + name + "' listed twice");
      out.push_back(std::move(name));
    }
    return out;
  }

  std::vector<std::vector<std::int64_t>> matrix(const json& j, const std::string& path, std::size_t cols) {
    const auto& rows = array(j, path);
    std::vector<std::vector<std::int64_t>> out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto rp = path + "[" + std::to_string(r) + "]";
      const auto& row = array(rows[r], rp);
      if (row.size() != cols) fail(rp, "expected " + std::to_string(cols) + " entries, got " + std::to_string(row.size()));
      std::vector<std::int64_t> vals;
      for (std::size_t c = 0; c < row.size(); ++c) vals.push_back(integer(row[c], rp + "[" + std::to_string(c) + "]"));
      out.push_back(std::move(vals));
    }
    return out;
  }

  Constraint constraint(const json& j, const std::string& path, const ModelDescription& m) {
    if (!j.is_object()) fail(path, "object expected");
    const auto type = string(member(j, path, "type"), path + ".type");
    if (type == "all_different") {
      object(j, path, {"type", "vars"});
      return AllDifferent{var_list(member(j, path, "vars"), path + ".vars")};
    }
    if (type == "table") {
      object(j, path, {"type", "vars", "tuples"});
      TableConstraint t;
      t.vars = var_list(member(j, path, "vars"), path + ".vars");
      t.tuples = matrix(member(j, path, "tuples"), path + ".tuples", t.vars.size());
      (void)m;
      return t;
    }
    fail(path + ".type", "unknown constraint type '" + type + "'");
  }

  Objective objective(const json& j, const std::string& path, const ModelDescription& m) {
    if (!j.is_object()) fail(path, "object or null expected");
    const auto type = string(member(j, path, "type"), path + ".type");
    if (type == "circuit_sum") {
      object(j, path, {"type", "vars", "weights"});
      CircuitSum cs;
      cs.vars = var_list(member(j, path, "vars"), path + ".vars");
      const auto n = cs.vars.size();
      cs.weights = matrix(member(j, path, "weights"), path + ".weights", n);
      if (cs.weights.size() != n) fail(path + ".weights", "expected " + std::to_string(n) + " rows");
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
          if (cs.weights[r][c] < 0) {
            fail(path + ".weights[" + std::to_string(r) + "][" + std::to_string(c) + "]", "weights must be nonnegative");
          }
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        const auto& v = m.variables[names_.at(cs.vars[i])];
        if (v.lo < 0 || v.hi >= static_cast<std::int64_t>(n)) {
          fail(path + ".vars[" + std::to_string(i) + "]", "circuit variable domains must lie within 0.." + std::to_string(n - 1));
        }
      }
      return cs;
    }
    if (type == "linear_sum") {
      object(j, path, {"type", "coeffs", "vars"});
      LinearSum ls;
      ls.vars = var_list(member(j, path, "vars"), path + ".vars");
      const auto& coeffs = array(member(j, path, "coeffs"), path + ".coeffs");
      if (coeffs.size() != ls.vars.size()) fail(path + ".coeffs", "one coefficient per variable expected");
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (!coeffs[i].is_number()) fail(path + ".coeffs[" + std::to_string(i) + "]", "number expected");
        ls.coeffs.push_back(coeffs[i].get<double>());
      }
      return ls;
    }
    fail(path + ".type", "unknown objective type '" + type + "'");
  }
};

}  // namespace detail

inline ModelDescription model_from_json(const json& j) { return detail::ModelReader{}.read(j); }

inline ModelDescription parse_model(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("$"), e.what());
  }
  return model_from_json(j);
}

// ---------------------------------------------------------------------------
// Direct evaluation on the model

inline double objective_value(const ModelDescription& m, const Assignment& x) {
  if (!m.objective) return 0.0;
  if (const auto* cs = std::get_if<CircuitSum>(&*m.objective)) {
    std::int64_t total = 0;
    const auto n = cs->vars.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = x[m.index_of(cs->vars[i])];
      const auto b = x[m.index_of(cs->vars[(i + 1) % n])];
      total += cs->weights[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    return static_cast<double>(total);
  }
  const auto& ls = std::get<LinearSum>(*m.objective);
  double total = 0.0;
  for (std::size_t i = 0; i < ls.vars.size(); ++i) total += ls.coeffs[i] * static_cast<double>(x[m.index_of(ls.vars[i])]);
  return total;
}

/// all_different counts equal pairs; a table counts 1 when the tuple is not listed.
inline std::int64_t violations(const ModelDescription& m, const Assignment& x) {
  std::int64_t count = 0;
  for (const auto& c : m.constraints) {
    if (const auto* a = std::get_if<AllDifferent>(&c)) {
      for (std::size_t i = 0; i < a->vars.size(); ++i) {
        for (std::size_t j = i + 1; j < a->vars.size(); ++j) {
          count += x[m.index_of(a->vars[i])] == x[m.index_of(a->vars[j])];
        }
      }
    } else {
      const auto& t = std::get<TableConstraint>(c);
      std::vector<std::int64_t> tuple;
      for (const auto& v : t.vars) tuple.push_back(x[m.index_of(v)]);
      count += std::find(t.tuples.begin(), t.tuples.end(), tuple) == t.tuples.end();
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// TSP recognition and rewriting

struct TspMatch {
  std::size_t n = 0;
  std::vector<std::vector<std::int64_t>> weights;
  std::vector<std::string> vars;  // tour position i is variable vars[i]
};

/// Matches only the exact structure: a single all_different over every
/// variable, every domain 0..n-1, and a circuit_sum over all n variables.
inline std::optional<TspMatch> match_tsp(const ModelDescription& m) {
  const auto n = m.variables.size();
  if (m.constraints.size() != 1 || !m.objective) return std::nullopt;
  const auto* ad = std::get_if<AllDifferent>(&m.constraints[0]);
  const auto* cs = std::get_if<CircuitSum>(&*m.objective);
  if (!ad || !cs || ad->vars.size() != n || cs->vars.size() != n) return std::nullopt;
  for (const auto& v : m.variables) {
    if (v.lo != 0 || v.hi != static_cast<std::int64_t>(n) - 1) return std::nullopt;
  }
  std::set<std::string> all;
  for (const auto& v : m.variables) all.insert(v.name);
  if (std::set<std::string>(ad->vars.begin(), ad->vars.end()) != all) return std::nullopt;
  if (std::set<std::string>(cs->vars.begin(), cs->vars.end()) != all) return std::nullopt;
  if (cs->weights.size() != n) return std::nullopt;
  return TspMatch{n, cs->weights, cs->vars};
}

inline ProblemInstance rewrite_to_tsp(const TspMatch& match, std::string name = "whitebox_tsp") {
  return tsp_from_matrix(std::move(name), match.weights);
}

/// TSPLIB rendering of the rewritten instance (EXPLICIT, FULL_MATRIX).
inline std::string tsplib_explicit(const TspMatch& match, const std::string& name = "whitebox_tsp") {
  std::ostringstream s;
  s << "NAME : " << name << "\nTYPE : TSP\nDIMENSION : " << match.n
    << "\nEDGE_WEIGHT_TYPE : EXPLICIT\nEDGE_WEIGHT_FORMAT : FULL_MATRIX\nEDGE_WEIGHT_SECTION\n";
  for (const auto& row : match.weights) {
    for (std::size_t c = 0; c < row.size(); ++c) s << (c ? " " : "") << row[c];
    s << '\n';
  }
  s << "EOF\n";
  return s.str();
}

/// Variable vars[i] takes the city at tour position i.
inline Assignment tour_to_assignment(const ModelDescription& m, const TspMatch& match, const Permutation& tour) {
  Assignment x(m.variables.size(), 0);
  for (std::size_t i = 0; i < match.n; ++i) x[m.index_of(match.vars[i])] = tour.order[i];
  return x;
}

// ---------------------------------------------------------------------------
// Solvers

inline constexpr double kDefaultPenalty = 1000.0;

struct SolveResult {
  Assignment assignment;
  double value = 0.0;            // raw objective of the assignment
  std::int64_t violations = 0;   // constraint violations of the assignment
  double search_objective = 0.0; // value + penalty * violations
  std::string route;             // "tsp" or "generic"
  std::int64_t evaluations = 0;
  Environment env;
};

namespace detail {
inline void check_budget(std::int64_t budget) {
  if (budget <= 0) throw std::invalid_argument("budget must be positive");
}
}  // namespace detail

/// Penalty local search over full assignments: reassign one variable
/// uniformly within its domain, accept when not worse, stop after
/// `budget` evaluations.
inline SolveResult generic_solve(const ModelDescription& m, std::int64_t budget, Environment env,
                                 double penalty = kDefaultPenalty) {
  detail::check_budget(budget);
  auto span = [&](std::size_t i) { return static_cast<std::uint64_t>(m.variables[i].hi - m.variables[i].lo) + 1; };

  RngCursor rng(std::move(env));
  Assignment start(m.variables.size());
  for (std::size_t i = 0; i < start.size(); ++i) {
    start[i] = m.variables[i].lo + static_cast<std::int64_t>(rng.below(span(i)));
  }
  env = std::move(rng).release();

  EvaluateC<Assignment> evaluate({"penalized", Kind::evaluate, {}, {}, {}}, [&m, penalty](const Assignment& x, Environment e) {
    return Threaded<double>{objective_value(m, x) + penalty * static_cast<double>(violations(m, x)), std::move(e)};
  });
  PerturbC<Assignment> reassign({"reassign", Kind::perturb, {}, {}, {}}, [&m, span](const Assignment& x, Environment e) {
    RngCursor r(std::move(e));
    auto y = x;
    const auto i = static_cast<std::size_t>(r.below(y.size()));
    y[i] = m.variables[i].lo + static_cast<std::int64_t>(r.below(span(i)));
    return Threaded<Assignment>{std::move(y), std::move(r).release()};
  });
  auto run = local_search(std::move(start), evaluate, reassign, accept_improving<Assignment>(),
                          terminate_evaluations<Assignment>(budget), std::move(env));
  SolveResult out;
  out.assignment = run.best;
  out.value = objective_value(m, run.best);
  out.violations = violations(m, run.best);
  out.search_objective = run.best_value;
  out.route = "generic";
  out.evaluations = run.evaluations;
  out.env = std::move(run.final_env);
  return out;
}

/// Moves per 2-opt descent before the next restart.
inline std::int64_t descent_length(std::size_t n) { return std::max<std::int64_t>(32, 4 * std::int64_t(n * n)); }

/// Recognized TSP models go to restarted 2-opt descents with improving
/// acceptance sharing the evaluation budget; everything else to generic_solve.
inline SolveResult dispatch_solve(const ModelDescription& m, std::int64_t budget, Environment env,
                                  double penalty = kDefaultPenalty) {
  detail::check_budget(budget);
  auto match = match_tsp(m);
  if (!match) return generic_solve(m, budget, std::move(env), penalty);
  auto tsp = rewrite_to_tsp(*match);
  const auto two_opt = perturb_two_opt();
  const auto accept = accept_improving();
  std::optional<RunResult<Solution>> best;
  std::int64_t used = 0;
  while (used < budget) {
    auto start = sample_initial(tsp, std::move(env));
    auto stop = terminate_any(terminate_iterations(descent_length(match->n)), terminate_evaluations(budget - used));
    auto run = local_search(start.value, tsp.evaluate, two_opt, accept, stop, std::move(start.env));
    used += run.evaluations;
    env = std::move(run.final_env);
    if (!best || run.best_value < best->best_value) best = std::move(run);
  }
  SolveResult out;
  out.assignment = tour_to_assignment(m, *match, std::get<Permutation>(best->best));
  out.value = best->best_value;
  out.violations = violations(m, out.assignment);
  out.search_objective = out.value;
  out.route = "tsp";
  out.evaluations = used;
  out.env = std::move(env);
  return out;
}

}  // namespace metacomp

#endif  // METACOMP_WHITEBOX_HPP
