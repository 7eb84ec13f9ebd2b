#ifndef METACOMP_HARNESS_HPP
#define METACOMP_HARNESS_HPP

// Experiment sweeps over problems x configurations x seeds, per-trial
// traces, and the rank-based comparison of final values.
//
// Experiment JSON:
//   {"problems":["onemax(32)", "instances/uf20.cnf", ...],
//    "registry":"registry.json",            (optional, builtin palette when absent)
//    "framework":"local_search",
//    "grids":{...} | "configs":[spec, ...],
//    "initializers":{...},                  (optional, merged into every config)
//    "seeds":[1,2,3],
//    "budget":{"iterations":n,"evaluations":n},
//    "trace_stride":1,
//    "out":"results/run1"}
// Relative paths resolve against the experiment file's directory.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "metacomp/assembly.hpp"
#include "metacomp/stats.hpp"

namespace metacomp {

namespace fs = std::filesystem;

/// Shortest decimal that reads back to the same double.
inline std::string format_real(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw SerializationError("cannot format real");
  return std::string(buf, end);
}

// ---------------------------------------------------------------------------
// Problem references

namespace detail {

inline std::vector<double> constructor_args(const std::string& ref, const std::string& inner) {
  std::vector<double> out;
  std::stringstream in(inner);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    auto v = to_real(trim(tok));
    if (!v) throw ConfigurationError("problems", "bad argument '" + trim(tok) + "' in '" + ref + "'");
    out.push_back(*v);
  }
  return out;
}

inline std::size_t size_arg(const std::string& ref, double v) {
  if (v < 1 || v != std::floor(v) || v > 1e7) throw ConfigurationError("problems", "size arguments must be positive integers in '" + ref + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace detail

/// "onemax(32)", "checkerboard(4)", "royal_road(16,4)", "trap(16,4)",
/// "hiff(16)", "sphere(5)" or "sphere(5,lo,hi)", "magic_square(3)",
/// or a path to a DIMACS .cnf or TSPLIB .tsp file.
inline ProblemInstance make_problem(const std::string& ref, const fs::path& base_dir = {}) {
  const auto open = ref.find('(');
  if (open != std::string::npos && !ref.empty() && ref.back() == ')') {
    const auto name = detail::trim(ref.substr(0, open));
    const auto args = detail::constructor_args(ref, ref.substr(open + 1, ref.size() - open - 2));
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi) throw ConfigurationError("problems", "wrong number of arguments in '" + ref + "'");
    };
    auto sz = [&](std::size_t i) { return detail::size_arg(ref, args[i]); };
    try {
      if (name == "onemax") return arity(1, 1), onemax(sz(0));
      if (name == "checkerboard") return arity(1, 1), checkerboard(sz(0));
      if (name == "royal_road") return arity(2, 2), royal_road(sz(0), sz(1));
      if (name == "trap") return arity(2, 2), trap(sz(0), sz(1));
      if (name == "hiff") return arity(1, 1), hiff(sz(0));
      if (name == "magic_square") return arity(1, 1), magic_square(sz(0));
      if (name == "sphere") {
        arity(1, 3);
        if (args.size() == 2) throw ConfigurationError("problems", "sphere takes (d) or (d,lo,hi)");
        return args.size() == 3 ? sphere(sz(0), args[1], args[2]) : sphere(sz(0), -5.12, 5.12);
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigurationError("problems", ref + ": " + e.what());
    }
    throw ConfigurationError("problems", "unknown problem constructor '" + name + "'");
  }
  const fs::path path = fs::path(ref).is_absolute() ? fs::path(ref) : base_dir / ref;
  const auto text = read_text_file(path.string());
  const auto ext = path.extension().string();
  try {
    if (ext == ".cnf") return parse_dimacs_cnf(text, path.stem().string());
    if (ext == ".tsp") return parse_tsplib(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e.what());
  }
  throw ConfigurationError("problems", "unrecognized problem file type '" + ref + "' (expected .cnf or .tsp)");
}

// ---------------------------------------------------------------------------
// Experiment spec

struct ExperimentSpec {
  std::vector<std::string> problems;
  std::optional<std::string> registry;
  std::string framework;
  std::optional<json> grids;
  std::vector<ConfigurationSpec> configs;
  Initializers initializers;
  std::vector<std::uint64_t> seeds;
  Budget budget;
  std::int64_t trace_stride = 1;
  std::string out = "results";
  fs::path base_dir;
};

/// A grids object may carry an "initializers" member next to the
/// per-component grids; this separates the two.
inline std::pair<json, Initializers> split_grids(json grids) {
  Initializers inits;
  if (grids.is_object() && grids.contains("initializers")) {
    inits = initializers_from_json(grids["initializers"]);
    grids.erase("initializers");
  }
  return {std::move(grids), std::move(inits)};
}

inline ExperimentSpec experiment_from_json(const json& j, const fs::path& base_dir = {}) {
  auto bad = [](const std::string& key, const std::string& msg) { return ConfigurationError(key, key + ": " + msg); };
  if (!j.is_object()) throw bad("experiment", "object expected");
  static const std::set<std::string> known{"problems", "registry", "framework", "grids",  "configs",
                                           "initializers", "seeds", "budget", "trace_stride", "out"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw bad(k, "unknown field");
  }
  ExperimentSpec spec;
  spec.base_dir = base_dir;

  if (!j.contains("problems") || !j["problems"].is_array() || j["problems"].empty()) {
    throw bad("problems", "a nonempty list is required");
  }
  for (const auto& p : j["problems"]) {
    if (!p.is_string()) throw bad("problems", "entries must be strings");
    spec.problems.push_back(p.get<std::string>());
  }
  if (j.contains("registry")) {
    if (!j["registry"].is_string()) throw bad("registry", "path expected");
    spec.registry = j["registry"].get<std::string>();
  }
  if (!j.contains("framework") || !j["framework"].is_string()) throw bad("framework", "name expected");
  spec.framework = j["framework"].get<std::string>();
  framework_descriptor(spec.framework);

  const bool has_grids = j.contains("grids"), has_configs = j.contains("configs");
  if (has_grids == has_configs) throw bad("grids", "exactly one of grids or configs is required");
  if (has_grids) {
    if (!j["grids"].is_object()) throw bad("grids", "object expected");
    auto [grids, inits] = split_grids(j["grids"]);
    spec.grids = std::move(grids);
    spec.initializers = std::move(inits);
  } else {
    if (!j["configs"].is_array() || j["configs"].empty()) throw bad("configs", "a nonempty list is required");
    for (const auto& c : j["configs"]) {
      auto cs = spec_from_json(c);
      if (cs.framework != spec.framework) throw bad("configs", "config framework '" + cs.framework + "' differs");
      spec.configs.push_back(std::move(cs));
    }
  }
  if (j.contains("initializers")) {
    for (auto& [k, v] : initializers_from_json(j["initializers"])) spec.initializers.insert_or_assign(k, v);
  }

  if (!j.contains("seeds") || !j["seeds"].is_array() || j["seeds"].empty()) throw bad("seeds", "a nonempty list is required");
  for (const auto& s : j["seeds"]) {
    if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0)) throw bad("seeds", "seeds must be nonnegative 64-bit integers");
    spec.seeds.push_back(s.get<std::uint64_t>());
  }

  if (!j.contains("budget") || !j["budget"].is_object()) throw bad("budget", "object expected");
  for (const auto& [k, v] : j["budget"].items()) {
    if (k != "iterations" && k != "evaluations") throw bad("budget." + k, "unknown field");
    if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) throw bad("budget." + k, "positive integer expected");
    (k == "iterations" ? spec.budget.iterations : spec.budget.evaluations) = v.get<std::int64_t>();
  }
  if (!spec.budget.iterations && !spec.budget.evaluations) throw bad("budget", "iterations and/or evaluations required");

  if (j.contains("trace_stride")) {
    if (!j["trace_stride"].is_number_integer() || j["trace_stride"].get<std::int64_t>() < 1) {
      throw bad("trace_stride", "positive integer expected");
    }
    spec.trace_stride = j["trace_stride"].get<std::int64_t>();
  }
  if (j.contains("out")) {
    if (!j["out"].is_string() || j["out"].get<std::string>().empty()) throw bad("out", "path expected");
    spec.out = j["out"].get<std::string>();
  }
  return spec;
}

inline ExperimentSpec load_experiment(const std::string& path) {
  return experiment_from_json(parse_json_file(path), fs::path(path).parent_path());
}

// ---------------------------------------------------------------------------
// Planning

struct PlannedConfig {
  std::string id;
  ConfigurationSpec spec;
};

struct ExperimentPlan {
  Registry registry;
  std::vector<std::pair<std::string, ProblemInstance>> problems;  // (problem id, instance)
  std::vector<PlannedConfig> configs;
  std::vector<std::uint64_t> seeds;
  Budget budget;
  std::int64_t trace_stride = 1;
};

/// Loads every referenced file and fixes the configuration list. Any
/// failure here is an input error.
inline ExperimentPlan plan_experiment(const ExperimentSpec& spec) {
  ExperimentPlan plan;
  plan.registry = spec.registry ? load_registry((spec.base_dir / *spec.registry).string()) : builtin_registry();
  std::map<std::string, int> seen;
  for (const auto& ref : spec.problems) {
    auto p = make_problem(ref, spec.base_dir);
    auto id = p.name;
    if (seen[p.name]++) id += "#" + std::to_string(seen[p.name] - 1);
    plan.problems.emplace_back(std::move(id), std::move(p));
  }
  if (spec.grids) {
    const auto grids = grids_from_json(*spec.grids, plan.registry);
    const auto configs = enumerate_valid(plan.registry, spec.framework, grids, spec.initializers);
    for (std::size_t i = 0; i < configs.size(); ++i) plan.configs.push_back({config_id(i, configs[i]), configs[i]});
  } else {
    for (std::size_t i = 0; i < spec.configs.size(); ++i) {
      auto c = canonicalize(spec.configs[i], plan.registry);
      for (const auto& [k, v] : spec.initializers) c.initializers.try_emplace(k, v);
      plan.configs.push_back({config_id(i, c), std::move(c)});
    }
  }
  plan.seeds = spec.seeds;
  plan.budget = spec.budget;
  plan.trace_stride = spec.trace_stride;
  return plan;
}

// ---------------------------------------------------------------------------
// Trials

struct TrialRecord {
  std::string problem;
  std::string config_id;
  std::uint64_t seed = 0;
  bool ok = false;
  double best_value = 0.0;
  std::int64_t evaluations = 0;
  std::int64_t wall_ms = 0;
  std::vector<TraceRow> trace;  // already strided
  std::string error;

  std::string trial_name() const;
};

/// Rows whose iteration is a multiple of `stride`, plus the final row.
inline std::vector<TraceRow> stride_trace(const std::vector<TraceRow>& rows, std::int64_t stride) {
  std::vector<TraceRow> out;
  for (const auto& r : rows) {
    if (r.iteration % stride == 0) out.push_back(r);
  }
  if (!rows.empty() && (out.empty() || !(out.back() == rows.back()))) out.push_back(rows.back());
  return out;
}

inline std::string sanitize_name(const std::string& s) {
  std::string out = s;
  for (auto& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  }
  return out;
}

inline std::string TrialRecord::trial_name() const {
  return sanitize_name(problem) + "__" + config_id + "__" + std::to_string(seed);
}

inline TrialRecord run_trial(const ExperimentPlan& plan, std::size_t problem, std::size_t config, std::uint64_t seed) {
  TrialRecord rec;
  rec.problem = plan.problems[problem].first;
  rec.config_id = plan.configs[config].id;
  rec.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto run = instantiate(plan.configs[config].spec, plan.registry, plan.problems[problem].second, seed, plan.budget)();
    rec.ok = true;
    rec.best_value = run.best_value;
    rec.evaluations = run.evaluations;
    rec.trace = stride_trace(run.trace, plan.trace_stride);
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

/// Canonical order: problem, config index, config id, seed.
inline bool record_less(const TrialRecord& a, const TrialRecord& b) {
  auto index = [](const std::string& id) { return std::stoull(id.substr(0, id.find('-'))); };
  if (a.problem != b.problem) return a.problem < b.problem;
  if (a.config_id != b.config_id) {
    const auto ia = index(a.config_id), ib = index(b.config_id);
    return ia != ib ? ia < ib : a.config_id < b.config_id;
  }
  return a.seed < b.seed;
}

/// Runs every (problem, config, seed) trial on `threads` workers (0 picks
/// the hardware concurrency) and returns the records in canonical order.
inline std::vector<TrialRecord> run_trials(const ExperimentPlan& plan, unsigned threads = 0) {
  struct Job {
    std::size_t problem, config;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < plan.problems.size(); ++p)
    for (std::size_t c = 0; c < plan.configs.size(); ++c)
      for (auto s : plan.seeds) jobs.push_back({p, c, s});

  std::vector<TrialRecord> records(jobs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) records[i] = run_trial(plan, jobs[i].problem, jobs[i].config, jobs[i].seed);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::sort(records.begin(), records.end(), record_less);
  return records;
}

// ---------------------------------------------------------------------------
// Output

inline constexpr const char* kResultsHeader = "problem,config_id,seed,best_value,evaluations,wall_ms";

inline std::string results_csv(const std::vector<TrialRecord>& records) {
  std::string out = std::string(kResultsHeader) + "\n";
  for (const auto& r : records) {
    out += r.problem + "," + r.config_id + "," + std::to_string(r.seed) + "," +
           (r.ok ? format_real(r.best_value) : std::string("failed")) + "," + std::to_string(r.ok ? r.evaluations : 0) + "," +
           std::to_string(r.wall_ms) + "\n";
  }
  return out;
}

inline std::string trace_csv(const TrialRecord& r) {
  std::string out = "iteration,evaluations,best_value\n";
  for (const auto& row : r.trace) {
    out += std::to_string(row.iteration) + "," + std::to_string(row.evaluations) + "," + format_real(row.best_value) + "\n";
  }
  return out;
}

inline void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

/// results.csv plus traces/<trial>.csv for every successful trial.
inline void write_results(const fs::path& out_dir, const std::vector<TrialRecord>& records) {
  fs::create_directories(out_dir / "traces");
  write_text_file(out_dir / "results.csv", results_csv(records));
  for (const auto& r : records) {
    if (r.ok) write_text_file(out_dir / "traces" / (r.trial_name() + ".csv"), trace_csv(r));
  }
}

inline fs::path output_dir(const ExperimentSpec& spec) {
  const fs::path out(spec.out);
  return out.is_absolute() ? out : spec.base_dir / out;
}

// ---------------------------------------------------------------------------
// Comparison

inline constexpr std::size_t kMinSeedsPerConfig = 5;

struct ConfigSummary {
  std::string config_id;
  Summary summary;
};

struct PairwiseTest {
  std::string a, b;
  MannWhitney test;
};

struct Comparison {
  std::string problem;
  std::vector<ConfigSummary> configs;
  std::vector<PairwiseTest> pairs;
};

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}
}  // namespace detail

/// Final best_value per configuration for one problem. Failed rows are skipped.
inline std::map<std::string, std::vector<double>> final_values(std::string_view csv, const std::string& problem) {
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line) || detail::trim(line) != kResultsHeader) throw ParseError(std::size_t{1}, "expected header '" + std::string(kResultsHeader) + "'");
  ++lineno;
  std::map<std::string, std::vector<double>> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_csv_line(detail::trim(line));
    if (cells.size() != 6) throw ParseError(lineno, "expected 6 columns");
    if (cells[0] != problem || cells[3] == "failed") continue;
    auto v = detail::to_real(cells[3]);
    if (!v) throw ParseError(lineno, "bad best_value '" + cells[3] + "'");
    out[cells[1]].push_back(*v);
  }
  return out;
}

inline Comparison compare_results(std::string_view csv, const std::string& problem, const std::string& metric = "final") {
  if (metric != "final") throw ConfigurationError("metric", "unsupported metric '" + metric + "' (only 'final')");
  const auto groups = final_values(csv, problem);
  if (groups.size() < 2) {
    throw ConfigurationError("problem", "compare needs at least 2 configurations for problem '" + problem + "', found " +
                                            std::to_string(groups.size()));
  }
  for (const auto& [id, values] : groups) {
    if (values.size() < kMinSeedsPerConfig) {
      throw ConfigurationError("seeds", "compare needs at least " + std::to_string(kMinSeedsPerConfig) +
                                            " seeds per configuration; '" + id + "' has " + std::to_string(values.size()));
    }
  }
  std::vector<std::string> ids;
  for (const auto& [id, values] : groups) ids.push_back(id);
  std::sort(ids.begin(), ids.end(), [](const std::string& a, const std::string& b) {
    auto index = [](const std::string& id) {
      try {
        return std::stoull(id.substr(0, id.find('-')));
      } catch (const std::exception&) {
        return 0ULL;
      }
    };
    return index(a) != index(b) ? index(a) < index(b) : a < b;
  });
  Comparison cmp;
  cmp.problem = problem;
  for (const auto& id : ids) cmp.configs.push_back({id, summarize(groups.at(id))});
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      cmp.pairs.push_back({ids[i], ids[j], mann_whitney(groups.at(ids[i]), groups.at(ids[j]))});
  return cmp;
}

inline std::string render(const Comparison& cmp) {
  std::ostringstream s;
  s << "# problem " << cmp.problem << ": final best_value per configuration\n";
  s << "config_id,n,median,q1,q3,iqr\n";
  for (const auto& c : cmp.configs) {
    s << c.config_id << "," << c.summary.n << "," << format_real(c.summary.median) << "," << format_real(c.summary.q1) << ","
      << format_real(c.summary.q3) << "," << format_real(c.summary.iqr()) << "\n";
  }
  s << "# pairwise two-sided Mann-Whitney U (normal approximation, tie-corrected)\n";
  s << "config_a,config_b,u,z,p\n";
  for (const auto& p : cmp.pairs) {
    s << p.a << "," << p.b << "," << format_real(p.test.u) << "," << format_real(p.test.z) << "," << format_real(p.test.p) << "\n";
  }
  return s.str();
}

}  // namespace metacomp

#endif  // METACOMP_HARNESS_HPP
