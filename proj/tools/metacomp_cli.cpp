// metacomp: experiment runner, comparison, enumeration, component service
// and white-box solver.
//
// Exit codes: 0 ok, 1 trial failures, 2 input error, 3 environment error.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>

#include "metacomp/harness.hpp"
#include "metacomp/rpc.hpp"
#include "metacomp/whitebox.hpp"

using namespace metacomp;

namespace {

constexpr int kOk = 0;
constexpr int kTrialFailures = 1;
constexpr int kInputError = 2;
constexpr int kEnvironmentError = 3;

int input_error(const std::string& what) {
  std::cerr << "error: " << what << "\n";
  return kInputError;
}

int cmd_run(const std::string& experiment, unsigned threads, const std::string& out_override) {
  ExperimentSpec spec;
  ExperimentPlan plan;
  try {
    spec = load_experiment(experiment);
    if (!out_override.empty()) spec.out = out_override;
    plan = plan_experiment(spec);
  } catch (const std::exception& e) {
    return input_error(e.what());
  }
  const auto records = run_trials(plan, threads);
  const auto dir = output_dir(spec);
  try {
    write_results(dir, records);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEnvironmentError;
  }
  std::size_t failed = 0;
  for (const auto& r : records) {
    if (!r.ok) {
      ++failed;
      std::cerr << "trial " << r.trial_name() << " failed: " << r.error << "\n";
    }
  }
  std::cout << records.size() << " trials, " << failed << " failed; results in " << (dir / "results.csv").string() << "\n";
  return failed ? kTrialFailures : kOk;
}

int cmd_compare(const std::string& csv, const std::string& problem, const std::string& metric) {
  try {
    std::cout << render(compare_results(read_text_file(csv), problem, metric));
  } catch (const std::exception& e) {
    return input_error(e.what());
  }
  return kOk;
}

int cmd_enumerate(const std::string& registry_path, const std::string& framework, const std::string& grids_path) {
  json out;
  try {
    const auto reg = load_registry(registry_path);
    auto [grids_json, inits] = split_grids(grids_path.empty() ? json::object() : parse_json_file(grids_path));
    const auto configs = enumerate_valid(reg, framework, grids_from_json(grids_json, reg), inits);
    json list = json::array();
    for (std::size_t i = 0; i < configs.size(); ++i) {
      list.push_back({{"config_id", config_id(i, configs[i])}, {"spec", to_json(configs[i])}});
    }
    out = {{"framework", framework}, {"count", configs.size()}, {"configs", std::move(list)}};
  } catch (const std::exception& e) {
    return input_error(e.what());
  }
  std::cout << out.dump(2) << "\n";
  return kOk;
}

int cmd_serve(const std::string& host, int port, const std::string& registry_path) {
  Registry reg;
  try {
    reg = registry_path.empty() ? builtin_registry() : load_registry(registry_path);
  } catch (const std::exception& e) {
    return input_error(e.what());
  }
  // Block the stop signals before any server thread exists, then wait for one.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
  try {
    RpcServer server(std::move(reg), host, port);
    std::cout << "listening on " << server.host() << ":" << server.port() << std::endl;
    int sig = 0;
    sigwait(&stop_signals, &sig);
    server.stop();
  } catch (const PortInUseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEnvironmentError;
  } catch (const ConfigurationError& e) {
    return input_error(e.what());
  }
  return kOk;
}

int cmd_solve(const std::string& model_path, std::int64_t budget, std::uint64_t seed, double penalty,
              const std::string& audit) {
  ModelDescription model;
  try {
    model = parse_model(read_text_file(model_path));
  } catch (const std::exception& e) {
    return input_error(e.what());
  }
  if (budget <= 0) return input_error("--budget must be positive");
  const auto result = dispatch_solve(model, budget, Environment::seeded(seed), penalty);
  if (!audit.empty() && result.route == "tsp") {
    try {
      write_text_file(audit, tsplib_explicit(*match_tsp(model), fs::path(model_path).stem().string()));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kEnvironmentError;
    }
  }
  json assignment = json::object();
  for (std::size_t i = 0; i < model.variables.size(); ++i) assignment[model.variables[i].name] = result.assignment[i];
  std::cout << json{{"route_taken", result.route},
                    {"assignment", std::move(assignment)},
                    {"value", result.value},
                    {"violations", result.violations},
                    {"evaluations", result.evaluations}}
                   .dump()
            << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compose, run and compare metaheuristic configurations."};
  app.require_subcommand(1);

  std::string experiment, out_override;
  unsigned threads = 0;
  auto* run = app.add_subcommand("run", "Run every (problem, config, seed) trial of an experiment");
  run->add_option("experiment", experiment, "Experiment JSON file")->required();
  run->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  run->add_option("--out", out_override, "Output directory, overriding the experiment's \"out\"");

  std::string results, problem, metric = "final";
  auto* compare = app.add_subcommand("compare", "Summarize and test final values of one problem");
  compare->add_option("results", results, "results.csv written by run")->required();
  compare->add_option("--problem", problem, "Problem id as written in results.csv")->required();
  compare->add_option("--metric", metric, "Only 'final' is supported")->capture_default_str();

  std::string registry, framework, grids;
  auto* enumerate = app.add_subcommand("enumerate", "List every valid configuration");
  enumerate->add_option("registry", registry, "Registry JSON file")->required();
  enumerate->add_option("--framework", framework, "local_search, ils or ga")->required();
  enumerate->add_option("--grids", grids, "Parameter grids JSON file");

  std::string host = "127.0.0.1", serve_registry;
  int port = 0;
  auto* serve = app.add_subcommand("serve", "Host registry components over JSON-RPC at POST /rpc");
  serve->add_option("--port", port, "TCP port")->required()->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--registry", serve_registry, "Registry JSON file (builtin palette when omitted)");

  std::string model, audit;
  std::int64_t budget = 0;
  std::uint64_t seed = 0;
  double penalty = kDefaultPenalty;
  auto* solve = app.add_subcommand("solve", "Solve a white-box constraint model");
  solve->add_option("model", model, "Model JSON file")->required();
  solve->add_option("--budget", budget, "Evaluation budget")->required();
  solve->add_option("--seed", seed, "Seed")->capture_default_str();
  solve->add_option("--penalty", penalty, "Penalty per violated constraint (generic route)")->capture_default_str();
  solve->add_option("--audit", audit, "Write the rewritten TSPLIB instance here when the tsp route is taken");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  if (*run) return cmd_run(experiment, threads, out_override);
  if (*compare) return cmd_compare(results, problem, metric);
  if (*enumerate) return cmd_enumerate(registry, framework, grids);
  if (*serve) return cmd_serve(host, port, serve_registry);
  return cmd_solve(model, budget, seed, penalty, audit);
}
