// Copyright 2026 The bdprecode Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// bdprecode command-line front end.
//
//   bdprecode run <fig1|fig2|fig3|fig4|custom> [options]
//   bdprecode generate [options]          write an instance JSON
//   bdprecode solve <instance.json> [options]
//
// Exit codes: 0 success, 1 usage, 2 solver non-convergence, 3 I/O.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bdprecode/bd_optimal.hpp"
#include "bdprecode/bd_suboptimal.hpp"
#include "bdprecode/evaluate.hpp"
#include "bdprecode/experiments.hpp"
#include "bdprecode/serialization.hpp"

namespace {

using namespace bdprecode;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNonConvergence = 2;
constexpr int kExitIo = 3;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  int A = 0, MB = 0, K = 0, N = 0;
  double P = 0.0;
  std::vector<double> weights;
  std::vector<double> budgets;
  std::string scheme, mode, method;
  int seeds = 0;
  std::string seed_list;
  double tol = 0.0;
  int max_iter = 0;
  double initial_mu = 0.0;
  std::vector<double> power_grid;
  std::vector<int> antenna_grid;
  std::string out;
  bool json = false;
  bool bits = false;
  int threads = 0;
};

struct Options {
  CLI::Option* A; CLI::Option* MB; CLI::Option* K; CLI::Option* N; CLI::Option* P;
  CLI::Option* weights; CLI::Option* budgets; CLI::Option* scheme; CLI::Option* mode;
  CLI::Option* method; CLI::Option* seeds; CLI::Option* seed_list; CLI::Option* tol;
  CLI::Option* max_iter; CLI::Option* initial_mu; CLI::Option* power_grid;
  CLI::Option* antenna_grid;
};

bool given(const CLI::Option* o) { return o->count() > 0; }

void apply_config_flags(const Flags& f, const Options& o, SystemConfig& c) {
  if (given(o.A)) c.num_bs = f.A;
  if (given(o.MB)) c.antennas_per_bs = f.MB;
  if (given(o.K)) c.num_ms = f.K;
  if (given(o.N)) c.antennas_per_ms = f.N;
  if (given(o.P)) c.power_budget = f.P;
  if (given(o.weights)) c.weights = f.weights;
  if (given(o.budgets)) c.group_budgets = f.budgets;
  if (given(o.scheme)) c.scheme = parse_scheme(f.scheme);
  if (given(o.mode)) c.mode = parse_mode(f.mode);
}

void apply_solve_flags(const Flags& f, const Options& o, SolveOptions& s) {
  if (given(o.tol)) s.tol = f.tol;
  if (given(o.max_iter)) s.max_iter = f.max_iter;
  if (given(o.initial_mu)) s.initial_mu = f.initial_mu;
}

std::vector<std::uint64_t> seeds_from(const Flags& f, const Options& o,
                                      std::vector<std::uint64_t> fallback) {
  if (given(o.seed_list)) return parse_seed_list(f.seed_list);
  if (given(o.seeds)) {
    if (f.seeds < 1) throw ContractViolation("--seeds must be positive");
    return seed_range(f.seeds);
  }
  return fallback;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

int run_command(const std::string& name, const Flags& f, const Options& o) {
  ExperimentSpec spec = default_spec(parse_experiment(name));
  apply_config_flags(f, o, spec.config);
  apply_solve_flags(f, o, spec.solve);
  if (given(o.method)) spec.method = parse_method(f.method);
  spec.seeds = seeds_from(f, o, spec.seeds);
  if (given(o.power_grid)) spec.power_grid = f.power_grid;
  if (given(o.antenna_grid)) spec.antenna_grid = f.antenna_grid;
  spec.bits = f.bits;
  spec.threads = f.threads;

  const ExperimentResult result = run_experiment(spec);
  emit(f.json ? to_json(result).dump(2) + "\n" : to_csv(result.table), f.out);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  return result.converged ? kExitOk : kExitNonConvergence;
}

int generate_command(const Flags& f, const Options& o) {
  SystemConfig config;
  apply_config_flags(f, o, config);
  config.validate();
  const auto seeds = seeds_from(f, o, {1});
  const ProblemInstance problem = make_problem(config, seeds.front());
  emit(instance_to_json(problem).dump(2) + "\n", f.out);
  return kExitOk;
}

int solve_command(const std::string& path, const Flags& f, const Options& o) {
  Json doc;
  try {
    doc = read_json_file(path);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
  const ProblemInstance problem = instance_from_json(doc);
  SolveOptions options;
  apply_solve_flags(f, o, options);
  const MethodChoice method = given(o.method) ? parse_method(f.method) : MethodChoice::kBoth;

  Json out;
  out["instance"] = {{"config", config_to_json(problem.config)}, {"seed", problem.channels.seed}};
  bool converged = true;
  auto add = [&](const Solution& s, const char* key) {
    Json entry = solution_to_json(s);
    entry["metrics"] = metrics_to_json(metrics(s.covariances, problem));
    out[key] = std::move(entry);
    if (!s.converged) {
      converged = false;
      std::cerr << "warning: " << s.method << " did not converge\n";
    }
  };
  if (method != MethodChoice::kSuboptimal) add(solve_optimal(problem, options), "optimal");
  if (method != MethodChoice::kOptimal) add(solve_suboptimal(problem, options), "suboptimal");
  out["units"] = "nats";
  emit(out.dump(2) + "\n", f.out);
  return converged ? kExitOk : kExitNonConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-diagonalization precoding for cooperative multi-cell MIMO"};
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  app.require_subcommand(1);

  Flags f;
  Options o{};
  o.A = app.add_option("--A", f.A, "number of base stations");
  o.MB = app.add_option("--MB", f.MB, "antennas per base station");
  o.K = app.add_option("--K", f.K, "number of users");
  o.N = app.add_option("--N", f.N, "antennas per user");
  o.P = app.add_option("--P", f.P, "power budget per constraint group");
  o.weights = app.add_option("--weights", f.weights, "rate weights, comma separated")->delimiter(',');
  o.budgets = app.add_option("--budgets", f.budgets, "per-group budgets, comma separated")
                  ->delimiter(',');
  o.scheme = app.add_option("--scheme", f.scheme, "per-bs, per-antenna or sum")
                 ->check(CLI::IsMember({"per-bs", "per-antenna", "sum"}));
  o.mode = app.add_option("--mode", f.mode, "bd or zf-dpc")->check(CLI::IsMember({"bd", "zf-dpc"}));
  o.method = app.add_option("--method", f.method, "optimal, suboptimal or both")
                 ->check(CLI::IsMember({"optimal", "suboptimal", "both"}));
  o.seeds = app.add_option("--seeds", f.seeds, "use seeds 1..count");
  o.seed_list = app.add_option("--seed-list", f.seed_list, "explicit seeds, e.g. 1-5,9");
  o.tol = app.add_option("--tol", f.tol, "dual gap tolerance");
  o.max_iter = app.add_option("--max-iter", f.max_iter, "ellipsoid iteration budget");
  o.initial_mu = app.add_option("--initial-mu", f.initial_mu, "initial price for every group");
  o.power_grid = app.add_option("--P-grid", f.power_grid, "fig4 power grid, comma separated")
                     ->delimiter(',');
  o.antenna_grid = app.add_option("--M-grid", f.antenna_grid, "fig2 antenna counts, comma separated")
                       ->delimiter(',');
  app.add_option("--out", f.out, "output path (default stdout)");
  app.add_flag("--json", f.json, "emit JSON instead of CSV");
  app.add_flag("--bits", f.bits, "report rates in bits instead of nats");
  app.add_option("--threads", f.threads, "worker threads (0: all cores)");

  std::string experiment;
  CLI::App* run = app.add_subcommand("run", "run a named experiment");
  run->add_option("experiment", experiment, "fig1, fig2, fig3, fig4 or custom")->required();
  run->fallthrough();
  CLI::App* generate = app.add_subcommand("generate", "write a problem instance as JSON");
  generate->fallthrough();
  std::string instance_path;
  CLI::App* solve = app.add_subcommand("solve", "solve an instance JSON");
  solve->add_option("instance", instance_path, "instance file")->required();
  solve->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ConfigError& e) {
    app.exit(e);
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) return run_command(experiment, f, o);
    if (*generate) return generate_command(f, o);
    if (*solve) return solve_command(instance_path, f, o);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InfeasibleProblem& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed instance: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  }
  return kExitUsage;
}
