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

#include "bdprecode/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "bdprecode/bd_suboptimal.hpp"
#include "bdprecode/evaluate.hpp"

namespace bdprecode {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct MethodOutcome {
  bool ok = false;
  Solution solution;
  int active_groups = 0;
  std::string error;
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  MethodOutcome optimal;
  MethodOutcome suboptimal;
};

bool wants_optimal(MethodChoice m) { return m != MethodChoice::kSuboptimal; }
bool wants_suboptimal(MethodChoice m) { return m != MethodChoice::kOptimal; }

MethodOutcome solve_with(const ProblemInstance& problem, const SolveOptions& options,
                         bool optimal) {
  MethodOutcome out;
  try {
    out.solution = optimal ? solve_optimal(problem, options) : solve_suboptimal(problem, options);
    out.active_groups = count_active_groups(out.solution.group_powers, problem);
    out.ok = true;
  } catch (const NumericFailure& e) {
    out.error = e.what();
  }
  return out;
}

std::vector<SeedOutcome> solve_seeds(const SystemConfig& config, const ExperimentSpec& spec) {
  SolveOptions options = spec.solve;
  options.record_history = false;
  std::vector<SeedOutcome> outcomes(spec.seeds.size());
  parallel_for(static_cast<int>(spec.seeds.size()), spec.threads, [&](int i) {
    SeedOutcome& o = outcomes[static_cast<std::size_t>(i)];
    o.seed = spec.seeds[static_cast<std::size_t>(i)];
    const ProblemInstance problem = make_problem(config, o.seed);
    if (wants_optimal(spec.method)) o.optimal = solve_with(problem, options, true);
    if (wants_suboptimal(spec.method)) o.suboptimal = solve_with(problem, options, false);
  });
  return outcomes;
}

void note_failures(const std::vector<SeedOutcome>& outcomes, const ExperimentSpec& spec,
                   const std::string& where, ExperimentResult& result) {
  auto check = [&](const MethodOutcome& m, std::uint64_t seed, const char* label) {
    std::string prefix = where.empty() ? "" : where + " ";
    if (!m.ok) {
      result.converged = false;
      result.warnings.push_back(prefix + "seed " + std::to_string(seed) + " " + label +
                                " failed: " + m.error);
    } else if (!m.solution.converged) {
      result.converged = false;
      result.warnings.push_back(prefix + "seed " + std::to_string(seed) + " " + label +
                                " did not converge");
    }
  };
  for (const auto& o : outcomes) {
    if (wants_optimal(spec.method)) check(o.optimal, o.seed, "optimal");
    if (wants_suboptimal(spec.method)) check(o.suboptimal, o.seed, "suboptimal");
  }
}

double mean_rate(const std::vector<SeedOutcome>& outcomes, bool optimal) {
  double sum = 0.0;
  int n = 0;
  for (const auto& o : outcomes) {
    const MethodOutcome& m = optimal ? o.optimal : o.suboptimal;
    if (!m.ok) continue;
    sum += m.solution.primal_value;
    ++n;
  }
  return n > 0 ? sum / n : kNaN;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", values[i]);
    out += buf;
  }
  return out;
}

std::string metadata(const ExperimentSpec& spec) {
  const SystemConfig& c = spec.config;
  std::ostringstream s;
  s << "bdprecode " << kToolVersion << " experiment=" << to_string(spec.name);
  if (spec.name == Experiment::kFig2) {
    std::string grid;
    for (std::size_t i = 0; i < spec.antenna_grid.size(); ++i) {
      grid += (i ? "," : "") + std::to_string(spec.antenna_grid[i]);
    }
    s << " M=" << grid;
  } else {
    s << " A=" << c.num_bs;
  }
  s << " MB=" << c.antennas_per_bs << " K=" << c.num_ms << " N=" << c.antennas_per_ms;
  if (spec.name == Experiment::kFig4) {
    s << " P=" << format_list(spec.power_grid);
  } else {
    s << " P=" << format_list({c.power_budget});
  }
  if (!c.weights.empty()) s << " weights=" << format_list(c.weights);
  s << " scheme=" << to_string(c.scheme) << " mode=" << to_string(c.mode)
    << " method=" << to_string(spec.method) << " tol=" << format_list({spec.solve.tol})
    << " initial_mu=" << format_list({spec.solve.initial_mu})
    << " units=" << (spec.bits ? "bits" : "nats") << " seeds=" << format_seed_list(spec.seeds);
  return s.str();
}

std::vector<Column> method_rate_columns(MethodChoice method) {
  std::vector<Column> cols;
  if (wants_optimal(method)) cols.push_back({"optimal_sum_rate", true, false});
  if (wants_suboptimal(method)) cols.push_back({"suboptimal_sum_rate", true, false});
  return cols;
}

void scale_rates(Table& table, bool bits) {
  if (!bits) return;
  for (auto& row : table.rows) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (table.columns[c].is_rate) row[c] /= std::numbers::ln2;
    }
  }
}

ExperimentResult run_fig1(const ExperimentSpec& spec) {
  ExperimentResult result;
  if (spec.seeds.empty()) throw ContractViolation("fig1 needs a seed");
  const ProblemInstance problem = make_problem(spec.config, spec.seeds.front());
  SolveOptions options = spec.solve;
  options.record_history = true;
  const bool optimal = spec.method != MethodChoice::kSuboptimal;
  const Solution solution = optimal ? solve_optimal(problem, options)
                                    : solve_suboptimal(problem, options);
  if (!solution.converged) {
    result.converged = false;
    result.warnings.push_back(solution.method + " did not converge");
  }
  Table& t = result.table;
  t.columns.push_back({"iteration", false, true});
  t.columns.push_back({"sum_rate", true, false});
  const int groups = problem.num_groups();
  const std::string unit = spec.config.scheme == ConstraintScheme::kPerAntenna ? "antenna" : "bs";
  for (int a = 0; a < groups; ++a) {
    t.columns.push_back({"power_" + unit + std::to_string(a + 1), false, false});
  }
  for (int a = 0; a < groups; ++a) t.columns.push_back({"mu" + std::to_string(a + 1), false, false});
  for (const auto& rec : solution.history) {
    std::vector<double> row{static_cast<double>(rec.iteration), rec.weighted_rate};
    for (int a = 0; a < groups; ++a) row.push_back(rec.group_powers(a));
    for (int a = 0; a < groups; ++a) row.push_back(rec.mu(a));
    t.rows.push_back(std::move(row));
  }
  result.details = {{"seed", spec.seeds.front()}, {"solution", solution_to_json(solution)}};
  return result;
}

ExperimentResult run_fig2(const ExperimentSpec& spec) {
  ExperimentResult result;
  Table& t = result.table;
  t.columns = {{"M", false, true}};
  for (auto& c : method_rate_columns(spec.method)) t.columns.push_back(c);
  for (int m : spec.antenna_grid) {
    SystemConfig config = spec.config;
    if (m % config.antennas_per_bs != 0) {
      throw ContractViolation("M=" + std::to_string(m) + " is not a multiple of MB");
    }
    config.num_bs = m / config.antennas_per_bs;
    config.validate();
    const auto outcomes = solve_seeds(config, spec);
    note_failures(outcomes, spec, "M=" + std::to_string(m), result);
    std::vector<double> row{static_cast<double>(m)};
    if (wants_optimal(spec.method)) row.push_back(mean_rate(outcomes, true));
    if (wants_suboptimal(spec.method)) row.push_back(mean_rate(outcomes, false));
    t.rows.push_back(std::move(row));
  }
  return result;
}

ExperimentResult run_fig3(const ExperimentSpec& spec) {
  ExperimentResult result;
  Table& t = result.table;
  t.columns = {{"seed", false, true}};
  if (wants_optimal(spec.method)) t.columns.push_back({"optimal_active", false, true});
  if (wants_suboptimal(spec.method)) t.columns.push_back({"suboptimal_active", false, true});
  const auto outcomes = solve_seeds(spec.config, spec);
  note_failures(outcomes, spec, "", result);
  for (const auto& o : outcomes) {
    std::vector<double> row{static_cast<double>(o.seed)};
    if (wants_optimal(spec.method)) {
      row.push_back(o.optimal.ok ? o.optimal.active_groups : kNaN);
    }
    if (wants_suboptimal(spec.method)) {
      row.push_back(o.suboptimal.ok ? o.suboptimal.active_groups : kNaN);
    }
    t.rows.push_back(std::move(row));
  }
  return result;
}

ExperimentResult run_fig4(const ExperimentSpec& spec) {
  ExperimentResult result;
  Table& t = result.table;
  t.columns = {{"P", false, false}};
  for (auto& c : method_rate_columns(spec.method)) t.columns.push_back(c);
  for (double p : spec.power_grid) {
    SystemConfig config = spec.config;
    config.power_budget = p;
    config.validate();
    const auto outcomes = solve_seeds(config, spec);
    note_failures(outcomes, spec, "P=" + format_number(p), result);
    std::vector<double> row{p};
    if (wants_optimal(spec.method)) row.push_back(mean_rate(outcomes, true));
    if (wants_suboptimal(spec.method)) row.push_back(mean_rate(outcomes, false));
    t.rows.push_back(std::move(row));
  }
  return result;
}

ExperimentResult run_custom(const ExperimentSpec& spec) {
  ExperimentResult result;
  Table& t = result.table;
  t.columns = {{"seed", false, true}};
  std::vector<std::pair<bool, std::string>> methods;
  if (wants_optimal(spec.method)) methods.emplace_back(true, "optimal");
  if (wants_suboptimal(spec.method)) methods.emplace_back(false, "suboptimal");
  for (const auto& [opt, name] : methods) {
    t.columns.push_back({name + "_sum_rate", true, false});
    t.columns.push_back({name + "_duality_gap", true, false});
    t.columns.push_back({name + "_active", false, true});
    t.columns.push_back({name + "_iterations", false, true});
    t.columns.push_back({name + "_converged", false, true});
  }
  const auto outcomes = solve_seeds(spec.config, spec);
  note_failures(outcomes, spec, "", result);
  result.details = Json::array();
  for (const auto& o : outcomes) {
    std::vector<double> row{static_cast<double>(o.seed)};
    Json entry = {{"seed", o.seed}};
    for (const auto& [opt, name] : methods) {
      const MethodOutcome& m = opt ? o.optimal : o.suboptimal;
      if (m.ok) {
        row.insert(row.end(), {m.solution.primal_value, m.solution.duality_gap,
                               static_cast<double>(m.active_groups),
                               static_cast<double>(m.solution.iterations),
                               m.solution.converged ? 1.0 : 0.0});
        entry[name] = solution_to_json(m.solution);
      } else {
        row.insert(row.end(), {kNaN, kNaN, kNaN, kNaN, 0.0});
        entry[name] = {{"error", m.error}};
      }
    }
    t.rows.push_back(std::move(row));
    result.details.push_back(std::move(entry));
  }
  return result;
}

}  // namespace

Experiment parse_experiment(const std::string& text) {
  if (text == "fig1" || text == "fig1_convergence") return Experiment::kFig1;
  if (text == "fig2" || text == "fig2_miso_sweep") return Experiment::kFig2;
  if (text == "fig3" || text == "fig3_active_histogram") return Experiment::kFig3;
  if (text == "fig4" || text == "fig4_mimo_power_sweep") return Experiment::kFig4;
  if (text == "custom") return Experiment::kCustom;
  throw ContractViolation("unknown experiment '" + text + "'");
}

std::string to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::kFig1: return "fig1_convergence";
    case Experiment::kFig2: return "fig2_miso_sweep";
    case Experiment::kFig3: return "fig3_active_histogram";
    case Experiment::kFig4: return "fig4_mimo_power_sweep";
    case Experiment::kCustom: return "custom";
  }
  return "custom";
}

MethodChoice parse_method(const std::string& text) {
  if (text == "optimal") return MethodChoice::kOptimal;
  if (text == "suboptimal") return MethodChoice::kSuboptimal;
  if (text == "both") return MethodChoice::kBoth;
  throw ContractViolation("unknown method '" + text + "'");
}

std::string to_string(MethodChoice method) {
  switch (method) {
    case MethodChoice::kOptimal: return "optimal";
    case MethodChoice::kSuboptimal: return "suboptimal";
    case MethodChoice::kBoth: return "both";
  }
  return "both";
}

std::vector<std::uint64_t> seed_range(int count) {
  std::vector<std::uint64_t> seeds;
  for (int s = 1; s <= count; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
  return seeds;
}

ExperimentSpec default_spec(Experiment name) {
  ExperimentSpec spec;
  spec.name = name;
  SystemConfig& c = spec.config;
  c.power_budget = 10.0;
  c.scheme = ConstraintScheme::kPerBs;
  switch (name) {
    case Experiment::kFig1:
      c.num_bs = 2; c.antennas_per_bs = 4; c.num_ms = 4; c.antennas_per_ms = 2;
      spec.method = MethodChoice::kOptimal;
      spec.seeds = seed_range(1);
      break;
    case Experiment::kFig2:
      c.num_bs = 2; c.antennas_per_bs = 1; c.num_ms = 2; c.antennas_per_ms = 1;
      spec.seeds = seed_range(100);
      for (int m = 2; m <= 10; ++m) spec.antenna_grid.push_back(m);
      break;
    case Experiment::kFig3:
      c.num_bs = 8; c.antennas_per_bs = 1; c.num_ms = 2; c.antennas_per_ms = 1;
      spec.seeds = seed_range(100);
      break;
    case Experiment::kFig4:
      c.num_bs = 4; c.antennas_per_bs = 1; c.num_ms = 2; c.antennas_per_ms = 2;
      spec.seeds = seed_range(100);
      spec.power_grid = {0.1, 1.0, 10.0, 100.0};
      break;
    case Experiment::kCustom:
      c.scheme = ConstraintScheme::kPerAntenna;
      spec.seeds = seed_range(1);
      break;
  }
  return spec;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.name != Experiment::kFig2) spec.config.validate();
  if (spec.seeds.empty()) throw ContractViolation("empty seed list");
  ExperimentResult result;
  switch (spec.name) {
    case Experiment::kFig1: result = run_fig1(spec); break;
    case Experiment::kFig2: result = run_fig2(spec); break;
    case Experiment::kFig3: result = run_fig3(spec); break;
    case Experiment::kFig4: result = run_fig4(spec); break;
    case Experiment::kCustom: result = run_custom(spec); break;
  }
  result.table.metadata = metadata(spec);
  scale_rates(result.table, spec.bits);
  return result;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.11e", value);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out = "# " + table.metadata + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out += (c ? "," : "") + table.columns[c].name;
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      const bool integral = table.columns[c].is_integer && std::isfinite(row[c]);
      out += integral ? std::to_string(static_cast<long long>(row[c])) : format_number(row[c]);
    }
    out += '\n';
  }
  return out;
}

Json to_json(const ExperimentResult& result) {
  Json j;
  j["metadata"] = result.table.metadata;
  Json columns = Json::array();
  for (const auto& c : result.table.columns) columns.push_back(c.name);
  j["columns"] = std::move(columns);
  Json rows = Json::array();
  for (const auto& row : result.table.rows) {
    Json r = Json::array();
    for (double v : row) r.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["converged"] = result.converged;
  j["warnings"] = result.warnings;
  if (!result.details.is_null()) j["details"] = result.details;
  return j;
}

std::string format_seed_list(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  std::size_t i = 0;
  while (i < seeds.size()) {
    std::size_t j = i;
    while (j + 1 < seeds.size() && seeds[j + 1] == seeds[j] + 1) ++j;
    if (!out.empty()) out += ',';
    out += std::to_string(seeds[i]);
    if (j > i) out += '-' + std::to_string(seeds[j]);
    i = j + 1;
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const auto dash = item.find('-');
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } else {
        const std::string lo_text = item.substr(0, dash);
        const std::string hi_text = item.substr(dash + 1);
        const std::uint64_t lo = std::stoull(lo_text, &used);
        if (used != lo_text.size()) throw std::invalid_argument(item);
        const std::uint64_t hi = std::stoull(hi_text, &used);
        if (used != hi_text.size() || hi < lo) throw std::invalid_argument(item);
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw ContractViolation("bad seed list entry '" + item + "'");
    }
  }
  if (seeds.empty()) throw ContractViolation("empty seed list");
  return seeds;
}

}  // namespace bdprecode
