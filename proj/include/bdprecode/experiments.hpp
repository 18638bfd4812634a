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

// Named experiment runners and their tabular output.

#ifndef BDPRECODE_EXPERIMENTS_HPP_
#define BDPRECODE_EXPERIMENTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "bdprecode/bd_optimal.hpp"
#include "bdprecode/model.hpp"
#include "bdprecode/serialization.hpp"

namespace bdprecode {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Experiment { kFig1, kFig2, kFig3, kFig4, kCustom };

// Accepts "fig1" or "fig1_convergence", "fig2" or "fig2_miso_sweep", etc.
Experiment parse_experiment(const std::string& text);
std::string to_string(Experiment experiment);

enum class MethodChoice { kOptimal, kSuboptimal, kBoth };

MethodChoice parse_method(const std::string& text);
std::string to_string(MethodChoice method);

struct ExperimentSpec {
  Experiment name = Experiment::kCustom;
  SystemConfig config;
  MethodChoice method = MethodChoice::kBoth;
  std::vector<std::uint64_t> seeds;
  SolveOptions solve;
  std::vector<int> antenna_grid;    // fig2: total antennas M (one per BS)
  std::vector<double> power_grid;   // fig4
  bool bits = false;
  int threads = 0;  // 0: hardware concurrency
};

// Parameters of the named experiment with the default seed list 1..count.
ExperimentSpec default_spec(Experiment name);
std::vector<std::uint64_t> seed_range(int count);

struct Column {
  std::string name;
  bool is_rate = false;  // scaled by 1/ln 2 under --bits
  bool is_integer = false;
};

struct Table {
  std::string metadata;  // without the leading '#'
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
  Table table;
  bool converged = true;  // every solve met its tolerance
  std::vector<std::string> warnings;
  Json details;  // custom: per-seed solutions
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

std::string format_number(double value);
std::string to_csv(const Table& table);
Json to_json(const ExperimentResult& result);

// "1-5,8,10-11"
std::string format_seed_list(const std::vector<std::uint64_t>& seeds);
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace bdprecode

#endif  // BDPRECODE_EXPERIMENTS_HPP_
