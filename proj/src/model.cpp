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

#include "bdprecode/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bdprecode {

std::string to_string(ConstraintScheme scheme) {
  switch (scheme) {
    case ConstraintScheme::kPerBs: return "per-bs";
    case ConstraintScheme::kPerAntenna: return "per-antenna";
    case ConstraintScheme::kSumPower: return "sum";
  }
  return "unknown";
}

std::string to_string(PrecodingMode mode) {
  return mode == PrecodingMode::kBd ? "bd" : "zf-dpc";
}

ConstraintScheme parse_scheme(const std::string& text) {
  if (text == "per-bs") return ConstraintScheme::kPerBs;
  if (text == "per-antenna") return ConstraintScheme::kPerAntenna;
  if (text == "sum" || text == "sum-power") return ConstraintScheme::kSumPower;
  throw ContractViolation("unknown constraint scheme '" + text + "'");
}

PrecodingMode parse_mode(const std::string& text) {
  if (text == "bd") return PrecodingMode::kBd;
  if (text == "zf-dpc" || text == "zfdpc") return PrecodingMode::kZfDpc;
  throw ContractViolation("unknown precoding mode '" + text + "'");
}

int SystemConfig::group_count() const {
  switch (scheme) {
    case ConstraintScheme::kPerBs: return num_bs;
    case ConstraintScheme::kPerAntenna: return total_antennas();
    case ConstraintScheme::kSumPower: return 1;
  }
  return 0;
}

double SystemConfig::weight(int k) const {
  return weights.empty() ? 1.0 : weights.at(static_cast<std::size_t>(k));
}

double SystemConfig::budget(int group) const {
  return group_budgets.empty() ? power_budget
                               : group_budgets.at(static_cast<std::size_t>(group));
}

double SystemConfig::max_weight() const {
  return weights.empty() ? 1.0 : *std::max_element(weights.begin(), weights.end());
}

void SystemConfig::validate() const {
  if (num_bs < 1 || antennas_per_bs < 1 || num_ms < 1 || antennas_per_ms < 1) {
    throw ContractViolation("A, M_B, K and N must all be >= 1");
  }
  if (!(power_budget > 0.0) || !std::isfinite(power_budget)) {
    throw ContractViolation("power budget P must be positive and finite");
  }
  if (!weights.empty()) {
    if (static_cast<int>(weights.size()) != num_ms) {
      std::ostringstream os;
      os << "expected " << num_ms << " weights, got " << weights.size();
      throw ContractViolation(os.str());
    }
    for (double w : weights) {
      if (!(w > 0.0) || !std::isfinite(w)) throw ContractViolation("weights must be positive");
    }
  }
  if (!group_budgets.empty()) {
    if (static_cast<int>(group_budgets.size()) != group_count()) {
      std::ostringstream os;
      os << "expected " << group_count() << " group budgets, got " << group_budgets.size();
      throw ContractViolation(os.str());
    }
    for (double p : group_budgets) {
      if (!(p > 0.0) || !std::isfinite(p)) throw ContractViolation("group budgets must be positive");
    }
  }
  if (antennas_per_ms * num_ms > total_antennas()) {
    std::ostringstream os;
    os << "N*K = " << antennas_per_ms * num_ms << " exceeds M = " << total_antennas();
    throw InfeasibleProblem(os.str());
  }
}

RealVector ConstraintMasks::mask(int group) const {
  RealVector out(static_cast<Eigen::Index>(group_of_antenna.size()));
  for (std::size_t m = 0; m < group_of_antenna.size(); ++m) {
    out(static_cast<Eigen::Index>(m)) = group_of_antenna[m] == group ? 1.0 : 0.0;
  }
  return out;
}

RealVector ConstraintMasks::weighted_diagonal(const RealVector& mu) const {
  RealVector out(static_cast<Eigen::Index>(group_of_antenna.size()));
  for (std::size_t m = 0; m < group_of_antenna.size(); ++m) {
    out(static_cast<Eigen::Index>(m)) = mu(group_of_antenna[m]);
  }
  return out;
}

RealVector ConstraintMasks::group_traces(const ComplexMatrix& x) const {
  RealVector out = RealVector::Zero(group_count);
  for (std::size_t m = 0; m < group_of_antenna.size(); ++m) {
    const auto i = static_cast<Eigen::Index>(m);
    out(group_of_antenna[m]) += x(i, i).real();
  }
  return out;
}

RealVector ConstraintMasks::group_energies(const ComplexVector& x) const {
  RealVector out = RealVector::Zero(group_count);
  for (std::size_t m = 0; m < group_of_antenna.size(); ++m) {
    out(group_of_antenna[m]) += std::norm(x(static_cast<Eigen::Index>(m)));
  }
  return out;
}

std::vector<int> ProblemInstance::protected_users(int k) const {
  std::vector<int> out;
  for (int j = 0; j < config.num_ms; ++j) {
    if (j == k) continue;
    if (config.mode == PrecodingMode::kZfDpc && j < k) continue;
    out.push_back(j);
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

namespace {

double unit_uniform(std::uint64_t key, std::uint64_t counter) {
  const std::uint64_t word = splitmix64(key + counter * 0x9E3779B97F4A7C15ull);
  return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
}

ComplexMatrix draw_user_channel(int rows, int cols, std::uint64_t seed, int k,
                                std::uint64_t attempt) {
  const std::uint64_t key =
      splitmix64(seed ^ splitmix64((static_cast<std::uint64_t>(k) << 32) | attempt));
  ComplexMatrix h(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto e = static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(cols) +
                     static_cast<std::uint64_t>(c);
      const double radius = std::sqrt(-std::log(unit_uniform(key, 2 * e)));
      const double angle = 2.0 * std::numbers::pi * unit_uniform(key, 2 * e + 1);
      h(r, c) = std::polar(radius, angle);
    }
  }
  return h;
}

}  // namespace

ChannelSet generate_channels(const SystemConfig& config, std::uint64_t seed) {
  ChannelSet set;
  set.seed = seed;
  const int n = config.antennas_per_ms;
  const int m = config.total_antennas();
  for (int k = 0; k < config.num_ms; ++k) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      ComplexMatrix h = draw_user_channel(n, m, seed, k, attempt);
      if (n > m || reduced_svd(h).rank() == n) {
        set.h.push_back(std::move(h));
        break;
      }
    }
  }
  return set;
}

ComplexMatrix interference_stack(const ChannelSet& channels, int k, PrecodingMode mode) {
  const int num_users = static_cast<int>(channels.h.size());
  const Eigen::Index m = channels.h.at(0).cols();
  Eigen::Index rows = 0;
  for (int j = 0; j < num_users; ++j) {
    if (j == k || (mode == PrecodingMode::kZfDpc && j < k)) continue;
    rows += channels.h[j].rows();
  }
  ComplexMatrix g(rows, m);
  Eigen::Index at = 0;
  for (int j = 0; j < num_users; ++j) {
    if (j == k || (mode == PrecodingMode::kZfDpc && j < k)) continue;
    g.middleRows(at, channels.h[j].rows()) = channels.h[j];
    at += channels.h[j].rows();
  }
  return g;
}

void complement_basis(const ChannelSet& channels, int k, PrecodingMode mode,
                      ComplexMatrix* interference, ComplexMatrix* null) {
  const ComplexMatrix g = interference_stack(channels, k, mode);
  const Eigen::Index m = g.cols();
  if (g.rows() == 0) {
    *interference = ComplexMatrix(m, 0);
    *null = ComplexMatrix::Identity(m, m);
    return;
  }
  require_finite(g, "complement_basis");
  Eigen::JacobiSVD<ComplexMatrix> svd(g, Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  const double tol = 1e-10 * static_cast<double>(std::max(g.rows(), m)) * sv(0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;
  if (rank >= m) {
    std::ostringstream os;
    os << "user " << k << ": interference channels have rank " << rank
       << " >= M = " << m << ", no zero-forcing directions remain";
    throw InfeasibleProblem(os.str());
  }
  *interference = svd.matrixV().leftCols(rank);
  *null = svd.matrixV().rightCols(m - rank);
}

ComplexMatrix complement_basis(const ChannelSet& channels, int k, PrecodingMode mode) {
  ComplexMatrix interference, null;
  complement_basis(channels, k, mode, &interference, &null);
  return null;
}

ConstraintMasks build_constraint_masks(const SystemConfig& config) {
  ConstraintMasks masks;
  const int m = config.total_antennas();
  masks.group_count = config.group_count();
  masks.group_of_antenna.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    int group = 0;
    switch (config.scheme) {
      case ConstraintScheme::kPerBs: group = i / config.antennas_per_bs; break;
      case ConstraintScheme::kPerAntenna: group = i; break;
      case ConstraintScheme::kSumPower: group = 0; break;
    }
    masks.group_of_antenna[static_cast<std::size_t>(i)] = group;
  }
  return masks;
}

ProblemInstance make_problem(const SystemConfig& config, ChannelSet channels) {
  config.validate();
  const int m = config.total_antennas();
  if (static_cast<int>(channels.h.size()) != config.num_ms) {
    throw ContractViolation("channel set does not hold K matrices");
  }
  for (const auto& h : channels.h) {
    if (h.rows() != config.antennas_per_ms || h.cols() != m) {
      throw ContractViolation("channel matrix is not N x M");
    }
    require_finite(h, "make_problem");
  }
  ProblemInstance problem;
  problem.config = config;
  problem.channels = std::move(channels);
  problem.masks = build_constraint_masks(config);
  problem.bases.interference.resize(static_cast<std::size_t>(config.num_ms));
  problem.bases.null.resize(static_cast<std::size_t>(config.num_ms));
  for (int k = 0; k < config.num_ms; ++k) {
    complement_basis(problem.channels, k, config.mode, &problem.bases.interference[k],
                     &problem.bases.null[k]);
  }
  return problem;
}

ProblemInstance make_problem(const SystemConfig& config, std::uint64_t seed) {
  config.validate();
  return make_problem(config, generate_channels(config, seed));
}

}  // namespace bdprecode
