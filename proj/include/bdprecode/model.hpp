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

// The cooperative multi-cell downlink viewed as one auxiliary MIMO
// broadcast channel: A base stations with M_B antennas each are stacked
// into a single M = A * M_B antenna transmitter serving K mobiles with N
// antennas each. Antenna m (0-based) belongs to base station m / M_B.

#ifndef BDPRECODE_MODEL_HPP_
#define BDPRECODE_MODEL_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdprecode/numerics.hpp"

namespace bdprecode {

enum class ConstraintScheme { kPerBs, kPerAntenna, kSumPower };
enum class PrecodingMode { kBd, kZfDpc };

std::string to_string(ConstraintScheme scheme);
std::string to_string(PrecodingMode mode);
// Accepts "per-bs", "per-antenna", "sum" (and the to_string spellings).
ConstraintScheme parse_scheme(const std::string& text);
// Accepts "bd", "zf-dpc".
PrecodingMode parse_mode(const std::string& text);

// The requested user count cannot be zero-forced with the available
// transmit antennas.
class InfeasibleProblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SystemConfig {
  int num_bs = 1;           // A
  int antennas_per_bs = 1;  // M_B
  int num_ms = 1;           // K
  int antennas_per_ms = 1;  // N
  double power_budget = 10.0;  // P, linear units, per constraint group
  // w_k; empty means all ones.
  std::vector<double> weights;
  // Optional per-group budgets overriding power_budget; empty means P for
  // every group.
  std::vector<double> group_budgets;
  ConstraintScheme scheme = ConstraintScheme::kPerBs;
  PrecodingMode mode = PrecodingMode::kBd;

  int total_antennas() const { return num_bs * antennas_per_bs; }
  int group_count() const;
  double weight(int k) const;
  double budget(int group) const;
  double max_weight() const;

  // Throws ContractViolation on bad dimensions, budgets or weights and
  // InfeasibleProblem when N * K > M.
  void validate() const;
};

struct ChannelSet {
  std::vector<ComplexMatrix> h;  // H_k, N x M
  std::uint64_t seed = 0;
};

// Diagonal 0/1 selection masks B_a stored as an antenna -> group map.
struct ConstraintMasks {
  std::vector<int> group_of_antenna;
  int group_count = 0;

  // Diagonal of B_a.
  RealVector mask(int group) const;
  // Diagonal of B_mu = sum_a mu_a B_a.
  RealVector weighted_diagonal(const RealVector& mu) const;
  // Tr(B_a X) for every group a.
  RealVector group_traces(const ComplexMatrix& x) const;
  // ||x[a]||^2 for every group a, x a column vector of length M.
  RealVector group_energies(const ComplexVector& x) const;
};

// Per-user orthonormal bases. `interference[k]` spans the row space of
// G_k (the stacked channels user k must not disturb) and `null[k]` spans
// its orthogonal complement, so [interference, null] is unitary.
struct ComplementBasis {
  std::vector<ComplexMatrix> interference;  // V_k, M x rank(G_k)
  std::vector<ComplexMatrix> null;          // V~_k, M x d_k
};

struct ProblemInstance {
  SystemConfig config;
  ChannelSet channels;
  ConstraintMasks masks;
  ComplementBasis bases;

  int num_users() const { return config.num_ms; }
  int num_antennas() const { return config.total_antennas(); }
  int num_groups() const { return masks.group_count; }
  // Users whose channel H_j must see no signal intended for user k.
  std::vector<int> protected_users(int k) const;
};

// I.i.d. CSCG entries with unit variance (real and imaginary parts each
// N(0, 1/2)). The generator is counter based so a (config, seed) pair
// reproduces bit-for-bit on any platform with IEEE doubles:
//
//   key(k, attempt) = splitmix64(seed ^ splitmix64((k << 32) | attempt))
//   word(i)         = splitmix64(key + i * 0x9E3779B97F4A7C15)
//   u(i)            = ((word(i) >> 11) + 0.5) * 2^-53        in (0, 1)
//   entry e of H_k  = sqrt(-ln u(2e)) * exp(j * 2 * pi * u(2e + 1))
//
// with e = row * M + col. A draw without full row rank N is replaced by
// the next attempt.
ChannelSet generate_channels(const SystemConfig& config, std::uint64_t seed);

std::uint64_t splitmix64(std::uint64_t x);

// G_k for user k: every H_j with j != k (BD) or j > k (ZF-DPC), stacked.
// Returns a 0 x M matrix when nothing is stacked.
ComplexMatrix interference_stack(const ChannelSet& channels, int k, PrecodingMode mode);

// Orthonormal basis of the null space of G_k (and of its row space).
// Throws InfeasibleProblem when rank(G_k) >= M.
void complement_basis(const ChannelSet& channels, int k, PrecodingMode mode,
                      ComplexMatrix* interference, ComplexMatrix* null);
ComplexMatrix complement_basis(const ChannelSet& channels, int k, PrecodingMode mode);

ConstraintMasks build_constraint_masks(const SystemConfig& config);

// Validates dimensions and assembles masks and bases.
ProblemInstance make_problem(const SystemConfig& config, ChannelSet channels);
ProblemInstance make_problem(const SystemConfig& config, std::uint64_t seed);

}  // namespace bdprecode

#endif  // BDPRECODE_MODEL_HPP_
