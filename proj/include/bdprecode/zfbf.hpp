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

// Single-antenna receivers (N = 1): BD reduces to zero-forcing
// beamforming with one vector per user.

#ifndef BDPRECODE_ZFBF_HPP_
#define BDPRECODE_ZFBF_HPP_

#include <vector>

#include "bdprecode/bd_optimal.hpp"
#include "bdprecode/model.hpp"

namespace bdprecode {

enum class BeamMethod { kOptimalPerGroup, kPseudoInverse };

struct BeamSet {
  BeamMethod method = BeamMethod::kOptimalPerGroup;
  std::vector<ComplexVector> beams;  // t_k, length M
  RealVector rates;                  // per user, nats
  RealVector group_powers;
  RealVector mu;                     // prices at the solution (empty if unused)
  double weighted_sum_rate = 0.0;
  bool converged = true;
};

// Rotates v so that its largest-magnitude entry is real and positive.
ComplexVector fix_global_phase(const ComplexVector& v);

// |<a, b>| / (||a|| ||b||); 1 for two zero vectors.
double collinearity(const ComplexVector& a, const ComplexVector& b);

// Extracts t_k from the optimal rank-one covariances and checks it against
// lambda^{1/2} sigma^{-1} V~ (V~^H B_mu V~)^{-1} V~^H h_k. Throws
// NumericFailure if a covariance is not rank one or the two disagree.
BeamSet optimal_miso_beams(const ProblemInstance& problem, const SolveOptions& options = {});
BeamSet optimal_miso_beams(const ProblemInstance& problem, const Solution& solution);

// Beams along the columns of H^+ (H stacks the user channels). Under a sum
// constraint the powers are water-filled directly; under per-group
// constraints they are optimized by the dual price search.
BeamSet pseudo_inverse_beams(const ProblemInstance& problem, const SolveOptions& options = {});

}  // namespace bdprecode

#endif  // BDPRECODE_ZFBF_HPP_
