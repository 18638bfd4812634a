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

// Solver-agnostic metrics and an independent reference optimizer.

#ifndef BDPRECODE_EVALUATE_HPP_
#define BDPRECODE_EVALUATE_HPP_

#include <vector>

#include "bdprecode/model.hpp"
#include "bdprecode/numerics.hpp"

namespace bdprecode {

struct Metrics {
  double weighted_sum_rate = 0.0;  // nats
  RealVector per_user_rates;
  RealVector per_group_powers;
  int active_groups = 0;  // |P_a - power_a| < 1e-6 P_a
  // max over k and protected j of ||H_j S_k H_j^H||_F
  double max_zf_residual = 0.0;
  double min_covariance_eigenvalue = 0.0;
};

Metrics metrics(const std::vector<ComplexMatrix>& covariances, const ProblemInstance& problem);

int count_active_groups(const RealVector& powers, const ProblemInstance& problem,
                        double relative_tol = 1e-6);

struct OracleOptions {
  double gap_tol = 1e-9;        // certified bound on optimum - value, relative to max(1, value)
  double newton_tol = 1e-10;    // half squared Newton decrement ending a centering phase
  double barrier_growth = 10.0;
  int max_centering_steps = 200;
  int max_newton_steps = 50000;
};

struct OracleResult {
  double primal_value = 0.0;
  double gap_bound = 0.0;  // (number of barrier terms) / t
  bool converged = false;
  int newton_steps = 0;
  std::vector<ComplexMatrix> covariances;  // S_k = V~ Q_k V~^H
};

// Log-barrier interior-point method on the reduced problem
//   max sum_k w_k log|I + H_k V~_k Q_k V~_k^H H_k^H|
//   s.t. sum_k Tr(B_a V~_k Q_k V~_k^H) <= P_a,  Q_k > 0,
// with damped Newton centering over a real parameterization of each
// Hermitian Q_k. Independent of the dual decomposition used by the
// solvers; intended for small instances (M <= 6, K <= 3).
OracleResult oracle_solve(const ProblemInstance& problem, const OracleOptions& options = {});

}  // namespace bdprecode

#endif  // BDPRECODE_EVALUATE_HPP_
