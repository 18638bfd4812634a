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

// Optimal block-diagonalization precoding under per-group power
// constraints, solved through Lagrange duality: for fixed prices mu the
// per-user subproblems have a closed-form water-filling solution, and the
// prices are found with the ellipsoid method.

#ifndef BDPRECODE_BD_OPTIMAL_HPP_
#define BDPRECODE_BD_OPTIMAL_HPP_

#include <optional>
#include <string>
#include <vector>

#include "bdprecode/dual_solver.hpp"
#include "bdprecode/model.hpp"
#include "bdprecode/numerics.hpp"

namespace bdprecode {

// SVD of the whitened effective channel H_k V~_k W_k.
struct EffectiveChannelSvd {
  ComplexMatrix u;    // N x r
  RealVector sigma;   // descending, positive
  ComplexMatrix v;    // d_k x r
};

// One evaluated dual point, as recorded during the price search.
struct IterationRecord {
  int iteration = 0;
  RealVector mu;
  double dual_value = 0.0;
  double weighted_rate = 0.0;  // of the unrepaired primal point at mu
  RealVector group_powers;
};

struct Solution {
  std::string method;  // "optimal-A1" or "suboptimal-A2"
  std::vector<ComplexMatrix> covariances;  // S_k, M x M
  std::vector<ComplexMatrix> precoders;    // T_k, M x N
  // Per-user stream gains and decoders: for the optimal solver the SVD of
  // H_k V~_k W_k, for the suboptimal solver that of the projected channel.
  std::vector<EffectiveChannelSvd> channel_svds;
  std::vector<RealVector> allocations;     // lambda_{k,i}
  RealVector rates;                        // per user, nats
  RealVector group_powers;
  double primal_value = 0.0;  // weighted sum-rate
  double dual_value = 0.0;
  double duality_gap = 0.0;
  RealVector mu;
  int iterations = 0;
  bool converged = false;
  // max_a |min(mu_a, s_a / P_a)| at mu.
  double kkt_residual = 0.0;
  // Factor (<= 1) applied to every covariance so that no budget is
  // exceeded; 1 unless the final prices were slightly too low.
  double power_scale = 1.0;
  std::vector<IterationRecord> history;

  double weighted_sum_rate() const { return primal_value; }
};

struct SolveOptions {
  double tol = 1e-6;      // dual gap, relative to max(1, |g(mu0)|)
  double kkt_tol = 1e-9;  // target for Solution::kkt_residual
  // Total ellipsoid iterations. Once the gap test passes, cutting goes on
  // until kkt_tol is met, the ellipsoid collapses or this budget runs out.
  int max_iter = 40000;
  double initial_mu = 0.2;
  // Non-positive: certified radius g(mu0) / min_a P_a + ||mu0||.
  double initial_radius = 0.0;
  bool record_history = true;
};

// lambda_i = max(0, w - 1 / sigma_i^2).
RealVector waterfill(double weight, const RealVector& sigma);

struct InnerSolution {
  bool bounded = true;
  RealVector cut;            // infeasibility cut over mu when unbounded
  ComplexMatrix whitening;   // (V~^H B_mu V~)^{-1/2}
  EffectiveChannelSvd svd;
  RealVector lambda;
  ComplexMatrix q;           // Q_k*, d_k x d_k
  ComplexMatrix precoder;    // V~ W V^ Lambda^{1/2}, M x r
  double contribution = 0.0; // w sum log(1 + s^2 l) - sum l
  double rate = 0.0;         // sum log(1 + s^2 l)
  RealVector usage;          // Tr(B_a V~ Q V~^H) per group
};

// Maximizer of w_k log|I + H_k V~ Q V~^H H_k^H| - Tr(B_mu V~ Q V~^H) over
// Q >= 0. When V~^H B_mu V~ is singular the subproblem is unbounded; the
// returned cut then prices the zero-cost direction.
InnerSolution inner_solution(const RealVector& mu, int k, const ProblemInstance& problem);

// Dual function g(mu) = sum_k contribution_k + sum_a mu_a P_a with
// subgradient s_a = P_a - sum_k usage_{k,a}.
OracleResponse dual_oracle(const RealVector& mu, const ProblemInstance& problem);

Solution solve_optimal(const ProblemInstance& problem, const SolveOptions& options = {});

struct DiagonalizedChannel {
  ComplexMatrix decoder;  // U^_k^H
  RealVector gains;       // sigma_{k,i} * sqrt(lambda_{k,i})
};

// U^_k^H H_k T_k = diag(gains).
DiagonalizedChannel diagonalized_form(const Solution& solution, const ProblemInstance& problem,
                                      int k);

// Lower bound on the number of strictly positive prices at the optimum of
// a BD problem: ceil((M - N(K-1)) / group size).
int positive_price_bound(const ProblemInstance& problem);

int count_positive(const RealVector& mu, double threshold = 1e-6);

}  // namespace bdprecode

#endif  // BDPRECODE_BD_OPTIMAL_HPP_
