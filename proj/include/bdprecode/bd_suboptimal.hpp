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

// Suboptimal BD precoding: each user transmits along the right singular
// vectors of its channel projected onto the zero-forcing subspace, and only
// the stream powers are optimized under the per-group budgets.

#ifndef BDPRECODE_BD_SUBOPTIMAL_HPP_
#define BDPRECODE_BD_SUBOPTIMAL_HPP_

#include <vector>

#include "bdprecode/bd_optimal.hpp"
#include "bdprecode/model.hpp"

namespace bdprecode {

// Reduced SVD of H_k V~_k V~_k^H.
struct ProjectedChannelSvd {
  ComplexMatrix u;   // N x N
  RealVector sigma;  // descending, positive
  ComplexMatrix v;   // M x N
};

ProjectedChannelSvd projected_channel_svd(const ProblemInstance& problem, int k);

struct SuboptimalAllocation {
  bool bounded = true;
  RealVector cut;  // set when a stream with positive weight has zero price
  std::vector<RealVector> lambda;  // per user, per stream
  // coupling[k](a, i) = ||v_k[a, i]||^2, the share of stream i's unit power
  // landing in group a.
  std::vector<RealMatrix> coupling;
};

// Per-group power shares of each projected direction.
std::vector<RealMatrix> stream_coupling(const ProblemInstance& problem,
                                        const std::vector<ProjectedChannelSvd>& svds);

// lambda_{k,i} = max(0, w_k / (sum_a mu_a ||v_k[a,i]||^2) - 1 / sigma_{k,i}^2).
SuboptimalAllocation suboptimal_power_allocation(const RealVector& mu,
                                                 const ProblemInstance& problem,
                                                 const std::vector<ProjectedChannelSvd>& svds);
SuboptimalAllocation suboptimal_power_allocation(const RealVector& mu,
                                                 const ProblemInstance& problem);

// Power loading for fixed unit-norm directions (columns of `directions[k]`)
// with scalar gains `gains[k]`, by the same dual price search as the
// optimal solver. Returns the per-stream powers and fills `prices`.
std::vector<RealVector> optimize_stream_powers(const ProblemInstance& problem,
                                               const std::vector<ComplexMatrix>& directions,
                                               const std::vector<RealVector>& gains,
                                               const SolveOptions& options, RealVector* prices,
                                               bool* converged = nullptr);

Solution solve_suboptimal(const ProblemInstance& problem, const SolveOptions& options = {});

}  // namespace bdprecode

#endif  // BDPRECODE_BD_SUBOPTIMAL_HPP_
