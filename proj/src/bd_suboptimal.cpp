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

#include "bdprecode/bd_suboptimal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dual_loop.hpp"

namespace bdprecode {
namespace {

struct StreamProblem {
  std::vector<RealMatrix> coupling;  // groups x streams, per user
  std::vector<RealVector> sigma;     // per user
};

SuboptimalAllocation allocate(const RealVector& mu, const ProblemInstance& problem,
                              const StreamProblem& streams) {
  if (mu.size() != problem.num_groups() || !mu.allFinite()) {
    throw ContractViolation("power allocation: price vector has wrong size or is not finite");
  }
  const double floor = 1e-12 * (1.0 + mu.cwiseAbs().maxCoeff());
  SuboptimalAllocation out;
  out.coupling = streams.coupling;
  for (std::size_t k = 0; k < streams.sigma.size(); ++k) {
    const RealVector& sigma = streams.sigma[k];
    const RealMatrix& c = streams.coupling[k];
    const double weight = problem.config.weight(static_cast<int>(k));
    RealVector lambda = RealVector::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      if (sigma(i) <= 0.0) continue;
      const double price = mu.dot(c.col(i));
      if (price <= floor) {
        out.bounded = false;
        out.cut = -c.col(i) / c.col(i).norm();
        return out;
      }
      lambda(i) = std::max(0.0, weight / price - 1.0 / (sigma(i) * sigma(i)));
    }
    out.lambda.push_back(std::move(lambda));
  }
  return out;
}

detail::DualEvaluation evaluate(const RealVector& mu, const ProblemInstance& problem,
                                const StreamProblem& streams) {
  detail::DualEvaluation e;
  const SuboptimalAllocation alloc = allocate(mu, problem, streams);
  if (!alloc.bounded) {
    e.bounded = false;
    e.cut = alloc.cut;
    return e;
  }
  e.usage = RealVector::Zero(problem.num_groups());
  double value = 0.0;
  for (std::size_t k = 0; k < alloc.lambda.size(); ++k) {
    const RealVector& lambda = alloc.lambda[k];
    const RealVector& sigma = streams.sigma[k];
    const double weight = problem.config.weight(static_cast<int>(k));
    double rate = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      rate += std::log1p(sigma(i) * sigma(i) * lambda(i));
    }
    const RealVector used = streams.coupling[k] * lambda;
    value += weight * rate - mu.dot(used);
    e.usage += used;
    e.weighted_rate += weight * rate;
  }
  for (int a = 0; a < problem.num_groups(); ++a) value += mu(a) * problem.config.budget(a);
  e.value = value;
  return e;
}

RealMatrix coupling_of(const ProblemInstance& problem, const ComplexMatrix& directions) {
  RealMatrix c = RealMatrix::Zero(problem.num_groups(), directions.cols());
  for (Eigen::Index i = 0; i < directions.cols(); ++i) {
    c.col(i) = problem.masks.group_energies(directions.col(i));
  }
  return c;
}

}  // namespace

ProjectedChannelSvd projected_channel_svd(const ProblemInstance& problem, int k) {
  const auto idx = static_cast<std::size_t>(k);
  const ComplexMatrix& basis = problem.bases.null.at(idx);
  const ComplexMatrix projected = problem.channels.h.at(idx) * basis * basis.adjoint();
  const ReducedSvd svd = reduced_svd(projected);
  if (svd.rank() < problem.config.antennas_per_ms) {
    std::ostringstream os;
    os << "projected channel of user " << k << " has rank " << svd.rank() << " < N";
    throw NumericFailure(os.str());
  }
  return {svd.u, svd.singular_values, svd.v};
}

std::vector<RealMatrix> stream_coupling(const ProblemInstance& problem,
                                        const std::vector<ProjectedChannelSvd>& svds) {
  std::vector<RealMatrix> out;
  for (const auto& svd : svds) out.push_back(coupling_of(problem, svd.v));
  return out;
}

SuboptimalAllocation suboptimal_power_allocation(const RealVector& mu,
                                                 const ProblemInstance& problem,
                                                 const std::vector<ProjectedChannelSvd>& svds) {
  StreamProblem streams;
  streams.coupling = stream_coupling(problem, svds);
  for (const auto& svd : svds) streams.sigma.push_back(svd.sigma);
  return allocate(mu, problem, streams);
}

SuboptimalAllocation suboptimal_power_allocation(const RealVector& mu,
                                                 const ProblemInstance& problem) {
  std::vector<ProjectedChannelSvd> svds;
  for (int k = 0; k < problem.num_users(); ++k) svds.push_back(projected_channel_svd(problem, k));
  return suboptimal_power_allocation(mu, problem, svds);
}

std::vector<RealVector> optimize_stream_powers(const ProblemInstance& problem,
                                               const std::vector<ComplexMatrix>& directions,
                                               const std::vector<RealVector>& gains,
                                               const SolveOptions& options, RealVector* prices,
                                               bool* converged) {
  StreamProblem streams;
  for (std::size_t k = 0; k < directions.size(); ++k) {
    streams.coupling.push_back(coupling_of(problem, directions[k]));
    streams.sigma.push_back(gains.at(k));
  }
  SolveOptions opts = options;
  opts.record_history = false;
  const detail::PriceSearch search = detail::run_price_search(
      problem, opts, [&](const RealVector& mu) { return evaluate(mu, problem, streams); });
  SuboptimalAllocation alloc = allocate(search.mu, problem, streams);
  if (!alloc.bounded) {
    throw NumericFailure("optimize_stream_powers: search ended at an unbounded price vector");
  }
  if (prices) *prices = search.mu;
  if (converged) *converged = search.converged;
  return std::move(alloc.lambda);
}

Solution solve_suboptimal(const ProblemInstance& problem, const SolveOptions& options) {
  std::vector<ProjectedChannelSvd> svds;
  for (int k = 0; k < problem.num_users(); ++k) svds.push_back(projected_channel_svd(problem, k));
  StreamProblem streams;
  streams.coupling = stream_coupling(problem, svds);
  for (const auto& svd : svds) streams.sigma.push_back(svd.sigma);

  detail::PriceSearch search = detail::run_price_search(
      problem, options, [&](const RealVector& mu) { return evaluate(mu, problem, streams); });
  const detail::DualEvaluation final_eval = evaluate(search.mu, problem, streams);
  const SuboptimalAllocation alloc = allocate(search.mu, problem, streams);
  if (!final_eval.bounded || !alloc.bounded) {
    throw NumericFailure("solve_suboptimal: dual search ended at an unbounded price vector");
  }
  const RealVector budgets = detail::group_budgets(problem);

  Solution sol;
  sol.method = "suboptimal-A2";
  sol.mu = search.mu;
  sol.iterations = search.iterations;
  sol.converged = search.converged;
  sol.kkt_residual = search.kkt_residual;
  sol.dual_value = final_eval.value;
  sol.history = std::move(search.history);

  double ratio = 0.0;
  for (int a = 0; a < problem.num_groups(); ++a) {
    ratio = std::max(ratio, final_eval.usage(a) / budgets(a));
  }
  sol.power_scale = ratio > 1.0 ? 1.0 / ratio : 1.0;
  sol.group_powers = final_eval.usage * sol.power_scale;
  sol.rates = RealVector::Zero(problem.num_users());

  for (int k = 0; k < problem.num_users(); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const ProjectedChannelSvd& svd = svds[idx];
    const RealVector lambda = alloc.lambda[idx] * sol.power_scale;
    const ComplexMatrix precoder = svd.v * lambda.cwiseSqrt().cast<Complex>().asDiagonal();
    const ComplexMatrix covariance = precoder * precoder.adjoint();

    double diagonal_rate = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      diagonal_rate += std::log1p(svd.sigma(i) * svd.sigma(i) * lambda(i));
    }
    const ComplexMatrix& h = problem.channels.h[idx];
    const double full_rate = logdet_identity_plus(hermitian_part(h * covariance * h.adjoint()));
    if (std::abs(full_rate - diagonal_rate) > 1e-8 * std::max(1.0, full_rate)) {
      std::ostringstream os;
      os << "solve_suboptimal: user " << k << " rate " << full_rate
         << " disagrees with its scalar sub-channel sum " << diagonal_rate;
      throw NumericFailure(os.str());
    }
    sol.rates(k) = diagonal_rate;
    sol.primal_value += problem.config.weight(k) * diagonal_rate;
    sol.covariances.push_back(covariance);
    sol.precoders.push_back(precoder);
    sol.allocations.push_back(lambda);
    sol.channel_svds.push_back({svd.u, svd.sigma, svd.v});
  }
  sol.duality_gap = sol.dual_value - sol.primal_value;
  return sol;
}

}  // namespace bdprecode
