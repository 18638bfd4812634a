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

#include "bdprecode/bd_optimal.hpp"

#include <algorithm>
#include <cmath>

#include "dual_loop.hpp"

namespace bdprecode {

RealVector waterfill(double weight, const RealVector& sigma) {
  RealVector lambda(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    lambda(i) = std::max(0.0, weight - 1.0 / (sigma(i) * sigma(i)));
  }
  return lambda;
}

InnerSolution inner_solution(const RealVector& mu, int k, const ProblemInstance& problem) {
  if (mu.size() != problem.num_groups() || !mu.allFinite()) {
    throw ContractViolation("inner_solution: price vector has wrong size or is not finite");
  }
  const ComplexMatrix& basis = problem.bases.null[static_cast<std::size_t>(k)];
  const ComplexMatrix& h = problem.channels.h[static_cast<std::size_t>(k)];
  const RealVector prices = problem.masks.weighted_diagonal(mu);
  const double floor = 1e-12 * (1.0 + mu.cwiseAbs().maxCoeff());

  InnerSolution out;
  const ComplexMatrix cost =
      hermitian_part(basis.adjoint() * prices.cast<Complex>().asDiagonal() * basis);
  const HermitianEigen eig = hermitian_eigen(cost);
  if (eig.values(0) <= floor) {
    // A direction of V~ with (near) zero price: the subproblem is unbounded
    // and any optimal mu must price that direction, c^T mu >= c^T mu_now.
    out.bounded = false;
    const ComplexVector direction = basis * eig.vectors.col(0);
    const RealVector energy = problem.masks.group_energies(direction);
    out.cut = -energy / energy.norm();
    return out;
  }

  out.whitening = psd_inv_sqrt(eig, floor);
  const ComplexMatrix effective = h * basis * out.whitening;
  const ReducedSvd svd = reduced_svd(effective);
  out.svd = {svd.u, svd.singular_values, svd.v};
  const double weight = problem.config.weight(k);
  out.lambda = waterfill(weight, svd.singular_values);

  out.rate = 0.0;
  double power = 0.0;
  for (Eigen::Index i = 0; i < out.lambda.size(); ++i) {
    const double s2 = svd.singular_values(i) * svd.singular_values(i);
    out.rate += std::log1p(s2 * out.lambda(i));
    power += out.lambda(i);
  }
  out.contribution = weight * out.rate - power;

  const ComplexMatrix whitened_dirs = out.whitening * svd.v;  // W V^
  const RealVector root = out.lambda.cwiseSqrt();
  const ComplexMatrix factor = whitened_dirs * root.cast<Complex>().asDiagonal();
  out.q = factor * factor.adjoint();
  out.precoder = basis * factor;
  out.usage = RealVector::Zero(problem.num_groups());
  for (Eigen::Index m = 0; m < out.precoder.rows(); ++m) {
    out.usage(problem.masks.group_of_antenna[static_cast<std::size_t>(m)]) +=
        out.precoder.row(m).squaredNorm();
  }
  return out;
}

namespace {

detail::DualEvaluation evaluate_dual(const RealVector& mu, const ProblemInstance& problem,
                                     std::vector<InnerSolution>* inner) {
  detail::DualEvaluation e;
  e.usage = RealVector::Zero(problem.num_groups());
  if (inner) inner->clear();
  double value = 0.0;
  for (int k = 0; k < problem.num_users(); ++k) {
    InnerSolution sol = inner_solution(mu, k, problem);
    if (!sol.bounded) {
      e.bounded = false;
      e.cut = std::move(sol.cut);
      return e;
    }
    value += sol.contribution;
    e.usage += sol.usage;
    e.weighted_rate += problem.config.weight(k) * sol.rate;
    if (inner) inner->push_back(std::move(sol));
  }
  for (int a = 0; a < problem.num_groups(); ++a) value += mu(a) * problem.config.budget(a);
  e.value = value;
  return e;
}

}  // namespace

OracleResponse dual_oracle(const RealVector& mu, const ProblemInstance& problem) {
  detail::DualEvaluation e = evaluate_dual(mu, problem, nullptr);
  if (!e.bounded) return OracleResponse::Infeasible(std::move(e.cut));
  return OracleResponse::Value(e.value, detail::group_budgets(problem) - e.usage);
}

Solution solve_optimal(const ProblemInstance& problem, const SolveOptions& options) {
  detail::PriceSearch search = detail::run_price_search(
      problem, options,
      [&](const RealVector& mu) { return evaluate_dual(mu, problem, nullptr); });

  std::vector<InnerSolution> inner;
  const detail::DualEvaluation final_eval = evaluate_dual(search.mu, problem, &inner);
  if (!final_eval.bounded) {
    throw NumericFailure("solve_optimal: dual search ended at an unbounded price vector");
  }
  const RealVector budgets = detail::group_budgets(problem);

  Solution sol;
  sol.method = "optimal-A1";
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

  const int users = problem.num_users();
  sol.rates = RealVector::Zero(users);
  sol.group_powers = final_eval.usage * sol.power_scale;
  for (int k = 0; k < users; ++k) {
    InnerSolution& in = inner[static_cast<std::size_t>(k)];
    const RealVector lambda = in.lambda * sol.power_scale;
    const ComplexMatrix precoder = in.precoder * std::sqrt(sol.power_scale);
    double rate = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      rate += std::log1p(in.svd.sigma(i) * in.svd.sigma(i) * lambda(i));
    }
    sol.rates(k) = rate;
    sol.primal_value += problem.config.weight(k) * rate;
    sol.covariances.push_back(precoder * precoder.adjoint());
    sol.precoders.push_back(precoder);
    sol.allocations.push_back(lambda);
    sol.channel_svds.push_back(std::move(in.svd));
  }
  sol.duality_gap = sol.dual_value - sol.primal_value;
  return sol;
}

DiagonalizedChannel diagonalized_form(const Solution& solution, const ProblemInstance& problem,
                                      int k) {
  (void)problem;
  const auto idx = static_cast<std::size_t>(k);
  const EffectiveChannelSvd& svd = solution.channel_svds.at(idx);
  DiagonalizedChannel out;
  out.decoder = svd.u.adjoint();
  out.gains = svd.sigma.cwiseProduct(solution.allocations.at(idx).cwiseSqrt());
  return out;
}

int positive_price_bound(const ProblemInstance& problem) {
  const SystemConfig& c = problem.config;
  int group_size = 1;
  switch (c.scheme) {
    case ConstraintScheme::kPerBs: group_size = c.antennas_per_bs; break;
    case ConstraintScheme::kPerAntenna: group_size = 1; break;
    case ConstraintScheme::kSumPower: group_size = c.total_antennas(); break;
  }
  Eigen::Index widest = 0;
  for (const auto& basis : problem.bases.null) widest = std::max(widest, basis.cols());
  return static_cast<int>((widest + group_size - 1) / group_size);
}

int count_positive(const RealVector& mu, double threshold) {
  return static_cast<int>((mu.array() > threshold).count());
}

}  // namespace bdprecode
