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

#include "bdprecode/zfbf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bdprecode/bd_suboptimal.hpp"

namespace bdprecode {
namespace {

void require_miso(const ProblemInstance& problem, const char* what) {
  if (problem.config.antennas_per_ms != 1) {
    throw ContractViolation(std::string(what) + ": requires single-antenna receivers (N = 1)");
  }
}

void finish(const ProblemInstance& problem, BeamSet* set) {
  const int users = problem.num_users();
  set->rates = RealVector::Zero(users);
  set->group_powers = RealVector::Zero(problem.num_groups());
  set->weighted_sum_rate = 0.0;
  for (int k = 0; k < users; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const Complex gain = (problem.channels.h[idx] * set->beams[idx])(0);
    set->rates(k) = std::log1p(std::norm(gain));
    set->weighted_sum_rate += problem.config.weight(k) * set->rates(k);
    set->group_powers += problem.masks.group_energies(set->beams[idx]);
  }
}

}  // namespace

ComplexVector fix_global_phase(const ComplexVector& v) {
  if (v.size() == 0) return v;
  Eigen::Index at = 0;
  v.cwiseAbs().maxCoeff(&at);
  if (std::abs(v(at)) == 0.0) return v;
  const Complex rotation = std::conj(v(at)) / std::abs(v(at));
  return v * rotation;
}

double collinearity(const ComplexVector& a, const ComplexVector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 && nb == 0.0) return 1.0;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::abs(a.dot(b)) / (na * nb);
}

BeamSet optimal_miso_beams(const ProblemInstance& problem, const SolveOptions& options) {
  require_miso(problem, "optimal_miso_beams");
  return optimal_miso_beams(problem, solve_optimal(problem, options));
}

BeamSet optimal_miso_beams(const ProblemInstance& problem, const Solution& solution) {
  require_miso(problem, "optimal_miso_beams");
  BeamSet set;
  set.method = BeamMethod::kOptimalPerGroup;
  set.mu = solution.mu;
  set.converged = solution.converged;
  const RealVector prices = problem.masks.weighted_diagonal(solution.mu);

  for (int k = 0; k < problem.num_users(); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const HermitianEigen eig = hermitian_eigen(solution.covariances[idx]);
    const Eigen::Index m = eig.values.size();
    const double top = eig.values(m - 1);
    const double second = m > 1 ? eig.values(m - 2) : 0.0;
    ComplexVector beam = ComplexVector::Zero(m);
    if (top > 1e-300) {
      if (second > 1e-8 * top) {
        std::ostringstream os;
        os << "optimal_miso_beams: covariance of user " << k << " is not rank one ("
           << second << " vs " << top << ")";
        throw NumericFailure(os.str());
      }
      beam = fix_global_phase(eig.vectors.col(m - 1) * std::sqrt(top));
    }

    const double lambda = solution.allocations[idx].size() ? solution.allocations[idx](0) : 0.0;
    if (lambda > 0.0) {
      const ComplexMatrix& basis = problem.bases.null[idx];
      const ComplexMatrix cost = basis.adjoint() * prices.cast<Complex>().asDiagonal() * basis;
      const ComplexVector h = problem.channels.h[idx].row(0).adjoint();
      const double sigma = solution.channel_svds[idx].sigma(0);
      const ComplexVector closed =
          fix_global_phase(basis * cost.ldlt().solve(basis.adjoint() * h) *
                           (std::sqrt(lambda) / sigma));
      if ((closed - beam).norm() > 1e-6 * std::max(1.0, beam.norm())) {
        std::ostringstream os;
        os << "optimal_miso_beams: user " << k
           << " beam disagrees with the closed form by " << (closed - beam).norm();
        throw NumericFailure(os.str());
      }
    }
    set.beams.push_back(std::move(beam));
  }
  finish(problem, &set);
  return set;
}

BeamSet pseudo_inverse_beams(const ProblemInstance& problem, const SolveOptions& options) {
  require_miso(problem, "pseudo_inverse_beams");
  const int users = problem.num_users();
  const int m = problem.num_antennas();
  ComplexMatrix stacked(users, m);
  for (int k = 0; k < users; ++k) stacked.row(k) = problem.channels.h[static_cast<std::size_t>(k)];
  const ReducedSvd svd = reduced_svd(stacked);
  if (svd.rank() < users) {
    throw InfeasibleProblem("pseudo_inverse_beams: stacked channel is rank deficient");
  }
  const ComplexMatrix pinv =
      svd.v * svd.singular_values.cwiseInverse().cast<Complex>().asDiagonal() * svd.u.adjoint();

  std::vector<ComplexMatrix> directions;
  std::vector<RealVector> gains;
  for (int k = 0; k < users; ++k) {
    const double norm = pinv.col(k).norm();
    directions.push_back(pinv.col(k) / norm);
    gains.push_back(RealVector::Constant(1, 1.0 / norm));
  }

  BeamSet set;
  set.method = BeamMethod::kPseudoInverse;
  std::vector<RealVector> powers;
  if (problem.config.scheme == ConstraintScheme::kSumPower) {
    // Weighted water-filling over the K scalar channels: find the level nu
    // with sum_k max(0, w_k / nu - 1 / g_k^2) = P.
    const double budget = problem.config.budget(0);
    auto used = [&](double nu) {
      double total = 0.0;
      for (int k = 0; k < users; ++k) {
        const double g = gains[static_cast<std::size_t>(k)](0);
        total += std::max(0.0, problem.config.weight(k) / nu - 1.0 / (g * g));
      }
      return total;
    };
    double lo = 0.0;
    double hi = 1.0;
    while (used(hi) > budget) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (used(mid) > budget ? lo : hi) = mid;
    }
    for (int k = 0; k < users; ++k) {
      const double g = gains[static_cast<std::size_t>(k)](0);
      powers.push_back(RealVector::Constant(
          1, std::max(0.0, problem.config.weight(k) / hi - 1.0 / (g * g))));
    }
    set.mu = RealVector::Constant(1, hi);
  } else {
    bool ok = true;
    powers = optimize_stream_powers(problem, directions, gains, options, &set.mu, &ok);
    set.converged = ok;
  }
  for (int k = 0; k < users; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    set.beams.push_back(fix_global_phase(directions[idx].col(0) * std::sqrt(powers[idx](0))));
  }
  finish(problem, &set);
  return set;
}

}  // namespace bdprecode
