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

// Price search shared by the optimal and suboptimal solvers. Both reduce
// to minimizing a dual function over mu >= 0 whose oracle returns, for a
// price vector, either an infeasibility cut or the dual value together
// with the per-group power usage of the maximizing primal point.

#ifndef BDPRECODE_SRC_DUAL_LOOP_HPP_
#define BDPRECODE_SRC_DUAL_LOOP_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "bdprecode/bd_optimal.hpp"
#include "bdprecode/dual_solver.hpp"
#include "bdprecode/model.hpp"

namespace bdprecode::detail {

struct DualEvaluation {
  bool bounded = true;
  RealVector cut;
  double value = 0.0;
  RealVector usage;  // per group
  double weighted_rate = 0.0;
};

struct PriceSearch {
  RealVector mu;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double kkt_residual = 0.0;
  std::vector<IterationRecord> history;
};

inline RealVector group_budgets(const ProblemInstance& problem) {
  RealVector budgets(problem.num_groups());
  for (int a = 0; a < problem.num_groups(); ++a) budgets(a) = problem.config.budget(a);
  return budgets;
}

inline double kkt_residual(const RealVector& mu, const RealVector& usage,
                           const RealVector& budgets) {
  double worst = 0.0;
  for (Eigen::Index a = 0; a < mu.size(); ++a) {
    const double slack = (budgets(a) - usage(a)) / budgets(a);
    worst = std::max(worst, std::abs(std::min(mu(a), slack)));
  }
  return worst;
}

template <typename Evaluate>
PriceSearch run_price_search(const ProblemInstance& problem, const SolveOptions& options,
                             Evaluate&& evaluate) {
  const RealVector budgets = group_budgets(problem);
  const int groups = problem.num_groups();
  const RealVector mu0 = RealVector::Constant(groups, options.initial_mu);

  double radius = options.initial_radius;
  double scale = 1.0;
  const DualEvaluation first = evaluate(mu0);
  if (first.bounded) {
    scale = std::max(1.0, std::abs(first.value));
    if (radius <= 0.0) {
      // g(mu) >= sum_a mu_a P_a >= min_a P_a * ||mu||_1 and g(mu*) <= g(mu0).
      radius = (first.value / budgets.minCoeff() + mu0.norm()) * (1.0 + 1e-6) + 1e-9;
    }
  } else if (radius <= 0.0) {
    radius = std::max(10.0, 10.0 * problem.num_users() * problem.config.max_weight());
  }

  PriceSearch out;
  std::vector<IterationRecord> records;
  double best_kkt = std::numeric_limits<double>::infinity();
  RealVector kkt_mu = mu0;
  double kkt_value = first.bounded ? first.value : std::numeric_limits<double>::infinity();
  const DualOracle oracle = [&](const RealVector& mu) {
    DualEvaluation e = evaluate(mu);
    if (!e.bounded) return OracleResponse::Infeasible(std::move(e.cut));
    const double kkt = kkt_residual(mu, e.usage, budgets);
    if (kkt < best_kkt) {
      best_kkt = kkt;
      kkt_mu = mu;
      kkt_value = e.value;
    }
    if (options.record_history) {
      IterationRecord rec;
      rec.mu = mu;
      rec.dual_value = e.value;
      rec.weighted_rate = e.weighted_rate;
      rec.group_powers = e.usage;
      records.push_back(std::move(rec));
    }
    return OracleResponse::Value(e.value, budgets - e.usage);
  };

  EllipsoidOptions eopts;
  eopts.tol = options.tol * scale;
  eopts.keep_trace = options.record_history;
  int remaining = options.max_iter;
  EllipsoidState state = initial_ellipsoid(mu0, radius);
  std::size_t matched = 0;

  auto run_pass = [&]() {
    eopts.max_iter = remaining;
    MinimizeResult pass = resume(oracle, std::move(state), eopts);
    remaining -= pass.iterations;
    out.iterations += pass.iterations;
    for (const DualState& s : pass.trace) {
      if (s.cut == CutKind::kObjective && matched < records.size()) {
        records[matched++].iteration = s.iteration;
      }
    }
    state = std::move(pass.state);
    return pass;
  };

  // First pass: certified dual gap. Second pass: keep cutting until the
  // complementarity residual of some evaluated center is small.
  out.converged = run_pass().converged;
  if (best_kkt > options.kkt_tol && remaining > 0) {
    eopts.stop_on_gap = false;
    eopts.stop = [&] { return best_kkt <= options.kkt_tol; };
    run_pass();
  }
  out.kkt_residual = best_kkt;
  out.mu = kkt_mu;
  out.value = kkt_value;
  out.history = std::move(records);
  return out;
}

}  // namespace bdprecode::detail

#endif  // BDPRECODE_SRC_DUAL_LOOP_HPP_
