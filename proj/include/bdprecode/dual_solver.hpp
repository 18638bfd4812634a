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

// Central-cut ellipsoid method for minimizing a convex function over the
// nonnegative orthant, given a value-and-subgradient oracle.

#ifndef BDPRECODE_DUAL_SOLVER_HPP_
#define BDPRECODE_DUAL_SOLVER_HPP_

#include <functional>
#include <limits>
#include <vector>

#include "bdprecode/numerics.hpp"

namespace bdprecode {

struct OracleResponse {
  enum class Kind { kValue, kInfeasible };

  Kind kind = Kind::kValue;
  double value = 0.0;
  // Subgradient for kValue. For kInfeasible a cut direction c such that the
  // optimum lies in { x : c^T (x - query) <= 0 }.
  RealVector vector;

  static OracleResponse Value(double value, RealVector subgradient) {
    return {Kind::kValue, value, std::move(subgradient)};
  }
  static OracleResponse Infeasible(RealVector cut) {
    return {Kind::kInfeasible, std::numeric_limits<double>::infinity(), std::move(cut)};
  }
};

using DualOracle = std::function<OracleResponse(const RealVector&)>;

enum class CutKind { kObjective, kNonnegativity, kOracleInfeasible };

// Snapshot after one iteration.
struct DualState {
  int iteration = 0;
  RealVector center;        // query point of this iteration
  RealMatrix shape;         // ellipsoid matrix before the cut (empty unless kept)
  CutKind cut = CutKind::kObjective;
  double value = std::numeric_limits<double>::quiet_NaN();  // f(center) if evaluated
  double best_value = std::numeric_limits<double>::infinity();
  RealVector best_mu;
};

// Resumable ellipsoid { x : (x - c)^T (B B^T)^{-1} (x - c) <= 1 }.
struct EllipsoidState {
  RealVector center;
  RealMatrix factor;  // B
  int iteration = 0;
  double best_value = std::numeric_limits<double>::infinity();
  RealVector best_mu;
  RealVector best_subgradient;
  // Certified lower bound on the minimum: the max over objective cuts of
  // f(c) - sqrt(g^T B B^T g), and of the best point's subgradient bound
  // minimized over the current ellipsoid.
  double lower_bound = -std::numeric_limits<double>::infinity();

  RealMatrix shape() const { return factor * factor.transpose(); }
};

struct EllipsoidOptions {
  double tol = 1e-6;     // absolute bound on best_value - minimum
  int max_iter = 5000;   // per call
  bool keep_trace = true;
  bool keep_shape = false;  // store the shape matrix in every trace entry
  // When false the gap test is skipped and only max_iter, `stop` or a
  // collapsed ellipsoid end the call.
  bool stop_on_gap = true;
  // Checked after every iteration.
  std::function<bool()> stop;
};

struct MinimizeResult {
  RealVector mu;       // best center seen with a finite value
  double value = std::numeric_limits<double>::infinity();
  double lower_bound = -std::numeric_limits<double>::infinity();
  bool converged = false;
  // The ellipsoid shrank below double resolution around its center.
  bool collapsed = false;
  int iterations = 0;  // performed by this call
  std::vector<DualState> trace;
  EllipsoidState state;  // for resume()

  double gap_bound() const { return value - lower_bound; }
};

// Ball of the given radius around initial_mu.
EllipsoidState initial_ellipsoid(const RealVector& initial_mu, double initial_radius);

// Query order per iteration: a negative coordinate produces the cut
// -e_a (lowest index first); otherwise the oracle is called and either its
// infeasibility cut or the subgradient cut is applied. Stops once
// value - lower_bound <= tol. In one dimension the central cut is exact
// bisection of the current interval.
MinimizeResult minimize(const DualOracle& oracle, const RealVector& initial_mu,
                        double initial_radius, const EllipsoidOptions& options);

// Continues from a previous state, e.g. with a tighter tolerance.
MinimizeResult resume(const DualOracle& oracle, EllipsoidState state,
                      const EllipsoidOptions& options);

// Exact volume ratio of one central cut in dimension n >= 2:
// n/(n+1) * (n^2/(n^2-1))^((n-1)/2). Always below exp(-1/(2(n+1))).
double cut_volume_ratio(int n);

}  // namespace bdprecode

#endif  // BDPRECODE_DUAL_SOLVER_HPP_
