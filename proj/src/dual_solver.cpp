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

#include "bdprecode/dual_solver.hpp"

#include <cmath>
#include <sstream>

namespace bdprecode {
namespace {

// Applies the central cut { x : g^T (x - c) <= 0 } to the ellipsoid.
// Returns sqrt(g^T B B^T g).
double apply_cut(EllipsoidState& state, const RealVector& g) {
  const Eigen::Index n = state.center.size();
  const RealVector bg = state.factor.transpose() * g;
  const double norm = bg.norm();
  if (!std::isfinite(norm)) {
    throw NumericFailure("ellipsoid: non-finite cut");
  }
  if (norm == 0.0) {
    if (g.norm() == 0.0) return 0.0;
    throw NumericFailure("ellipsoid: shape matrix lost positive definiteness");
  }
  const RealVector p = bg / norm;
  const RealVector bp = state.factor * p;
  if (n == 1) {
    state.center -= 0.5 * bp;
    state.factor *= 0.5;
    return norm;
  }
  const double nd = static_cast<double>(n);
  const double a = nd / std::sqrt(nd * nd - 1.0);
  const double b = nd / (nd + 1.0);
  state.center -= bp / (nd + 1.0);
  state.factor = a * state.factor + (b - a) * bp * p.transpose();
  return norm;
}

}  // namespace

double cut_volume_ratio(int n) {
  const double nd = static_cast<double>(n);
  return nd / (nd + 1.0) * std::pow(nd * nd / (nd * nd - 1.0), (nd - 1.0) / 2.0);
}

EllipsoidState initial_ellipsoid(const RealVector& initial_mu, double initial_radius) {
  if (initial_mu.size() < 1) throw ContractViolation("ellipsoid: dimension must be >= 1");
  if (!(initial_radius > 0.0)) throw ContractViolation("ellipsoid: radius must be positive");
  EllipsoidState state;
  state.center = initial_mu;
  state.factor = RealMatrix::Identity(initial_mu.size(), initial_mu.size()) * initial_radius;
  state.best_mu = initial_mu;
  return state;
}

MinimizeResult minimize(const DualOracle& oracle, const RealVector& initial_mu,
                        double initial_radius, const EllipsoidOptions& options) {
  return resume(oracle, initial_ellipsoid(initial_mu, initial_radius), options);
}

MinimizeResult resume(const DualOracle& oracle, EllipsoidState state,
                      const EllipsoidOptions& options) {
  if (!(options.tol > 0.0)) throw ContractViolation("ellipsoid: tol must be positive");
  const Eigen::Index n = state.center.size();
  MinimizeResult result;

  for (int it = 0; it < options.max_iter; ++it) {
    DualState snapshot;
    snapshot.iteration = state.iteration;
    snapshot.center = state.center;
    if (options.keep_shape) snapshot.shape = state.shape();

    RealVector cut;
    Eigen::Index negative = -1;
    for (Eigen::Index a = 0; a < n; ++a) {
      if (state.center(a) < 0.0) {
        negative = a;
        break;
      }
    }
    if (negative >= 0) {
      cut = RealVector::Zero(n);
      cut(negative) = -1.0;
      snapshot.cut = CutKind::kNonnegativity;
      apply_cut(state, cut);
    } else {
      OracleResponse response = oracle(state.center);
      if (response.vector.size() != n || !response.vector.allFinite()) {
        std::ostringstream os;
        os << "ellipsoid: oracle returned a vector of size " << response.vector.size()
           << " (expected " << n << ") or with non-finite entries";
        throw NumericFailure(os.str());
      }
      if (response.kind == OracleResponse::Kind::kInfeasible) {
        snapshot.cut = CutKind::kOracleInfeasible;
        apply_cut(state, response.vector);
      } else {
        snapshot.cut = CutKind::kObjective;
        snapshot.value = response.value;
        if (response.value < state.best_value) {
          state.best_value = response.value;
          state.best_mu = state.center;
          state.best_subgradient = response.vector;
        }
        const double radius = apply_cut(state, response.vector);
        state.lower_bound = std::max(state.lower_bound, response.value - radius);
      }
    }
    if (state.best_subgradient.size() == n) {
      const RealVector& g = state.best_subgradient;
      const double bound = state.best_value + g.dot(state.center - state.best_mu) -
                           (state.factor.transpose() * g).norm();
      state.lower_bound = std::max(state.lower_bound, bound);
    }
    ++state.iteration;
    ++result.iterations;
    snapshot.best_value = state.best_value;
    snapshot.best_mu = state.best_mu;
    if (options.keep_trace) result.trace.push_back(std::move(snapshot));

    if (state.best_value - state.lower_bound <= options.tol) {
      result.converged = true;
      if (options.stop_on_gap) break;
    }
    if (options.stop && options.stop()) break;
    if (state.factor.norm() <= 1e-15 * (1.0 + state.center.norm())) {
      result.collapsed = true;
      break;
    }
  }
  result.mu = state.best_mu;
  result.value = state.best_value;
  result.lower_bound = state.lower_bound;
  result.state = std::move(state);
  return result;
}

}  // namespace bdprecode
