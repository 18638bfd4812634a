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

#include "bdprecode/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bdprecode {

int count_active_groups(const RealVector& powers, const ProblemInstance& problem,
                        double relative_tol) {
  int active = 0;
  for (Eigen::Index a = 0; a < powers.size(); ++a) {
    const double budget = problem.config.budget(static_cast<int>(a));
    if (std::abs(budget - powers(a)) < relative_tol * budget) ++active;
  }
  return active;
}

Metrics metrics(const std::vector<ComplexMatrix>& covariances, const ProblemInstance& problem) {
  const int users = problem.num_users();
  if (static_cast<int>(covariances.size()) != users) {
    throw ContractViolation("metrics: expected one covariance per user");
  }
  Metrics out;
  out.per_user_rates = RealVector::Zero(users);
  out.per_group_powers = RealVector::Zero(problem.num_groups());
  out.min_covariance_eigenvalue = std::numeric_limits<double>::infinity();
  for (int k = 0; k < users; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const ComplexMatrix& s = covariances[idx];
    if (s.rows() != problem.num_antennas() || s.cols() != problem.num_antennas()) {
      throw ContractViolation("metrics: covariance is not M x M");
    }
    const ComplexMatrix& h = problem.channels.h[idx];
    const HermitianEigen eig = hermitian_eigen(s);
    out.min_covariance_eigenvalue = std::min(out.min_covariance_eigenvalue, eig.values(0));
    // Clamp round-off negatives so the rate stays defined for PSD inputs.
    const ComplexMatrix psd = eig.vectors *
                              eig.values.cwiseMax(0.0).cast<Complex>().asDiagonal() *
                              eig.vectors.adjoint();
    out.per_user_rates(k) = logdet_identity_plus(hermitian_part(h * psd * h.adjoint()));
    out.weighted_sum_rate += problem.config.weight(k) * out.per_user_rates(k);
    out.per_group_powers += problem.masks.group_traces(s);
    for (int j : problem.protected_users(k)) {
      const ComplexMatrix& hj = problem.channels.h[static_cast<std::size_t>(j)];
      out.max_zf_residual = std::max(out.max_zf_residual, (hj * s * hj.adjoint()).norm());
    }
  }
  out.active_groups = count_active_groups(out.per_group_powers, problem);
  return out;
}

namespace {

// Real coordinates of a d x d Hermitian matrix: the d diagonal entries,
// then for each p < q the symmetric and antisymmetric parts
// (e_p e_q^T + e_q e_p^T) and i (e_p e_q^T - e_q e_p^T).
class HermitianCoordinates {
 public:
  explicit HermitianCoordinates(Eigen::Index d) : d_(d) {}

  Eigen::Index size() const { return d_ * d_; }

  ComplexMatrix to_matrix(const double* x) const {
    ComplexMatrix q(d_, d_);
    Eigen::Index j = d_;
    for (Eigen::Index p = 0; p < d_; ++p) q(p, p) = x[p];
    for (Eigen::Index p = 0; p < d_; ++p) {
      for (Eigen::Index r = p + 1; r < d_; ++r) {
        q(p, r) = Complex(x[j], x[j + 1]);
        q(r, p) = Complex(x[j], -x[j + 1]);
        j += 2;
      }
    }
    return q;
  }

  // out_j = Re Tr(X E_j).
  void project(const ComplexMatrix& x, double* out) const {
    Eigen::Index j = d_;
    for (Eigen::Index p = 0; p < d_; ++p) out[p] = x(p, p).real();
    for (Eigen::Index p = 0; p < d_; ++p) {
      for (Eigen::Index r = p + 1; r < d_; ++r) {
        out[j] = x(p, r).real() + x(r, p).real();
        out[j + 1] = x(p, r).imag() - x(r, p).imag();
        j += 2;
      }
    }
  }

  ComplexMatrix basis(Eigen::Index j) const {
    ComplexMatrix e = ComplexMatrix::Zero(d_, d_);
    if (j < d_) {
      e(j, j) = 1.0;
      return e;
    }
    Eigen::Index at = d_;
    for (Eigen::Index p = 0; p < d_; ++p) {
      for (Eigen::Index r = p + 1; r < d_; ++r) {
        if (j == at) {
          e(p, r) = 1.0;
          e(r, p) = 1.0;
          return e;
        }
        if (j == at + 1) {
          e(p, r) = Complex(0.0, 1.0);
          e(r, p) = Complex(0.0, -1.0);
          return e;
        }
        at += 2;
      }
    }
    return e;
  }

  // H_ij = Re Tr(L E_i R E_j).
  RealMatrix bilinear(const ComplexMatrix& left, const ComplexMatrix& right) const {
    RealMatrix h(size(), size());
    for (Eigen::Index i = 0; i < size(); ++i) {
      const ComplexMatrix y = left * basis(i) * right;
      project(y, h.col(i).data());
    }
    return h;
  }

 private:
  Eigen::Index d_;
};

struct BarrierProblem {
  const ProblemInstance* problem = nullptr;
  std::vector<HermitianCoordinates> coords;
  std::vector<Eigen::Index> offset;
  std::vector<ComplexMatrix> effective;           // A_k = H_k V~_k
  std::vector<std::vector<ComplexMatrix>> costs;  // C_{a,k} = V~^H B_a V~
  RealMatrix cost_rows;  // groups x n, row a = Re Tr(C_a E_j)
  RealVector budgets;
  Eigen::Index n = 0;

  std::vector<ComplexMatrix> unpack(const RealVector& x) const {
    std::vector<ComplexMatrix> q;
    for (std::size_t k = 0; k < coords.size(); ++k) q.push_back(coords[k].to_matrix(x.data() + offset[k]));
    return q;
  }

  double objective(const std::vector<ComplexMatrix>& q) const {
    double f = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      const ComplexMatrix& a = effective[k];
      const ComplexMatrix m =
          ComplexMatrix::Identity(a.rows(), a.rows()) + hermitian_part(a * q[k] * a.adjoint());
      Eigen::LLT<ComplexMatrix> llt(m);
      if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
      double logdet = 0.0;
      for (Eigen::Index i = 0; i < m.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i).real());
      f += problem->config.weight(static_cast<int>(k)) * logdet;
    }
    return f;
  }

  // t f + sum log slack + sum log det Q; -inf outside the domain.
  double barrier(const RealVector& x, double t) const {
    const RealVector slack = budgets - cost_rows * x;
    if ((slack.array() <= 0.0).any()) return -std::numeric_limits<double>::infinity();
    const std::vector<ComplexMatrix> q = unpack(x);
    double value = 0.0;
    for (const auto& qk : q) {
      Eigen::LLT<ComplexMatrix> llt(qk);
      if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < qk.rows(); ++i) {
        const double l = llt.matrixL()(i, i).real();
        if (!(l > 0.0)) return -std::numeric_limits<double>::infinity();
        value += 2.0 * std::log(l);
      }
    }
    value += slack.array().log().sum();
    const double f = objective(q);
    return value + t * f;
  }

  void derivatives(const RealVector& x, double t, RealVector* grad, RealMatrix* hess) const {
    const RealVector slack = budgets - cost_rows * x;
    const std::vector<ComplexMatrix> q = unpack(x);
    grad->setZero(n);
    hess->setZero(n, n);
    for (std::size_t k = 0; k < q.size(); ++k) {
      const ComplexMatrix& a = effective[k];
      const double w = problem->config.weight(static_cast<int>(k));
      const ComplexMatrix m =
          ComplexMatrix::Identity(a.rows(), a.rows()) + hermitian_part(a * q[k] * a.adjoint());
      const ComplexMatrix z = hermitian_part(a.adjoint() * m.llt().solve(a));
      const Eigen::Index d = q[k].rows();
      const ComplexMatrix qinv =
          hermitian_part(q[k].llt().solve(ComplexMatrix::Identity(d, d)));
      const Eigen::Index size = coords[k].size();
      RealVector gz(size), gq(size);
      coords[k].project(z, gz.data());
      coords[k].project(qinv, gq.data());
      grad->segment(offset[k], size) = t * w * gz + gq;
      hess->block(offset[k], offset[k], size, size) =
          -t * w * coords[k].bilinear(z, z) - coords[k].bilinear(qinv, qinv);
    }
    for (Eigen::Index g = 0; g < budgets.size(); ++g) {
      const RealVector row = cost_rows.row(g).transpose();
      *grad -= row / slack(g);
      *hess -= row * row.transpose() / (slack(g) * slack(g));
    }
  }
};

}  // namespace

OracleResult oracle_solve(const ProblemInstance& problem, const OracleOptions& options) {
  BarrierProblem bp;
  bp.problem = &problem;
  const int users = problem.num_users();
  const int groups = problem.num_groups();
  for (int k = 0; k < users; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const ComplexMatrix& basis = problem.bases.null[idx];
    bp.coords.emplace_back(basis.cols());
    bp.offset.push_back(bp.n);
    bp.n += bp.coords.back().size();
    bp.effective.push_back(problem.channels.h[idx] * basis);
    std::vector<ComplexMatrix> per_group;
    for (int a = 0; a < groups; ++a) {
      const RealVector mask = problem.masks.mask(a);
      per_group.push_back(hermitian_part(basis.adjoint() * mask.cast<Complex>().asDiagonal() * basis));
    }
    bp.costs.push_back(std::move(per_group));
  }
  bp.budgets.resize(groups);
  for (int a = 0; a < groups; ++a) bp.budgets(a) = problem.config.budget(a);
  bp.cost_rows = RealMatrix::Zero(groups, bp.n);
  for (int k = 0; k < users; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    for (int a = 0; a < groups; ++a) {
      RealVector row(bp.coords[idx].size());
      bp.coords[idx].project(bp.costs[idx][static_cast<std::size_t>(a)], row.data());
      bp.cost_rows.block(a, bp.offset[idx], 1, row.size()) = row.transpose();
    }
  }

  // Strictly feasible start: Q_k = eps I using half of the tightest budget.
  RealVector x = RealVector::Zero(bp.n);
  RealVector identity = RealVector::Zero(bp.n);
  for (int k = 0; k < users; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    for (Eigen::Index p = 0; p < problem.bases.null[idx].cols(); ++p) identity(bp.offset[idx] + p) = 1.0;
  }
  double eps = std::numeric_limits<double>::infinity();
  const RealVector per_unit = bp.cost_rows * identity;
  for (int a = 0; a < groups; ++a) {
    if (per_unit(a) > 0.0) eps = std::min(eps, 0.5 * bp.budgets(a) / per_unit(a));
  }
  if (!std::isfinite(eps)) eps = 1.0;
  x = eps * identity;

  double barrier_terms = static_cast<double>(groups);
  for (int k = 0; k < users; ++k) {
    barrier_terms += static_cast<double>(problem.bases.null[static_cast<std::size_t>(k)].cols());
  }

  OracleResult result;
  double t = 1.0;
  RealVector grad;
  RealMatrix hess;
  while (result.newton_steps < options.max_newton_steps) {
    // Centering.
    for (int local = 0; local < options.max_centering_steps &&
                        result.newton_steps < options.max_newton_steps;
         ++local) {
      bp.derivatives(x, t, &grad, &hess);
      const RealMatrix neg = -hess;
      Eigen::LDLT<RealMatrix> ldlt(neg);
      const RealVector step = ldlt.solve(grad);
      const double decrement = grad.dot(step);
      ++result.newton_steps;
      if (!step.allFinite() || decrement / 2.0 <= options.newton_tol) break;
      const double current = bp.barrier(x, t);
      double s = 1.0;
      bool moved = false;
      while (s > 1e-14) {
        const RealVector trial = x + s * step;
        const double value = bp.barrier(trial, t);
        if (std::isfinite(value) && value >= current + 0.25 * s * decrement) {
          x = trial;
          moved = true;
          break;
        }
        s *= 0.5;
      }
      if (!moved || s < 1e-10) break;
    }
    const double f = bp.objective(bp.unpack(x));
    result.primal_value = f;
    result.gap_bound = barrier_terms / t;
    if (result.gap_bound <= options.gap_tol * std::max(1.0, std::abs(f))) {
      result.converged = true;
      break;
    }
    t *= options.barrier_growth;
  }

  const std::vector<ComplexMatrix> q = bp.unpack(x);
  for (int k = 0; k < users; ++k) {
    const ComplexMatrix& basis = problem.bases.null[static_cast<std::size_t>(k)];
    result.covariances.push_back(basis * q[static_cast<std::size_t>(k)] * basis.adjoint());
  }
  return result;
}

}  // namespace bdprecode
