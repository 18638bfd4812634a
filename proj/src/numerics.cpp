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

#include "bdprecode/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bdprecode {
namespace {

std::string dims(const ComplexMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

}  // namespace

ComplexMatrix ReducedSvd::reconstruct() const {
  return u * singular_values.cast<Complex>().asDiagonal() * v.adjoint();
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw ContractViolation(std::string(what) + ": non-finite entry in " +
                            dims(m) + " matrix");
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return (m + m.adjoint()) * 0.5;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

double default_rank_tolerance(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const double largest = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return 1e-10 * static_cast<double>(std::max(m.rows(), m.cols())) * largest;
}

ReducedSvd reduced_svd(const ComplexMatrix& m, double rank_tol) {
  require_finite(m, "reduced_svd");
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  if (!sv.allFinite()) {
    throw NumericFailure("reduced_svd: SVD did not converge for " + dims(m) + " matrix");
  }
  if (rank_tol <= 0.0) {
    const double largest = sv.size() ? sv(0) : 0.0;
    rank_tol = 1e-10 * static_cast<double>(std::max(m.rows(), m.cols())) * largest;
  }
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > rank_tol) ++r;
  ReducedSvd out;
  out.u = svd.matrixU().leftCols(r);
  out.singular_values = sv.head(r);
  out.v = svd.matrixV().leftCols(r);
  return out;
}

HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  require_finite(m, "hermitian_eigen");
  if (m.rows() != m.cols()) {
    throw ContractViolation("hermitian_eigen: matrix is " + dims(m));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success) {
    throw NumericFailure("hermitian_eigen: no convergence for " + dims(m) + " matrix");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

ComplexMatrix psd_inv_sqrt(const ComplexMatrix& m, double jitter) {
  if (!is_hermitian(m)) {
    throw ContractViolation("psd_inv_sqrt: input is not Hermitian");
  }
  return psd_inv_sqrt(hermitian_eigen(m), jitter);
}

ComplexMatrix psd_inv_sqrt(const HermitianEigen& eig, double jitter) {
  const Eigen::Index n = eig.values.size();
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  if (eig.values.minCoeff() < -1e-10 * scale) {
    throw ContractViolation("psd_inv_sqrt: input has a negative eigenvalue");
  }
  if (eig.values.maxCoeff() < jitter || eig.values.maxCoeff() <= 0.0) {
    throw SingularMatrix("psd_inv_sqrt: all eigenvalues of a " + std::to_string(n) +
                         "x" + std::to_string(n) + " matrix below jitter");
  }
  RealVector scaled(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = std::max(eig.values(i), jitter);
    if (lambda <= 0.0) {
      throw SingularMatrix("psd_inv_sqrt: singular " + std::to_string(n) + "x" +
                           std::to_string(n) + " matrix");
    }
    scaled(i) = 1.0 / std::sqrt(lambda);
  }
  return eig.vectors * scaled.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  const RealVector root = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * root.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rank_tol) {
  const ReducedSvd svd = reduced_svd(m, rank_tol);
  const RealVector inv = svd.singular_values.cwiseInverse();
  return svd.v * inv.cast<Complex>().asDiagonal() * svd.u.adjoint();
}

double logdet_identity_plus(const ComplexMatrix& x) {
  if (x.rows() != x.cols()) {
    throw ContractViolation("logdet_identity_plus: matrix is " + dims(x));
  }
  if (x.size() == 0) return 0.0;
  const HermitianEigen eig = hermitian_eigen(x);
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  if (eig.values.minCoeff() < -1e-9 * scale) {
    throw ContractViolation("logdet_identity_plus: input is indefinite");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    total += std::log1p(std::max(eig.values(i), 0.0));
  }
  return total;
}

}  // namespace bdprecode
