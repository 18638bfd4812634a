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

// Dense complex linear-algebra kernels shared by every solver.

#ifndef BDPRECODE_NUMERICS_HPP_
#define BDPRECODE_NUMERICS_HPP_

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bdprecode {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Raised when an input breaks a documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a numerical kernel fails (non-convergence, loss of
// definiteness, unexpected rank).
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// psd_inv_sqrt found no eigenvalue above the jitter floor.
class SingularMatrix : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

struct ReducedSvd {
  ComplexMatrix u;          // m x r
  RealVector singular_values;  // descending, all > rank tolerance
  ComplexMatrix v;          // n x r

  Eigen::Index rank() const { return singular_values.size(); }
  ComplexMatrix reconstruct() const;
};

struct HermitianEigen {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

// Throws ContractViolation if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const char* what);

// (m + m^H) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10);

// Default rank threshold: 1e-10 * max(rows, cols) * largest singular value.
double default_rank_tolerance(const ComplexMatrix& m);

// Thin SVD keeping only singular triplets with sigma > rank_tol. A
// non-positive rank_tol selects default_rank_tolerance(m).
ReducedSvd reduced_svd(const ComplexMatrix& m, double rank_tol = -1.0);

// Eigen-decomposition of the Hermitian part of m.
HermitianEigen hermitian_eigen(const ComplexMatrix& m);

// R = m^{-1/2} via eigen-decomposition, eigenvalues clamped from below at
// `jitter`. Requires m Hermitian within 1e-10 and eigenvalues >= -1e-10.
ComplexMatrix psd_inv_sqrt(const ComplexMatrix& m, double jitter = 0.0);
// Same, from an existing decomposition of the (already symmetrized) input.
ComplexMatrix psd_inv_sqrt(const HermitianEigen& eig, double jitter = 0.0);

// Principal square root of a PSD matrix (negative eigenvalues clamped to 0).
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

// Moore-Penrose pseudo-inverse through the reduced SVD.
ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rank_tol = -1.0);

// log|I + x| in nats for Hermitian PSD x.
double logdet_identity_plus(const ComplexMatrix& x);

}  // namespace bdprecode

#endif  // BDPRECODE_NUMERICS_HPP_
