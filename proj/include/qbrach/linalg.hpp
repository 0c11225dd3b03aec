// Copyright 2026 The qbrach Authors
//
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

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qbrach {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr cplx kI{0.0, 1.0};

/// Spectral factorization of a Hermitian matrix, reusable for exp(-i H t) at
/// many times t.
class HermitianSpectrum {
 public:
  explicit HermitianSpectrum(const Matrix& h);

  /// exp(-i H t).
  Matrix propagator(double t) const;
  const RealVector& eigenvalues() const { return values_; }
  const Matrix& eigenvectors() const { return vectors_; }

 private:
  RealVector values_;
  Matrix vectors_;
};

/// exp(-i H t) for Hermitian H via eigendecomposition (exactly unitary up to
/// rounding). Only the Hermitian part of `h` is used.
Matrix unitary_exp(const Matrix& h, double t);

/// AB - BA.
Matrix commutator(const Matrix& a, const Matrix& b);

/// AB + BA.
Matrix anticommutator(const Matrix& a, const Matrix& b);

/// (A + A^dagger) / 2.
Matrix hermitian_part(const Matrix& a);

/// || A - A^dagger ||_F.
double hermiticity_defect(const Matrix& a);

/// || U^dagger U - I ||_F.
double unitarity_defect(const Matrix& u);

/// Closest unitary in Frobenius norm (polar factor via SVD).
Matrix polar_unitary(const Matrix& a);

/// Eigenvalues of a Hermitian matrix in ascending order.
RealVector sorted_eigenvalues(const Matrix& h);

/// Real part of Tr(A B), computed without forming the product.
double trace_product_real(const Matrix& a, const Matrix& b);

/// Tr(A B) without forming the product.
cplx trace_product(const Matrix& a, const Matrix& b);

/// Kronecker product.
Matrix kron(const Matrix& a, const Matrix& b);

/// Uniform grid with `steps` intervals on [0, t_end]; the last point is t_end.
std::vector<double> uniform_grid(double t_end, std::size_t steps);

/// Number of intervals needed so that the step does not exceed `dt`.
std::size_t steps_for(double t_end, double dt);

}  // namespace qbrach
