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

#include "qbrach/linalg.hpp"

#include <cmath>

#include "qbrach/errors.hpp"

namespace qbrach {

HermitianSpectrum::HermitianSpectrum(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigendecomposition did not converge");
  }
  values_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

Matrix HermitianSpectrum::propagator(double t) const {
  Vector phases(values_.size());
  for (Eigen::Index k = 0; k < values_.size(); ++k) {
    phases(k) = std::polar(1.0, -values_(k) * t);
  }
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

Matrix unitary_exp(const Matrix& h, double t) {
  return HermitianSpectrum(h).propagator(t);
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix anticommutator(const Matrix& a, const Matrix& b) {
  return a * b + b * a;
}

Matrix hermitian_part(const Matrix& a) {
  return 0.5 * (a + a.adjoint());
}

double hermiticity_defect(const Matrix& a) {
  return (a - a.adjoint()).norm();
}

double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

Matrix polar_unitary(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

RealVector sorted_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

cplx trace_product(const Matrix& a, const Matrix& b) {
  // Tr(AB) = sum_ij A_ij B_ji
  return (a.array() * b.transpose().array()).sum();
}

double trace_product_real(const Matrix& a, const Matrix& b) {
  return trace_product(a, b).real();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::size_t steps_for(double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) {
    throw ValidationError("time step must be positive and duration non-negative");
  }
  const double ratio = t_end / dt;
  auto n = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
  return n == 0 ? 1 : n;
}

std::vector<double> uniform_grid(double t_end, std::size_t steps) {
  std::vector<double> grid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    grid[k] = t_end * static_cast<double>(k) / static_cast<double>(steps);
  }
  grid.back() = t_end;
  return grid;
}

}  // namespace qbrach
