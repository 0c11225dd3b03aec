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

#include "qbrach/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qbrach/errors.hpp"
#include "qbrach/problem.hpp"

namespace qbrach {

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw ValidationError("state vector is empty");
  const double norm = amplitudes_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-9) {
    throw ValidationError("state vector is not normalized (norm " + std::to_string(norm) + ")");
  }
  amplitudes_ /= norm;
}

cplx PureState::inner(const PureState& other) const {
  if (dim() != other.dim()) throw ValidationError("state dimension mismatch");
  return amplitudes_.dot(other.amplitudes_);
}

PureState PureState::basis(std::size_t dim, std::size_t k) {
  if (k >= dim) throw ValidationError("basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return PureState(v);
}

BoundaryData boundary_data(const PureState& psi_i, const PureState& psi_f) {
  const cplx ov = psi_i.inner(psi_f);
  BoundaryData out;
  out.omega_b = std::acos(std::clamp(std::abs(ov), 0.0, 1.0));
  if (std::abs(ov) > 1e-12) {
    out.phi = std::arg(ov);
    if (out.phi <= -std::numbers::pi) out.phi += 2.0 * std::numbers::pi;
  } else {
    out.phi = 0.0;
    out.phase_degenerate = true;
  }
  const double s = std::sin(out.omega_b);
  if (s > 1e-12) {
    Vector perp = psi_f.amplitudes() - ov * psi_i.amplitudes();
    // Dividing by the computed norm rather than sin(omega_b) keeps the vector
    // unit length when |<psi_i|psi_f>| is close to one.
    out.psi_perp = PureState(perp / perp.norm());
  } else {
    out.omega_b = 0.0;
  }
  return out;
}

TrivialityResult is_trivially_restricted(const ControlProblem& problem,
                                         const BoundaryData& boundary, double tol) {
  if (!boundary.psi_perp || boundary.omega_b <= 0.0) {
    throw ValidationError("degenerate problem: psi_i and psi_f coincide (Bures angle 0)");
  }
  const Vector& pi = problem.psi_i().amplitudes();
  const Vector& pp = boundary.psi_perp->amplitudes();
  const cplx phase = std::polar(1.0, boundary.phi);
  TrivialityResult out;
  for (std::size_t j : problem.forbidden()) {
    const cplx m = pp.dot(problem.basis().generator(j) * pi);
    // Proportional to Tr[H_F X_j] for the free Hamiltonian of the pair.
    if (std::abs((m * phase).imag()) > tol) {
      out.trivial = false;
      out.witness = j;
      return out;
    }
  }
  return out;
}

double overlap_abs(const Vector& a, const Vector& b) { return std::abs(a.dot(b)); }

}  // namespace qbrach
