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

#include <cstddef>
#include <optional>

#include "qbrach/linalg.hpp"

namespace qbrach {

class ControlProblem;

/// Normalized state vector. Inputs off by more than 1e-9 in norm are
/// rejected; smaller defects are renormalized away.
class PureState {
 public:
  explicit PureState(Vector amplitudes);

  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }

  /// <this|other>.
  cplx inner(const PureState& other) const;

  /// Computational basis vector |k>.
  static PureState basis(std::size_t dim, std::size_t k);

 private:
  Vector amplitudes_;
};

/// Bures angle, relative phase, and the normalized orthogonal part of psi_f.
struct BoundaryData {
  double omega_b = 0.0;
  double phi = 0.0;
  std::optional<PureState> psi_perp;
  /// <psi_i|psi_f> vanished, so phi was set to 0 by convention.
  bool phase_degenerate = false;
};

BoundaryData boundary_data(const PureState& psi_i, const PureState& psi_f);

struct TrivialityResult {
  bool trivial = true;
  /// Basis index of the first forbidden generator that obstructs the free
  /// Hamiltonian.
  std::optional<std::size_t> witness;
};

/// True when the free-evolution Hamiltonian already has no component along
/// any forbidden generator.
TrivialityResult is_trivially_restricted(const ControlProblem& problem,
                                         const BoundaryData& boundary, double tol = 1e-9);

/// Fidelity |<a|b>|.
double overlap_abs(const Vector& a, const Vector& b);

}  // namespace qbrach
