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

#include "qbrach/problem.hpp"

#include <cmath>

#include "qbrach/errors.hpp"

namespace qbrach {

ControlProblem::ControlProblem(GeneratorBasis basis, PureState psi_i,
                               std::optional<PureState> psi_f, double omega,
                               IndexList forbidden)
    : basis_(std::move(basis)),
      psi_i_(std::move(psi_i)),
      psi_f_(std::move(psi_f)),
      omega_(omega),
      forbidden_(std::move(forbidden)) {
  if (!(omega_ > 0.0) || !std::isfinite(omega_)) {
    throw ValidationError("omega must be positive and finite");
  }
  if (psi_i_.dim() != basis_.dim()) {
    throw ValidationError("psi_i dimension does not match the basis");
  }
  if (psi_f_ && psi_f_->dim() != basis_.dim()) {
    throw ValidationError("psi_f dimension does not match the basis");
  }
  basis_.check_subset(forbidden_);
  allowed_ = basis_.complement(forbidden_);
}

ControlProblem ControlProblem::with_target(std::optional<PureState> psi_f) const {
  return ControlProblem(basis_, psi_i_, std::move(psi_f), omega_, forbidden_);
}

}  // namespace qbrach
