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

#include <optional>

#include "qbrach/algebra.hpp"
#include "qbrach/states.hpp"

namespace qbrach {

/// One brachistochrone instance: endpoints, energy scale, and the split of
/// the generators into forbidden (X) and allowed (Y) directions.
class ControlProblem {
 public:
  ControlProblem(GeneratorBasis basis, PureState psi_i, std::optional<PureState> psi_f,
                 double omega, IndexList forbidden);

  const GeneratorBasis& basis() const { return basis_; }
  std::size_t dim() const { return basis_.dim(); }
  const PureState& psi_i() const { return psi_i_; }
  const std::optional<PureState>& psi_f() const { return psi_f_; }
  double omega() const { return omega_; }
  const IndexList& forbidden() const { return forbidden_; }
  const IndexList& allowed() const { return allowed_; }

  /// Copy with a different (or absent) target state.
  ControlProblem with_target(std::optional<PureState> psi_f) const;

 private:
  GeneratorBasis basis_;
  PureState psi_i_;
  std::optional<PureState> psi_f_;
  double omega_;
  IndexList forbidden_;
  IndexList allowed_;
};

}  // namespace qbrach
