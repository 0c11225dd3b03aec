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
#include <vector>

#include "qbrach/problem.hpp"

namespace qbrach {

/// Lagrange multipliers at one instant: lambda0 for the norm constraint and
/// one lambda per forbidden generator (same order as the forbidden list).
struct MultiplierVector {
  double lambda0 = 1.0;
  RealVector lambdas;

  /// Every multiplier divided by c. H and U are invariant under this.
  MultiplierVector rescaled(double c) const;
};

/// Time-sampled extremal candidate. F is always U F(0) U^dagger.
struct Trajectory {
  std::vector<double> times;
  std::vector<Matrix> U;
  std::vector<Matrix> V;
  std::vector<Matrix> H;
  std::vector<Matrix> F;
  std::vector<Vector> psi;
  std::vector<MultiplierVector> multipliers;
  /// Largest ||U - U_direct||_F where U_direct integrates i dU/dt = H U.
  double propagation_mismatch = 0.0;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  /// Divides F and all multipliers by c.
  void rescale(double c);
};

/// G = sum_j (lambda_j / lambda0) X_j over the forbidden generators.
Matrix g_operator(const MultiplierVector& m, const GeneratorBasis& basis,
                  const IndexList& forbidden);

/// eta_jl = Tr[H i[X_j, X_l]], antisymmetric M x M.
RealMatrix eta_matrix(const Matrix& h, const GeneratorBasis& basis, const IndexList& forbidden);

struct MultiplierRates {
  double dlambda0 = 0.0;
  RealVector dlambdas;
};

/// Right-hand side of the multiplier equations. N is taken from H.
MultiplierRates multiplier_rhs(const MultiplierVector& m, const Matrix& h,
                               const RealMatrix& eta, double omega);

/// H = V F0 V^dagger / lambda0 - G.
Matrix assemble_hamiltonian(const MultiplierVector& m, const Matrix& v, const Matrix& f0,
                            const Matrix& g);
Matrix assemble_hamiltonian(const MultiplierVector& m, const Matrix& v, const Matrix& f0,
                            const GeneratorBasis& basis, const IndexList& forbidden);

/// Coupled system {V, lambda0, lambda_j} plus the two channels used to build
/// U: s = int dt / lambda0 and the directly propagated U. Stepped by classic
/// RK4; the stepper is exposed so that root finders can resume from any
/// stored state.
class GoverningFlow {
 public:
  struct State {
    double t = 0.0;
    Matrix V;
    double lambda0 = 1.0;
    RealVector lambdas;
    double s = 0.0;
    Matrix U_direct;
    std::size_t steps_taken = 0;
  };

  /// Instantaneous quantities reconstructed from a state.
  struct Sample {
    double t = 0.0;
    Matrix U, V, H, F, G;
    Vector psi;
    MultiplierVector multipliers;
    double propagation_mismatch = 0.0;
  };

  GoverningFlow(const ControlProblem& problem, const MultiplierVector& m0, const Matrix& h0);

  const Matrix& f0() const { return f0_; }
  const ControlProblem& problem() const { return problem_; }
  State initial_state() const;

  /// Advances by h. Rejects steps that push ||V^dagger V - I|| above 1e-6,
  /// halving the step up to 20 times. Re-unitarizes V every 100 steps.
  void step(State& state, double h) const;

  Sample sample(const State& state) const;

 private:
  struct Deriv {
    Matrix dV;
    double dlambda0;
    RealVector dlambdas;
    double ds;
    Matrix dU;
  };
  Deriv rhs(const Matrix& v, double lambda0, const RealVector& lambdas, const Matrix& u) const;
  State rk4(const State& state, double h) const;
  void advance(State& state, double h, int depth) const;

  ControlProblem problem_;
  Matrix f0_;
  HermitianSpectrum f0_spectrum_;
  MultiplierVector lambda_init_;
  std::vector<Matrix> forbidden_gens_;
  // i[X_j, X_l] for j < l, row-major over the forbidden list.
  std::vector<Matrix> commutators_;
};

/// Checks Tr H0 = 0, Tr H0^2 = 2 omega^2 and Tr[H0 X_j] = 0 for forbidden j,
/// each to `tol` relative to omega. Throws ValidationError otherwise.
void check_hamiltonian_constraints(const ControlProblem& problem, const Matrix& h0,
                                   double tol = 1e-8);

/// Integrates on a uniform grid of ceil(t_max / dt) steps. The default dt is
/// 1e-3 / omega when dt <= 0.
Trajectory integrate(const ControlProblem& problem, const MultiplierVector& m0,
                     const Matrix& h0, double t_max, double dt = 0.0);

void append_sample(Trajectory& traj, const GoverningFlow::Sample& s);

}  // namespace qbrach
