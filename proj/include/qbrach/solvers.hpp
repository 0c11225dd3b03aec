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
#include <string>
#include <utility>
#include <vector>

#include "qbrach/verify.hpp"

namespace qbrach {

enum class SolutionKind { Free, ClosedSubalgebra, M1TwoLevel, TwoQubitExample, Shot };

const char* to_string(SolutionKind kind);
SolutionKind solution_kind_from_string(const std::string& name);

/// A locally time-extremal trajectory. F0, multipliers0 and the trajectory are
/// stored in the gauge where Re<psi_f|H(T)F(T)|psi_f> = 1.
struct ExtremalSolution {
  ExtremalSolution(SolutionKind kind, ControlProblem problem)
      : kind(kind), problem(std::move(problem)) {}

  SolutionKind kind;
  ControlProblem problem;
  double T = 0.0;
  Matrix H0;
  Matrix F0;
  MultiplierVector multipliers0;
  Trajectory trajectory;
  VerificationReport report;
  std::optional<std::pair<int, int>> branch;
  std::vector<std::string> warnings;
};

/// Grid used for closed-form trajectories: at most `dt` (default 1e-3 / omega),
/// refined so that the fastest frequency in H0 + G is resolved as well.
double analytic_step(const ControlProblem& problem, const Matrix& h0, const Matrix& g,
                     double dt);

/// Constant multipliers: H = e^{iGt} H0 e^{-iGt}, U = e^{iGt} e^{-i(H0+G)t}.
Trajectory closed_form_trajectory(const ControlProblem& problem, const Matrix& h0,
                                  const MultiplierVector& m0, double t_end, double dt);

/// Free evolution between two states: T = Omega_B / omega. A zero Bures angle
/// yields T = 0 and an empty trajectory.
ExtremalSolution solve_free(const PureState& psi_i, const PureState& psi_f, double omega,
                            double dt = 0.0);

/// The free Hamiltonian omega(sin(phi) sx_eff + cos(phi) sy_eff) on
/// span{psi_i, psi_perp}.
Matrix free_hamiltonian(const PureState& psi_i, const BoundaryData& boundary, double omega);

struct ClosedOptions {
  double dt = 0.0;
  std::optional<double> target_bures_angle;
};

/// <psi_i|[H0 + G, U^dagger(T) G U(T)]|psi_i> (purely imaginary).
cplx closed_endpoint(const ControlProblem& problem, const Matrix& h0, const Matrix& g, double t);

/// Constant-multiplier solver for forbidden sets that close under commutation.
ExtremalSolution solve_closed_subalgebra(const ControlProblem& problem, const Matrix& h0,
                                         const MultiplierVector& m0, double t_max,
                                         const ClosedOptions& options = {});

/// One (k, l) candidate of the single-constraint qubit problem.
struct M1Branch {
  int k = 0;
  int l = 0;
  double lambda1 = 0.0;
  double T = 0.0;
  double sin_theta1 = 0.0;
  /// Coefficient of sy in H(0): omega for restricted branches, -omega sgn(cos phi)
  /// for the free branch.
  double mu_y = 0.0;
  double diag_residual = 0.0;
  double offdiag1_residual = 0.0;
  double offdiag2_residual = 0.0;
  double fidelity = 0.0;
  double endpoint_im = 0.0;  // |lambda1 cos(2 Lambda1 T)| / omega
};

struct M1Result {
  std::vector<M1Branch> branches;  // sorted by T
  std::size_t best = 0;
  ExtremalSolution global_min;
};

/// Target of the qubit problem, cos(Omega_B) e^{i phi}|+x> + sin(Omega_B)|-x>.
PureState m1_target(double omega_b, double phi);

/// psi_i = |+x>, H0 = omega sy, forbidden = {sz}.
ControlProblem m1_problem(double omega, std::optional<PureState> psi_f);

/// Enumerates (k, l) branches for the qubit problem with forbidden sz.
M1Result solve_m1_two_level(double omega_b, double phi, double omega, int k_max = 20,
                            int l_max = 20, double dt = 0.0);

/// Full solution for one branch (lambda1 = 0 gives the free branch).
ExtremalSolution materialize_m1_branch(const M1Branch& branch, double omega,
                                       const PureState& psi_f, double dt = 0.0);

struct M1FieldValue {
  double amplitude = 0.0;  // |<psi(T)|psi_i>|
  double re = 0.0;         // Re<psi(T)|H(T)F(T)|psi(T)>, lambda0 = 1
  double im = 0.0;         // Im of the same
};

/// Closed-form evaluation of the qubit problem at (lambda1, T), lambda0 = 1.
M1FieldValue m1_field(double lambda1, double t, double omega);

struct SweepRow {
  double lambda_tilde = 0.0;  // lambda1 / omega^2
  double T = 0.0;
  M1FieldValue value;
};

/// n x m grid: lambda_tilde inclusive linspace, T taking m points in
/// (t_min, t_max]. Rows are computed on `threads` workers; output order is
/// row-major in (lambda_tilde, T) regardless of thread count.
std::vector<SweepRow> sweep_m1(double lt_min, double lt_max, std::size_t n, double t_min,
                               double t_max, std::size_t m, double omega,
                               unsigned threads = 0);

struct TwoQubitFree {
  double lambda10 = 0.0;
  double lambda01 = 0.0;
  double lambda12 = 0.0;
};

struct TwoQubitSeed {
  Matrix H0;
  Matrix F0;
  MultiplierVector multipliers;  // lambda0 = 1, ordered like two_qubit_forbidden()
};

/// The 11 forbidden generators 10, 20, 30, 01, 02, 03, 11, 12, 13, 21, 31 as
/// Pauli-string basis indices.
IndexList two_qubit_forbidden();

/// psi_i = |11>, Pauli-string basis, forbidden = two_qubit_forbidden().
ControlProblem two_qubit_problem(double omega, std::optional<PureState> psi_f);

/// H0 = mu22 s1^2 s2^2 + mu23 s1^2 s2^3 + mu32 s1^3 s2^2 and the forbidden
/// multipliers fixed by the structure of F(0) for psi_i = |11>.
TwoQubitSeed build_two_qubit_f0(double mu22, double mu23, double mu32, double omega,
                                const TwoQubitFree& free = {});

/// H = (omega / sqrt 2) s1^2 s2^2, T = sqrt(2) Omega_B / omega.
ExtremalSolution solve_two_qubit_example(double omega_b, double omega, double dt = 0.0);

struct ShootOptions {
  double dt = 0.0;
  std::optional<double> target_bures_angle;
  /// Relative tolerance on Im/Re for the polished root.
  double root_tol = 1e-10;
};

/// Forward shooting: integrate from the (projected) seed and stop at the first
/// zero of Im<psi|H F|psi> with nonzero real part.
ExtremalSolution shoot(const ControlProblem& problem, const Matrix& h0_seed,
                       const MultiplierVector& m0_seed, double t_max,
                       const ShootOptions& options = {});

}  // namespace qbrach
