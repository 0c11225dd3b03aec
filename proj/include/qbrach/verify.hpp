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
#include <vector>

#include "qbrach/dynamics.hpp"

namespace qbrach {

/// Pass thresholds for the report rows. All residuals are dimensionless.
struct Tolerances {
  double constraints = 1e-8;
  double chko = 1e-8;
  double initial = 1e-8;
  double endpoint = 1e-8;
  double agreement = 1e-8;
  double equivalence = 1e-8;
  double propagation = 1e-8;
  double unitarity = 1e-8;
  double state = 1e-8;
  double speed = 1e-9;
  double speed_decomposition = 1e-8;
  double trf2 = 1e-8;
  double lambda0 = 1e-9;
  double spectrum = 1e-7;
  double trxft = 1e-7;
  double aa_identity = 1e-6;

  /// Closed-form trajectories.
  static Tolerances analytic();
  /// Trajectories produced by the RK4 flow.
  static Tolerances integrated();
};

/// One report row. `deviation` is what gets compared with `tolerance`;
/// `value` is what gets displayed (they differ only for endpoint_re, whose
/// target is 1).
struct ReportRow {
  std::string name;
  double value = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool checked = true;
  bool pass() const { return !checked || deviation <= tolerance; }
};

struct VerificationReport {
  // Constraints on H, maxima over the grid.
  double traceless_max = 0.0;  // |Tr H| / omega
  double norm_max = 0.0;       // |Tr H^2 - 2 omega^2| / (2 omega^2)
  double term_max = 0.0;       // |Tr[H X_j]| / omega
  // ||dF/dt + i[H, F]||_F / (omega ||F||_F); second order differences.
  double chko_residual = 0.0;
  // Same with fourth order differences; this is the row that gets a verdict.
  double chko_residual_hi = 0.0;
  // ||{F0, P} - F0||_F / ||F0||_F.
  double initial_cond_residual = 0.0;
  double endpoint_re = 0.0;  // Re <psi_T|H_T F_T|psi_T>
  double endpoint_im = 0.0;  // |Im| / |Re| of the same quantity
  // |Im form A - lambda0 Im(form B) / 2| / |Re| between the two endpoint forms.
  double endpoint_agreement = 0.0;
  std::optional<double> gate_endpoint;  // Tr[H_T F_T] - 1
  double speed_max_excess = 0.0;        // max (dE - omega) / omega
  double speed_decomposition = 0.0;     // max |dE^2 - (omega^2 - TrG^2/2 + Var G)| / omega^2
  double trf2_drift = 0.0;              // relative drift of 2 w^2 l0^2 + N sum l_j^2
  double lambda0_drift = 0.0;           // max |l0(t) - l0(0)| / |l0(0)|
  double spectrum_drift = 0.0;          // sorted eigenvalues of F(t) vs F(0), / max|eig|
  double trxft_max = 0.0;               // max |N l_j - Tr[X_j F]| / ||F||
  double unitarity_max = 0.0;           // max ||U^dagger U - I||
  double state_consistency = 0.0;       // max ||psi - U psi_i||
  double aa_identity_max = 0.0;         // max |sqrt(g_tt) - dE| / omega
  double equivalence_state = 0.0;       // max ||(dF/dt + i[H,F]) psi|| / (omega ||F||)
  double equivalence_anticomm = 0.0;    // max ||F P + P F - F|| / ||F||
  double propagation_mismatch = 0.0;    // ||U - U_direct|| (integrated only)

  Tolerances tolerances;

  std::vector<ReportRow> rows() const;
  bool passed() const;
  /// Names of the failing rows.
  std::vector<std::string> failures() const;
  /// Fixed-width pass/fail table.
  std::string table() const;
};

struct ConstraintMaxima {
  double traceless_max = 0.0;
  double norm_max = 0.0;
  double term_max = 0.0;
};

ConstraintMaxima check_constraints(const Trajectory& traj, const ControlProblem& problem);

/// Max over the grid of ||dF/dt + i[H, F]||_F / (omega ||F||_F). `order` is 2
/// (central differences, one-sided 3-point at the ends) or 4.
double chko_residual(const Trajectory& traj, double omega, int order = 2);

/// ||F0 P + P F0 - F0||_F with P = |psi_i><psi_i|. Not normalized.
double initial_condition_residual(const Matrix& f0, const Vector& psi_i);

struct EndpointValue {
  double re = 0.0;
  double im = 0.0;
};

/// <psi|H F|psi>, split into real and imaginary parts.
EndpointValue endpoint_constraint(const Vector& psi_t, const Matrix& h_t, const Matrix& f_t);

/// <psi_i|[i U^dagger dU/dt, U^dagger G U]|psi_i> with i U^dagger dU/dt = U^dagger H U.
/// Purely imaginary for Hermitian H and G.
cplx endpoint_constraint_initial_form(const Vector& psi_i, const Matrix& u_t, const Matrix& h_t,
                                      const Matrix& g_t);

/// Tr[H_T F_T] - 1. Throws NumericalError if Tr F_T is not zero to 1e-10 ||F_T||.
double endpoint_constraint_gate(const Matrix& h_t, const Matrix& f_t);

struct SpeedProfile {
  std::vector<double> delta_e;
  double max_excess = 0.0;          // max (dE - omega), absolute
  double decomposition_mismatch = 0.0;  // max |dE^2 - decomposition| / omega^2
};

/// Energy uncertainty along the trajectory and its decomposition through G.
SpeedProfile speed_profile(const Trajectory& traj, const ControlProblem& problem);

struct EquivalenceResult {
  double state_projected = 0.0;
  double anticommutator = 0.0;
};

/// The two state-level forms of the governing equation.
EquivalenceResult equivalence_check(const Trajectory& traj, double omega);

/// Energy uncertainty of H on psi.
double energy_uncertainty(const Matrix& h, const Vector& psi);

struct VerifyOptions {
  Tolerances tolerances = Tolerances::integrated();
  bool gate = false;
};

VerificationReport verify_trajectory(const Trajectory& traj, const ControlProblem& problem,
                                     const VerifyOptions& options = {});

}  // namespace qbrach
