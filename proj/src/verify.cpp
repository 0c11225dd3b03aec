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

#include "qbrach/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "qbrach/errors.hpp"

namespace qbrach {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Derivative of uniformly sampled data. Order 4 uses 5-point stencils
/// (one-sided near the ends) and falls back to order 2 on short grids.
template <typename T>
std::vector<T> grid_derivative(const std::vector<T>& f, double h, int order) {
  const std::size_t n = f.size();
  if (n < 3) throw ValidationError("finite differences need at least 3 samples");
  std::vector<T> d(n);
  if (order == 4 && n >= 5) {
    const double c = 1.0 / (12.0 * h);
    d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for (std::size_t i = 2; i + 2 < n; ++i) {
      d[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    }
    const std::size_t e = n - 1;
    d[e] = c * (25.0 * f[e] - 48.0 * f[e - 1] + 36.0 * f[e - 2] - 16.0 * f[e - 3] +
                3.0 * f[e - 4]);
    d[e - 1] = c * (3.0 * f[e] + 10.0 * f[e - 1] - 18.0 * f[e - 2] + 6.0 * f[e - 3] -
                    f[e - 4]);
    return d;
  }
  const double c = 1.0 / (2.0 * h);
  d[0] = c * (-3.0 * f[0] + 4.0 * f[1] - f[2]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = c * (f[i + 1] - f[i - 1]);
  d[n - 1] = c * (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]);
  return d;
}

double grid_step(const Trajectory& traj) {
  if (traj.size() < 2) throw ValidationError("trajectory needs at least 2 samples");
  return (traj.times.back() - traj.times.front()) / static_cast<double>(traj.size() - 1);
}

double safe_ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 0.0 : kInf;
  return num / den;
}

// i[H, F] at every sample; shared by the residuals that need it.
std::vector<Matrix> flow_commutators(const Trajectory& traj) {
  std::vector<Matrix> out;
  out.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out.push_back(kI * commutator(traj.H[k], traj.F[k]));
  }
  return out;
}

double chko_from(const Trajectory& traj, const std::vector<Matrix>& fdot,
                 const std::vector<Matrix>& comm, double omega) {
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    worst = std::max(worst, safe_ratio((fdot[k] + comm[k]).norm(), omega * traj.F[k].norm()));
  }
  return worst;
}

EquivalenceResult equivalence_from(const Trajectory& traj, const std::vector<Matrix>& fdot,
                                   const std::vector<Matrix>& comm, double omega) {
  EquivalenceResult out;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double scale = traj.F[k].norm();
    const Vector& psi = traj.psi[k];
    const Vector r = fdot[k] * psi + comm[k] * psi;
    out.state_projected = std::max(out.state_projected, safe_ratio(r.norm(), omega * scale));
    // {F, P} - F with P = |psi><psi|
    const Vector fpsi = traj.F[k] * psi;
    const Matrix anti = fpsi * psi.adjoint() + psi * fpsi.adjoint() - traj.F[k];
    out.anticommutator = std::max(out.anticommutator, safe_ratio(anti.norm(), scale));
  }
  return out;
}

}  // namespace

Tolerances Tolerances::analytic() { return Tolerances{}; }

Tolerances Tolerances::integrated() {
  Tolerances t;
  t.constraints = 1e-6;
  t.chko = 1e-6;
  t.initial = 1e-8;
  t.endpoint = 1e-6;
  t.equivalence = 1e-6;
  t.propagation = 1e-6;
  return t;
}

ConstraintMaxima check_constraints(const Trajectory& traj, const ControlProblem& problem) {
  if (traj.empty()) throw ValidationError("empty trajectory");
  const double w = problem.omega();
  ConstraintMaxima out;
  for (const Matrix& h : traj.H) {
    out.traceless_max = std::max(out.traceless_max, std::abs(h.trace()) / w);
    out.norm_max = std::max(out.norm_max,
                            std::abs(trace_product_real(h, h) - 2 * w * w) / (2 * w * w));
    for (std::size_t j : problem.forbidden()) {
      out.term_max = std::max(
          out.term_max, std::abs(trace_product(h, problem.basis().generator(j))) / w);
    }
  }
  return out;
}

double chko_residual(const Trajectory& traj, double omega, int order) {
  return chko_from(traj, grid_derivative(traj.F, grid_step(traj), order), flow_commutators(traj),
                   omega);
}

double initial_condition_residual(const Matrix& f0, const Vector& psi_i) {
  const Matrix p = psi_i * psi_i.adjoint();
  return (f0 * p + p * f0 - f0).norm();
}

EndpointValue endpoint_constraint(const Vector& psi_t, const Matrix& h_t, const Matrix& f_t) {
  if (psi_t.size() != h_t.rows() || h_t.rows() != f_t.rows()) {
    throw ValidationError("endpoint constraint: dimension mismatch");
  }
  const cplx v = psi_t.dot(h_t * (f_t * psi_t));
  return {v.real(), v.imag()};
}

cplx endpoint_constraint_initial_form(const Vector& psi_i, const Matrix& u_t, const Matrix& h_t,
                                      const Matrix& g_t) {
  const Matrix generator = u_t.adjoint() * h_t * u_t;
  const Matrix w = u_t.adjoint() * g_t * u_t;
  return psi_i.dot(commutator(generator, w) * psi_i);
}

double endpoint_constraint_gate(const Matrix& h_t, const Matrix& f_t) {
  if (std::abs(f_t.trace()) > 1e-10 * std::max(1.0, f_t.norm())) {
    throw NumericalError("gate endpoint: Tr F(T) is not zero");
  }
  return trace_product(h_t, f_t).real() - 1.0;
}

double energy_uncertainty(const Matrix& h, const Vector& psi) {
  const Vector hp = h * psi;
  const double mean = psi.dot(hp).real();
  const double second = hp.squaredNorm();
  return std::sqrt(std::max(0.0, second - mean * mean));
}

SpeedProfile speed_profile(const Trajectory& traj, const ControlProblem& problem) {
  const double w = problem.omega();
  SpeedProfile out;
  out.max_excess = -kInf;
  out.delta_e.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Vector& psi = traj.psi[k];
    const Vector hp = traj.H[k] * psi;
    const double mean = psi.dot(hp).real();
    const double var_h = hp.squaredNorm() - mean * mean;
    const double de = std::sqrt(std::max(0.0, var_h));
    out.delta_e.push_back(de);
    out.max_excess = std::max(out.max_excess, de - w);

    const Matrix g = g_operator(traj.multipliers[k], problem.basis(), problem.forbidden());
    const Vector gp = g * psi;
    const double g_mean = psi.dot(gp).real();
    const double var_g = gp.squaredNorm() - g_mean * g_mean;
    const double decomposition = w * w - (0.5 * trace_product_real(g, g) - var_g);
    out.decomposition_mismatch =
        std::max(out.decomposition_mismatch, std::abs(var_h - decomposition) / (w * w));
  }
  if (traj.empty()) out.max_excess = 0.0;
  return out;
}

EquivalenceResult equivalence_check(const Trajectory& traj, double omega) {
  return equivalence_from(traj, grid_derivative(traj.F, grid_step(traj), 4),
                          flow_commutators(traj), omega);
}

VerificationReport verify_trajectory(const Trajectory& traj, const ControlProblem& problem,
                                     const VerifyOptions& options) {
  if (traj.size() < 3) throw ValidationError("verification needs at least 3 samples");
  const double w = problem.omega();
  const double n = static_cast<double>(problem.dim());
  const Vector& psi_i = problem.psi_i().amplitudes();
  VerificationReport r;
  r.tolerances = options.tolerances;

  const ConstraintMaxima c = check_constraints(traj, problem);
  r.traceless_max = c.traceless_max;
  r.norm_max = c.norm_max;
  r.term_max = c.term_max;

  const double step = grid_step(traj);
  const std::vector<Matrix> comm = flow_commutators(traj);
  const std::vector<Matrix> fdot4 = grid_derivative(traj.F, step, 4);
  r.chko_residual = chko_from(traj, grid_derivative(traj.F, step, 2), comm, w);
  r.chko_residual_hi = chko_from(traj, fdot4, comm, w);
  r.initial_cond_residual =
      safe_ratio(initial_condition_residual(traj.F.front(), psi_i), traj.F.front().norm());

  const std::size_t last = traj.size() - 1;
  const EndpointValue ev = endpoint_constraint(traj.psi[last], traj.H[last], traj.F[last]);
  r.endpoint_re = ev.re;
  r.endpoint_im = safe_ratio(std::abs(ev.im), std::abs(ev.re));
  const Matrix g_last = g_operator(traj.multipliers[last], problem.basis(), problem.forbidden());
  const cplx alt = endpoint_constraint_initial_form(psi_i, traj.U[last], traj.H[last], g_last);
  const cplx alt_scaled = traj.multipliers[last].lambda0 * alt / 2.0;
  r.endpoint_agreement =
      safe_ratio(std::abs(ev.im - alt_scaled.imag()) + std::abs(alt_scaled.real()),
                 std::abs(ev.re));
  if (options.gate) r.gate_endpoint = endpoint_constraint_gate(traj.H[last], traj.F[last]);

  const SpeedProfile sp = speed_profile(traj, problem);
  r.speed_max_excess = std::max(0.0, sp.max_excess / w);
  r.speed_decomposition = sp.decomposition_mismatch;

  auto trf2 = [&](const MultiplierVector& m) {
    return 2 * w * w * m.lambda0 * m.lambda0 + n * m.lambdas.squaredNorm();
  };
  const double c0 = trf2(traj.multipliers.front());
  const double l0 = traj.multipliers.front().lambda0;
  const RealVector eig0 = sorted_eigenvalues(traj.F.front());
  const double eig_scale = eig0.cwiseAbs().maxCoeff();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const MultiplierVector& m = traj.multipliers[k];
    r.trf2_drift = std::max(r.trf2_drift, safe_ratio(std::abs(trf2(m) - c0), c0));
    r.lambda0_drift = std::max(r.lambda0_drift, safe_ratio(std::abs(m.lambda0 - l0), std::abs(l0)));
    r.spectrum_drift = std::max(
        r.spectrum_drift,
        safe_ratio((sorted_eigenvalues(traj.F[k]) - eig0).cwiseAbs().maxCoeff(), eig_scale));
    const double fnorm = traj.F[k].norm();
    for (std::size_t j = 0; j < problem.forbidden().size(); ++j) {
      const double lhs = n * m.lambdas(static_cast<Eigen::Index>(j));
      const double rhs =
          trace_product_real(problem.basis().generator(problem.forbidden()[j]), traj.F[k]);
      r.trxft_max = std::max(r.trxft_max, safe_ratio(std::abs(lhs - rhs), fnorm));
    }
    r.unitarity_max = std::max(r.unitarity_max, unitarity_defect(traj.U[k]));
    r.state_consistency =
        std::max(r.state_consistency, (traj.psi[k] - traj.U[k] * psi_i).norm());
  }

  // Fubini-Study speed from the sampled states, fourth order differences.
  const std::vector<Vector> psidot = grid_derivative(traj.psi, step, 4);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const cplx proj = traj.psi[k].dot(psidot[k]);
    const double gtt = std::max(0.0, psidot[k].squaredNorm() - std::norm(proj));
    r.aa_identity_max =
        std::max(r.aa_identity_max, std::abs(std::sqrt(gtt) - sp.delta_e[k]) / w);
  }

  const EquivalenceResult eq = equivalence_from(traj, fdot4, comm, w);
  r.equivalence_state = eq.state_projected;
  r.equivalence_anticomm = eq.anticommutator;
  r.propagation_mismatch = traj.propagation_mismatch;
  return r;
}

std::vector<ReportRow> VerificationReport::rows() const {
  const Tolerances& t = tolerances;
  std::vector<ReportRow> out = {
      {"traceless_max", traceless_max, traceless_max, t.constraints},
      {"norm_max", norm_max, norm_max, t.constraints},
      {"term_max", term_max, term_max, t.constraints},
      {"chko_residual", chko_residual, chko_residual, kInf, false},
      {"chko_residual_hi", chko_residual_hi, chko_residual_hi, t.chko},
      {"initial_cond_residual", initial_cond_residual, initial_cond_residual, t.initial},
      {"endpoint_re", endpoint_re, std::abs(endpoint_re - 1.0), t.endpoint},
      {"endpoint_im", endpoint_im, endpoint_im, t.endpoint},
      {"endpoint_agreement", endpoint_agreement, endpoint_agreement, t.agreement},
  };
  if (gate_endpoint) {
    out.push_back({"gate_endpoint", *gate_endpoint, std::abs(*gate_endpoint), t.endpoint});
  }
  const std::vector<ReportRow> rest = {
      {"speed_max_excess", speed_max_excess, speed_max_excess, t.speed},
      {"speed_decomposition", speed_decomposition, speed_decomposition, t.speed_decomposition},
      {"trf2_drift", trf2_drift, trf2_drift, t.trf2},
      {"lambda0_drift", lambda0_drift, lambda0_drift, t.lambda0},
      {"spectrum_drift", spectrum_drift, spectrum_drift, t.spectrum},
      {"trxft_max", trxft_max, trxft_max, t.trxft},
      {"unitarity_max", unitarity_max, unitarity_max, t.unitarity},
      {"state_consistency", state_consistency, state_consistency, t.state},
      {"aa_identity_max", aa_identity_max, aa_identity_max, t.aa_identity},
      {"equivalence_state", equivalence_state, equivalence_state, t.equivalence},
      {"equivalence_anticomm", equivalence_anticomm, equivalence_anticomm, t.equivalence},
      {"propagation_mismatch", propagation_mismatch, propagation_mismatch, t.propagation},
  };
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

bool VerificationReport::passed() const {
  for (const ReportRow& row : rows()) {
    if (!row.pass()) return false;
  }
  return true;
}

std::vector<std::string> VerificationReport::failures() const {
  std::vector<std::string> out;
  for (const ReportRow& row : rows()) {
    if (!row.pass()) out.push_back(row.name);
  }
  return out;
}

std::string VerificationReport::table() const {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-24s %14s %12s  %s\n", "residual", "value", "tolerance",
                "verdict");
  os << line;
  for (const ReportRow& row : rows()) {
    if (row.checked) {
      std::snprintf(line, sizeof line, "%-24s %14.6e %12.1e  %s\n", row.name.c_str(), row.value,
                    row.tolerance, row.pass() ? "PASS" : "FAIL");
    } else {
      std::snprintf(line, sizeof line, "%-24s %14.6e %12s  %s\n", row.name.c_str(), row.value,
                    "-", "info");
    }
    os << line;
  }
  return os.str();
}

}  // namespace qbrach
