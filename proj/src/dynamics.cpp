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

#include "qbrach/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qbrach/errors.hpp"

namespace qbrach {

namespace {

constexpr double kUnitarityLimit = 1e-6;
constexpr int kMaxHalvings = 20;
constexpr std::size_t kReunitarizeEvery = 100;

void require_gauge(double lambda0) {
  if (lambda0 == 0.0 || !std::isfinite(lambda0)) {
    throw SingularGaugeError("singular gauge: lambda0 = 0 makes G undefined");
  }
}

}  // namespace

MultiplierVector MultiplierVector::rescaled(double c) const {
  if (c == 0.0) throw ValidationError("cannot rescale multipliers by zero");
  return MultiplierVector{lambda0 / c, lambdas / c};
}

void Trajectory::rescale(double c) {
  if (c == 0.0) throw ValidationError("cannot rescale trajectory by zero");
  for (auto& f : F) f /= c;
  for (auto& m : multipliers) m = m.rescaled(c);
}

Matrix g_operator(const MultiplierVector& m, const GeneratorBasis& basis,
                  const IndexList& forbidden) {
  require_gauge(m.lambda0);
  if (static_cast<std::size_t>(m.lambdas.size()) != forbidden.size()) {
    throw ValidationError("multiplier count does not match the forbidden set");
  }
  return basis.combine(m.lambdas / m.lambda0, forbidden);
}

RealMatrix eta_matrix(const Matrix& h, const GeneratorBasis& basis, const IndexList& forbidden) {
  const auto M = static_cast<Eigen::Index>(forbidden.size());
  RealMatrix eta = RealMatrix::Zero(M, M);
  for (Eigen::Index j = 0; j < M; ++j) {
    for (Eigen::Index l = j + 1; l < M; ++l) {
      const Matrix c = hermitian_commutator(basis.generator(forbidden[j]),
                                            basis.generator(forbidden[l]));
      eta(j, l) = trace_product_real(h, c);
      eta(l, j) = -eta(j, l);
    }
  }
  return eta;
}

MultiplierRates multiplier_rhs(const MultiplierVector& m, const Matrix& h,
                               const RealMatrix& eta, double omega) {
  require_gauge(m.lambda0);
  const double n = static_cast<double>(h.rows());
  MultiplierRates out;
  out.dlambdas = (eta * m.lambdas) / n;
  const double contraction = m.lambdas.dot(eta * m.lambdas);
  out.dlambda0 = -contraction / (2.0 * omega * omega * m.lambda0);
  return out;
}

Matrix assemble_hamiltonian(const MultiplierVector& m, const Matrix& v, const Matrix& f0,
                            const Matrix& g) {
  require_gauge(m.lambda0);
  return hermitian_part(v * f0 * v.adjoint() / m.lambda0 - g);
}

Matrix assemble_hamiltonian(const MultiplierVector& m, const Matrix& v, const Matrix& f0,
                            const GeneratorBasis& basis, const IndexList& forbidden) {
  return assemble_hamiltonian(m, v, f0, g_operator(m, basis, forbidden));
}

void check_hamiltonian_constraints(const ControlProblem& problem, const Matrix& h0,
                                   double tol) {
  const double w = problem.omega();
  if (h0.rows() != static_cast<Eigen::Index>(problem.dim()) || h0.cols() != h0.rows()) {
    throw ValidationError("H0 has the wrong dimension");
  }
  if (hermiticity_defect(h0) > tol * w) throw ValidationError("H0 is not Hermitian");
  if (std::abs(h0.trace()) > tol * w) throw ValidationError("H0 violates Tr H = 0");
  const double norm = trace_product_real(h0, h0);
  if (std::abs(norm - 2 * w * w) > tol * 2 * w * w) {
    std::ostringstream msg;
    msg << "H0 violates Tr H^2 = 2 omega^2 (Tr H^2 = " << norm << ")";
    throw ValidationError(msg.str());
  }
  for (std::size_t j : problem.forbidden()) {
    if (std::abs(trace_product(h0, problem.basis().generator(j))) > tol * w) {
      throw ValidationError("H0 has a component along forbidden generator " +
                            problem.basis().label(j));
    }
  }
}

GoverningFlow::GoverningFlow(const ControlProblem& problem, const MultiplierVector& m0,
                             const Matrix& h0)
    : problem_(problem),
      f0_(m0.lambda0 * (h0 + g_operator(m0, problem.basis(), problem.forbidden()))),
      f0_spectrum_(f0_),
      lambda_init_(m0) {
  f0_ = hermitian_part(f0_);
  for (std::size_t j : problem_.forbidden()) {
    forbidden_gens_.push_back(problem_.basis().generator(j));
  }
  const std::size_t M = forbidden_gens_.size();
  for (std::size_t j = 0; j < M; ++j) {
    for (std::size_t l = j + 1; l < M; ++l) {
      commutators_.push_back(hermitian_commutator(forbidden_gens_[j], forbidden_gens_[l]));
    }
  }
}

GoverningFlow::State GoverningFlow::initial_state() const {
  const auto n = static_cast<Eigen::Index>(problem_.dim());
  State s;
  s.t = 0.0;
  s.V = Matrix::Identity(n, n);
  s.lambda0 = lambda_init_.lambda0;
  s.lambdas = lambda_init_.lambdas;
  s.s = 0.0;
  s.U_direct = Matrix::Identity(n, n);
  return s;
}

GoverningFlow::Deriv GoverningFlow::rhs(const Matrix& v, double lambda0,
                                        const RealVector& lambdas, const Matrix& u) const {
  require_gauge(lambda0);
  const auto n = static_cast<Eigen::Index>(problem_.dim());
  const std::size_t M = forbidden_gens_.size();
  Matrix g = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < M; ++j) {
    g += (lambdas(static_cast<Eigen::Index>(j)) / lambda0) * forbidden_gens_[j];
  }
  const Matrix h = v * f0_ * v.adjoint() / lambda0 - g;

  RealMatrix eta = RealMatrix::Zero(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(M));
  std::size_t k = 0;
  for (std::size_t j = 0; j < M; ++j) {
    for (std::size_t l = j + 1; l < M; ++l, ++k) {
      const double e = trace_product_real(h, commutators_[k]);
      eta(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = e;
      eta(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = -e;
    }
  }
  const MultiplierRates rates =
      multiplier_rhs(MultiplierVector{lambda0, lambdas}, h, eta, problem_.omega());

  Deriv d;
  d.dV = kI * g * v;
  d.dlambda0 = rates.dlambda0;
  d.dlambdas = rates.dlambdas;
  d.ds = 1.0 / lambda0;
  d.dU = -kI * h * u;
  return d;
}

GoverningFlow::State GoverningFlow::rk4(const State& y, double h) const {
  const Deriv k1 = rhs(y.V, y.lambda0, y.lambdas, y.U_direct);
  const Deriv k2 = rhs(y.V + 0.5 * h * k1.dV, y.lambda0 + 0.5 * h * k1.dlambda0,
                       y.lambdas + 0.5 * h * k1.dlambdas, y.U_direct + 0.5 * h * k1.dU);
  const Deriv k3 = rhs(y.V + 0.5 * h * k2.dV, y.lambda0 + 0.5 * h * k2.dlambda0,
                       y.lambdas + 0.5 * h * k2.dlambdas, y.U_direct + 0.5 * h * k2.dU);
  const Deriv k4 = rhs(y.V + h * k3.dV, y.lambda0 + h * k3.dlambda0,
                       y.lambdas + h * k3.dlambdas, y.U_direct + h * k3.dU);
  State out = y;
  const double w = h / 6.0;
  out.V = y.V + w * (k1.dV + 2.0 * k2.dV + 2.0 * k3.dV + k4.dV);
  out.lambda0 = y.lambda0 + w * (k1.dlambda0 + 2.0 * k2.dlambda0 + 2.0 * k3.dlambda0 + k4.dlambda0);
  out.lambdas =
      y.lambdas + w * (k1.dlambdas + 2.0 * k2.dlambdas + 2.0 * k3.dlambdas + k4.dlambdas);
  out.s = y.s + w * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds);
  out.U_direct = y.U_direct + w * (k1.dU + 2.0 * k2.dU + 2.0 * k3.dU + k4.dU);
  out.t = y.t + h;
  return out;
}

void GoverningFlow::advance(State& state, double h, int depth) const {
  State next = rk4(state, h);
  if (next.lambda0 == 0.0 || (next.lambda0 > 0.0) != (state.lambda0 > 0.0)) {
    throw SingularGaugeError("singular gauge: lambda0 crossed zero at t = " +
                             std::to_string(next.t));
  }
  if (unitarity_defect(next.V) > kUnitarityLimit) {
    if (depth >= kMaxHalvings) {
      throw NumericalError("step rejected: unitarity drift of V exceeds 1e-6 after " +
                           std::to_string(kMaxHalvings) + " halvings");
    }
    advance(state, 0.5 * h, depth + 1);
    advance(state, 0.5 * h, depth + 1);
    return;
  }
  state = std::move(next);
}

void GoverningFlow::step(State& state, double h) const {
  const double target = state.t + h;
  advance(state, h, 0);
  state.t = target;
  ++state.steps_taken;
  if (state.steps_taken % kReunitarizeEvery == 0) state.V = polar_unitary(state.V);
}

GoverningFlow::Sample GoverningFlow::sample(const State& state) const {
  Sample out;
  out.t = state.t;
  out.multipliers = MultiplierVector{state.lambda0, state.lambdas};
  out.V = state.V;
  out.G = g_operator(out.multipliers, problem_.basis(), problem_.forbidden());
  out.H = assemble_hamiltonian(out.multipliers, state.V, f0_, out.G);
  out.U = state.V * f0_spectrum_.propagator(state.s);
  out.F = hermitian_part(out.U * f0_ * out.U.adjoint());
  out.psi = out.U * problem_.psi_i().amplitudes();
  out.propagation_mismatch = (out.U - state.U_direct).norm();
  return out;
}

void append_sample(Trajectory& traj, const GoverningFlow::Sample& s) {
  traj.times.push_back(s.t);
  traj.U.push_back(s.U);
  traj.V.push_back(s.V);
  traj.H.push_back(s.H);
  traj.F.push_back(s.F);
  traj.psi.push_back(s.psi);
  traj.multipliers.push_back(s.multipliers);
  traj.propagation_mismatch = std::max(traj.propagation_mismatch, s.propagation_mismatch);
}

Trajectory integrate(const ControlProblem& problem, const MultiplierVector& m0,
                     const Matrix& h0, double t_max, double dt) {
  if (dt <= 0.0) dt = 1e-3 / problem.omega();
  if (!(t_max > 0.0)) throw ValidationError("t_max must be positive");
  check_hamiltonian_constraints(problem, h0);
  const GoverningFlow flow(problem, m0, h0);
  const std::size_t n = steps_for(t_max, dt);
  const std::vector<double> grid = uniform_grid(t_max, n);
  const double h = t_max / static_cast<double>(n);

  Trajectory traj;
  GoverningFlow::State state = flow.initial_state();
  append_sample(traj, flow.sample(state));
  for (std::size_t k = 1; k <= n; ++k) {
    flow.step(state, h);
    state.t = grid[k];
    append_sample(traj, flow.sample(state));
  }
  return traj;
}

}  // namespace qbrach
