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

#include "qbrach/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "qbrach/errors.hpp"
#include "qbrach/log.hpp"

namespace qbrach {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFidelityTol = 1e-9;

double default_dt(const ControlProblem& problem, double dt) {
  return dt > 0.0 ? dt : 1e-3 / problem.omega();
}

double op_norm(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  return sorted_eigenvalues(h).cwiseAbs().maxCoeff();
}

/// Closed-form propagation with constant multipliers.
class ClosedForm {
 public:
  ClosedForm(const Matrix& h0, const Matrix& g)
      : h0_(h0), g_(g), g_spec_(g), k_spec_(h0 + g) {}

  Matrix frame(double t) const { return g_spec_.propagator(-t); }
  Matrix propagator(double t) const { return frame(t) * flow(t); }
  Matrix flow(double t) const { return k_spec_.propagator(t); }
  const Matrix& h0() const { return h0_; }
  const Matrix& g() const { return g_; }

 private:
  Matrix h0_, g_;
  HermitianSpectrum g_spec_, k_spec_;
};

/// Divides the trajectory, F0 and multipliers by Re<psi_T|H F|psi_T> and
/// attaches the report.
void finalize(ExtremalSolution& sol, const Tolerances& tol) {
  const Trajectory& tr = sol.trajectory;
  const std::size_t last = tr.size() - 1;
  const EndpointValue ev = endpoint_constraint(tr.psi[last], tr.H[last], tr.F[last]);
  if (std::abs(ev.re) <= 1e-14) {
    throw NoSolutionError("Re<psi(T)|H(T)F(T)|psi(T)> vanishes; the multipliers cannot be "
                          "renormalized");
  }
  sol.trajectory.rescale(ev.re);
  sol.F0 /= ev.re;
  sol.multipliers0 = sol.multipliers0.rescaled(ev.re);
  VerifyOptions vo;
  vo.tolerances = tol;
  sol.report = verify_trajectory(sol.trajectory, sol.problem, vo);
}

double fidelity(const Vector& a, const Vector& b) { return std::abs(a.dot(b)); }

template <typename Fn>
double bisect(Fn&& f, double a, double b, double fa) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

template <typename Fn>
double golden_max(Fn&& f, double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

const char* to_string(SolutionKind kind) {
  switch (kind) {
    case SolutionKind::Free: return "free";
    case SolutionKind::ClosedSubalgebra: return "closed_subalgebra";
    case SolutionKind::M1TwoLevel: return "m1_two_level";
    case SolutionKind::TwoQubitExample: return "two_qubit_example";
    case SolutionKind::Shot: return "shot";
  }
  return "unknown";
}

SolutionKind solution_kind_from_string(const std::string& name) {
  for (SolutionKind k : {SolutionKind::Free, SolutionKind::ClosedSubalgebra,
                         SolutionKind::M1TwoLevel, SolutionKind::TwoQubitExample,
                         SolutionKind::Shot}) {
    if (name == to_string(k)) return k;
  }
  throw ValidationError("unknown solution kind '" + name + "'");
}

double analytic_step(const ControlProblem& problem, const Matrix& h0, const Matrix& g,
                     double dt) {
  const double base = default_dt(problem, dt);
  const double spread = std::max({problem.omega(), op_norm(g), op_norm(h0 + g)});
  return std::min(base, 1e-3 / spread);
}

Trajectory closed_form_trajectory(const ControlProblem& problem, const Matrix& h0,
                                  const MultiplierVector& m0, double t_end, double dt) {
  if (!(t_end > 0.0)) throw ValidationError("trajectory duration must be positive");
  const Matrix g = g_operator(m0, problem.basis(), problem.forbidden());
  const ClosedForm cf(h0, g);
  const Matrix f0 = hermitian_part(m0.lambda0 * (h0 + g));
  const std::size_t n = steps_for(t_end, dt);
  const std::vector<double> grid = uniform_grid(t_end, n);
  const Vector& psi_i = problem.psi_i().amplitudes();

  Trajectory tr;
  tr.times = grid;
  tr.U.reserve(n + 1);
  tr.V.reserve(n + 1);
  tr.H.reserve(n + 1);
  tr.F.reserve(n + 1);
  tr.psi.reserve(n + 1);
  for (double t : grid) {
    const Matrix v = cf.frame(t);
    const Matrix U = v * cf.flow(t);
    tr.V.push_back(v);
    tr.U.push_back(U);
    tr.H.push_back(hermitian_part(v * h0 * v.adjoint()));
    tr.F.push_back(hermitian_part(U * f0 * U.adjoint()));
    tr.psi.push_back(U * psi_i);
    tr.multipliers.push_back(m0);
  }
  return tr;
}

Matrix free_hamiltonian(const PureState& psi_i, const BoundaryData& boundary, double omega) {
  if (!boundary.psi_perp) throw ValidationError("free Hamiltonian needs distinct states");
  const Vector& a = psi_i.amplitudes();
  const Vector& b = boundary.psi_perp->amplitudes();
  const Matrix ab = a * b.adjoint();
  const Matrix sx = ab + ab.adjoint();
  const Matrix sy = -kI * (ab - ab.adjoint());
  return omega * (std::sin(boundary.phi) * sx + std::cos(boundary.phi) * sy);
}

ExtremalSolution solve_free(const PureState& psi_i, const PureState& psi_f, double omega,
                            double dt) {
  if (psi_i.dim() != psi_f.dim()) throw ValidationError("state dimension mismatch");
  ControlProblem problem(build_gellmann_basis(psi_i.dim()), psi_i, psi_f, omega, {});
  ExtremalSolution sol(SolutionKind::Free, problem);
  const BoundaryData bd = boundary_data(psi_i, psi_f);
  const auto n = static_cast<Eigen::Index>(psi_i.dim());
  if (!bd.psi_perp) {
    sol.T = 0.0;
    sol.H0 = Matrix::Zero(n, n);
    sol.F0 = Matrix::Zero(n, n);
    sol.multipliers0 = MultiplierVector{1.0 / (omega * omega), RealVector()};
    sol.warnings.push_back("psi_i and psi_f coincide: T = 0, empty trajectory");
    return sol;
  }
  if (bd.phase_degenerate) {
    sol.warnings.push_back("orthogonal endpoints: phi is arbitrary and was set to 0");
  }
  sol.H0 = free_hamiltonian(psi_i, bd, omega);
  sol.T = bd.omega_b / omega;
  sol.multipliers0 = MultiplierVector{1.0, RealVector()};
  sol.F0 = sol.H0;

  const Vector end = unitary_exp(sol.H0, sol.T) * psi_i.amplitudes();
  if (fidelity(psi_f.amplitudes(), end) < 1.0 - kFidelityTol) {
    throw NumericalError("free Hamiltonian does not reach psi_f");
  }
  const double h = analytic_step(problem, sol.H0, Matrix::Zero(n, n), dt);
  sol.trajectory = closed_form_trajectory(problem, sol.H0, sol.multipliers0, sol.T, h);
  finalize(sol, Tolerances::analytic());
  return sol;
}

cplx closed_endpoint(const ControlProblem& problem, const Matrix& h0, const Matrix& g,
                     double t) {
  const Matrix u = unitary_exp(-g, t) * unitary_exp(h0 + g, t);
  const Matrix w = u.adjoint() * g * u;
  const Vector& psi = problem.psi_i().amplitudes();
  return psi.dot(commutator(h0 + g, w) * psi);
}

ExtremalSolution solve_closed_subalgebra(const ControlProblem& problem, const Matrix& h0,
                                         const MultiplierVector& m0, double t_max,
                                         const ClosedOptions& options) {
  if (!(t_max > 0.0)) throw ValidationError("t_max must be positive");
  const ClosureResult closure = is_closed_subalgebra(problem.basis(), problem.forbidden());
  if (!closure.closed) {
    std::ostringstream msg;
    msg << "forbidden set is not a closed subalgebra (residual " << closure.worst_residual
        << ")";
    throw ValidationError(msg.str());
  }
  check_hamiltonian_constraints(problem, h0);
  const Matrix g = g_operator(m0, problem.basis(), problem.forbidden());
  const Matrix f0 = hermitian_part(m0.lambda0 * (h0 + g));
  const Vector& psi_i = problem.psi_i().amplitudes();
  if (initial_condition_residual(f0, psi_i) > 1e-8 * std::max(1.0, f0.norm())) {
    throw ValidationError("F(0) violates {F(0), P(0)} = F(0)");
  }

  const ClosedForm cf(h0, g);
  const double h = analytic_step(problem, h0, g, options.dt);
  const std::size_t n = steps_for(t_max, h);
  const std::vector<double> grid = uniform_grid(t_max, n);
  const Matrix k = h0 + g;

  auto endpoint_b = [&](double t) {
    const Matrix u = cf.propagator(t);
    const Matrix w = u.adjoint() * g * u;
    return psi_i.dot(commutator(k, w) * psi_i).imag();
  };
  auto re_part = [&](double t) {
    const Matrix u = cf.propagator(t);
    const Matrix v = cf.frame(t);
    const Vector psi = u * psi_i;
    const Matrix ht = v * h0 * v.adjoint();
    const Matrix ft = u * f0 * u.adjoint();
    return psi.dot(ht * (ft * psi)).real();
  };
  auto fid = [&](double t) {
    return fidelity(problem.psi_f()->amplitudes(), cf.propagator(t) * psi_i);
  };

  const double scale_b = 2.0 * op_norm(k) * op_norm(g);
  std::vector<double> b(grid.size());
  double b_max = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    b[i] = endpoint_b(grid[i]);
    b_max = std::max(b_max, std::abs(b[i]));
  }
  const bool degenerate = b_max <= 1e-10 * std::max(scale_b, 1e-300) || scale_b == 0.0;

  std::optional<double> found;
  if (!degenerate) {
    for (std::size_t i = 1; i < grid.size() && !found; ++i) {
      const double eps = 1e-13 * scale_b;
      if (std::abs(b[i - 1]) <= eps && std::abs(b[i]) <= eps) continue;
      double root;
      if (b[i] == 0.0) {
        root = grid[i];
      } else if ((b[i - 1] > 0.0) != (b[i] > 0.0) && b[i - 1] != 0.0) {
        root = bisect(endpoint_b, grid[i - 1], grid[i], b[i - 1]);
      } else {
        continue;
      }
      if (std::abs(re_part(root)) <= 1e-12 * std::max(1.0, f0.norm() * op_norm(k))) continue;
      if (problem.psi_f() && fid(root) < 1.0 - kFidelityTol) continue;
      found = root;
    }
  } else if (problem.psi_f()) {
    // Endpoint condition holds everywhere: stop where the target is reached.
    for (std::size_t i = 1; i < grid.size() && !found; ++i) {
      const double lo = grid[i - 1];
      const double hi = grid[std::min(i + 1, grid.size() - 1)];
      const double f_mid = fid(grid[i]);
      if (f_mid < 1.0 - 1e-4) continue;
      const double t = golden_max(fid, lo, hi);
      if (fid(t) >= 1.0 - kFidelityTol && t > 0.0) found = t;
    }
  } else if (options.target_bures_angle) {
    const double target = *options.target_bures_angle;
    auto angle_gap = [&](double t) {
      return std::acos(std::clamp(fidelity(psi_i, cf.propagator(t) * psi_i), 0.0, 1.0)) -
             target;
    };
    double prev = angle_gap(0.0);
    for (std::size_t i = 1; i < grid.size() && !found; ++i) {
      const double cur = angle_gap(grid[i]);
      if (cur == 0.0) found = grid[i];
      else if ((prev < 0.0) && (cur > 0.0)) found = bisect(angle_gap, grid[i - 1], grid[i], prev);
      prev = cur;
    }
  }
  if (!found) {
    throw NoSolutionError("no root of the closed-subalgebra endpoint condition in (0, t_max]");
  }

  ExtremalSolution sol(SolutionKind::ClosedSubalgebra, problem);
  sol.T = *found;
  sol.H0 = h0;
  sol.F0 = f0;
  sol.multipliers0 = m0;
  if (degenerate) {
    sol.warnings.push_back("endpoint condition is satisfied identically on the window");
  }
  sol.trajectory =
      closed_form_trajectory(problem, h0, m0, sol.T, analytic_step(problem, h0, g, options.dt));
  if (!problem.psi_f()) {
    sol.problem = problem.with_target(PureState(sol.trajectory.psi.back()));
  }
  finalize(sol, Tolerances::analytic());
  return sol;
}

PureState m1_target(double omega_b, double phi) {
  const double s = 1.0 / std::sqrt(2.0);
  const cplx a = std::polar(std::cos(omega_b), phi);
  const double b = std::sin(omega_b);
  Vector v(2);
  v << s * (a + b), s * (a - b);
  return PureState(v);
}

ControlProblem m1_problem(double omega, std::optional<PureState> psi_f) {
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  GeneratorBasis basis = build_pauli_string_basis(1);
  return ControlProblem(basis, PureState(plus), std::move(psi_f), omega, {2});
}

M1FieldValue m1_field(double lambda1, double t, double omega) {
  Matrix sy(2, 2), sz(2, 2);
  sy << 0, -kI, kI, 0;
  sz << 1, 0, 0, -1;
  const Matrix h0 = omega * sy;
  const Matrix g = lambda1 * sz;
  const Matrix v = unitary_exp(-g, t);
  const Matrix u = v * unitary_exp(h0 + g, t);
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Vector psi = u * plus;
  const Matrix ht = v * h0 * v.adjoint();
  const Matrix ft = u * (h0 + g) * u.adjoint();
  const cplx e = psi.dot(ht * (ft * psi));
  return M1FieldValue{std::abs(psi.dot(plus)), e.real(), e.imag()};
}

M1Result solve_m1_two_level(double omega_b, double phi, double omega, int k_max, int l_max,
                            double dt) {
  if (!(omega_b > 0.0 && omega_b < kPi / 2)) {
    throw ValidationError("Omega_B must lie in (0, pi/2)");
  }
  if (!(omega > 0.0)) throw ValidationError("omega must be positive");
  if (k_max < 0 || l_max < 0) throw ValidationError("k_max and l_max must be non-negative");
  const PureState target = m1_target(omega_b, phi);
  const double s2 = std::sin(2 * omega_b), c2 = std::cos(2 * omega_b);
  const double sp = std::sin(phi), cp = std::cos(phi);
  std::vector<M1Branch> branches;

  auto propagate_fidelity = [&](double lambda1, double t, double mu_y) {
    Matrix sy(2, 2), sz(2, 2);
    sy << 0, -kI, kI, 0;
    sz << 1, 0, 0, -1;
    const Matrix u = unitary_exp(-lambda1 * sz, t) * unitary_exp(mu_y * sy + lambda1 * sz, t);
    Vector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return fidelity(target.amplitudes(), u * plus);
  };

  if (std::abs(sp) <= 1e-12) {
    // The constraint is inactive: free evolution with lambda1 = 0.
    M1Branch br;
    br.T = omega_b / omega;
    br.mu_y = -omega * (cp > 0.0 ? 1.0 : -1.0);
    br.fidelity = propagate_fidelity(0.0, br.T, br.mu_y);
    branches.push_back(br);
  } else {
    const double A = kPi / 2 - std::atan(sp * std::tan(2 * omega_b));  // arccot in (0, pi)
    for (int k = 0; k <= k_max; ++k) {
      const double big = kPi / 4 + k * kPi / 2;  // Lambda1 T
      const double sign_k = (k % 2 == 0) ? 1.0 : -1.0;
      for (int l = -l_max; l <= l_max; ++l) {
        const double small = 0.5 * (A + l * kPi);  // lambda1 T
        const double radicand = big * big - small * small;
        if (radicand <= 0.0) continue;
        M1Branch br;
        br.k = k;
        br.l = l;
        br.T = std::sqrt(radicand) / omega;
        br.lambda1 = small / br.T;
        br.mu_y = omega;
        br.sin_theta1 = small / big;
        const double cos_theta1 = omega * br.T / big;
        br.diag_residual = std::abs(sign_k * cos_theta1 + cp * s2);
        br.offdiag1_residual = std::abs(sign_k * br.sin_theta1 * std::sin(2 * small) - c2);
        br.offdiag2_residual = std::abs(sign_k * br.sin_theta1 * std::cos(2 * small) - sp * s2);
        // Compatibility: the magnitude fixed by the ratio must match both
        // off-diagonal equations, signs included.
        if (std::max(br.offdiag1_residual, br.offdiag2_residual) > 1e-9) continue;
        if (std::max({br.diag_residual, br.offdiag1_residual, br.offdiag2_residual}) > 1e-8) {
          continue;
        }
        br.fidelity = propagate_fidelity(br.lambda1, br.T, br.mu_y);
        if (br.fidelity < 1.0 - kFidelityTol) continue;
        br.endpoint_im = std::abs(br.lambda1 * std::cos(2 * big)) / omega;
        branches.push_back(br);
      }
    }
  }
  if (branches.empty()) {
    throw NoSolutionError("no (k, l) pair satisfies the compatibility condition; the "
                          "extremal-time trajectory does not exist in the enumeration window");
  }
  std::sort(branches.begin(), branches.end(),
            [](const M1Branch& a, const M1Branch& b) { return a.T < b.T; });
  ExtremalSolution best = materialize_m1_branch(branches.front(), omega, target, dt);
  return M1Result{std::move(branches), 0, std::move(best)};
}

ExtremalSolution materialize_m1_branch(const M1Branch& branch, double omega,
                                       const PureState& psi_f, double dt) {
  ControlProblem problem = m1_problem(omega, psi_f);
  ExtremalSolution sol(SolutionKind::M1TwoLevel, problem);
  const Matrix& sy = problem.basis().generator(1);
  sol.H0 = (branch.mu_y != 0.0 ? branch.mu_y : omega) * sy;
  sol.multipliers0 = MultiplierVector{1.0, RealVector::Constant(1, branch.lambda1)};
  const Matrix g = g_operator(sol.multipliers0, problem.basis(), problem.forbidden());
  sol.F0 = hermitian_part(sol.H0 + g);
  sol.T = branch.T;
  sol.branch = std::make_pair(branch.k, branch.l);
  if (branch.lambda1 == 0.0) sol.warnings.push_back("free branch: lambda1 = 0");
  sol.trajectory = closed_form_trajectory(problem, sol.H0, sol.multipliers0, sol.T,
                                          analytic_step(problem, sol.H0, g, dt));
  finalize(sol, Tolerances::analytic());
  return sol;
}

std::vector<SweepRow> sweep_m1(double lt_min, double lt_max, std::size_t n, double t_min,
                               double t_max, std::size_t m, double omega, unsigned threads) {
  if (n == 0 || m == 0) throw ValidationError("sweep grid must be non-empty");
  if (!(t_max > t_min)) throw ValidationError("sweep needs t_max > t_min");
  if (!(omega > 0.0)) throw ValidationError("omega must be positive");
  std::vector<SweepRow> rows(n * m);
  auto lambda_at = [&](std::size_t i) {
    return n == 1 ? lt_min : lt_min + (lt_max - lt_min) * static_cast<double>(i) /
                                          static_cast<double>(n - 1);
  };
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < n; i += stride) {
      const double lt = lambda_at(i);
      for (std::size_t j = 0; j < m; ++j) {
        const double t = t_min + (t_max - t_min) * static_cast<double>(j + 1) /
                                     static_cast<double>(m);
        rows[i * m + j] = SweepRow{lt, t, m1_field(lt * omega * omega, t, omega)};
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w, threads);
  work(0, threads);
  for (auto& th : pool) th.join();
  return rows;
}

IndexList two_qubit_forbidden() {
  // Digit strings 10 20 30 01 02 03 11 12 13 21 31; index = 4a + b - 1.
  return {3, 7, 11, 0, 1, 2, 4, 5, 6, 8, 12};
}

ControlProblem two_qubit_problem(double omega, std::optional<PureState> psi_f) {
  return ControlProblem(build_pauli_string_basis(2), PureState::basis(4, 3), std::move(psi_f),
                        omega, two_qubit_forbidden());
}

TwoQubitSeed build_two_qubit_f0(double mu22, double mu23, double mu32, double omega,
                                const TwoQubitFree& free) {
  if (!(omega > 0.0)) throw ValidationError("omega must be positive");
  const double norm = mu22 * mu22 + mu23 * mu23 + mu32 * mu32;
  if (std::abs(norm - omega * omega / 2.0) > 1e-10 * omega * omega) {
    std::ostringstream msg;
    msg << "mu22^2 + mu23^2 + mu32^2 = " << norm << " violates the norm omega^2/2 = "
        << omega * omega / 2.0;
    throw ValidationError(msg.str());
  }
  const GeneratorBasis basis = build_pauli_string_basis(2);
  auto X = [&](const char* digits) -> const Matrix& {
    return basis.generator(basis.index_of(digits));
  };
  TwoQubitSeed seed;
  seed.H0 = mu22 * X("22") + mu23 * X("23") + mu32 * X("32");
  RealVector lam(11);
  // Order: 10 20 30 01 02 03 11 12 13 21 31.
  lam << free.lambda10, -mu23, 0.0, free.lambda01, -mu32, 0.0, -mu22, free.lambda12,
      -free.lambda10, free.lambda12, -free.lambda01;
  seed.multipliers = MultiplierVector{1.0, lam};
  seed.F0 = seed.H0 + basis.combine(lam, two_qubit_forbidden());
  return seed;
}

ExtremalSolution solve_two_qubit_example(double omega_b, double omega, double dt) {
  if (!(omega_b > 0.0 && omega_b <= kPi / 2 + 1e-12)) {
    throw ValidationError("Omega_B must lie in (0, pi/2]");
  }
  const double c = std::cos(omega_b), s = std::sin(omega_b);
  Vector target = Vector::Zero(4);
  target(3) = cplx(0.0, -c);  // cos(Omega_B) e^{-i pi/2} |11>
  target(0) = s;              // sin(Omega_B) |00>
  ControlProblem problem = two_qubit_problem(omega, PureState(target));
  const TwoQubitSeed seed = build_two_qubit_f0(omega / std::sqrt(2.0), 0.0, 0.0, omega);

  ExtremalSolution sol(SolutionKind::TwoQubitExample, problem);
  sol.H0 = seed.H0;
  sol.F0 = seed.F0;
  sol.multipliers0 = seed.multipliers;
  sol.T = std::sqrt(2.0) * omega_b / omega;
  const Matrix g = g_operator(seed.multipliers, problem.basis(), problem.forbidden());
  sol.trajectory = closed_form_trajectory(problem, sol.H0, sol.multipliers0, sol.T,
                                          analytic_step(problem, sol.H0, g, dt));
  const Vector& end = sol.trajectory.psi.back();
  Vector expected = Vector::Zero(4);
  expected(3) = std::cos(omega * sol.T / std::sqrt(2.0));
  expected(0) = cplx(0.0, std::sin(omega * sol.T / std::sqrt(2.0)));
  if ((end - expected).norm() > 1e-9 || fidelity(target, end) < 1.0 - kFidelityTol) {
    throw NumericalError("two-qubit propagation does not reach the expected final state");
  }
  finalize(sol, Tolerances::analytic());
  return sol;
}

ExtremalSolution shoot(const ControlProblem& problem, const Matrix& h0_seed,
                       const MultiplierVector& m0_seed, double t_max,
                       const ShootOptions& options) {
  if (!(t_max > 0.0)) throw ValidationError("t_max must be positive");
  const double omega = problem.omega();
  const auto n = static_cast<Eigen::Index>(problem.dim());
  const Vector& psi_i = problem.psi_i().amplitudes();
  std::vector<std::string> warnings;

  // Enforce {F(0), P(0)} = F(0): keep only the psi_i / complement blocks.
  const Matrix g_seed = g_operator(m0_seed, problem.basis(), problem.forbidden());
  const Matrix f_seed = hermitian_part(m0_seed.lambda0 * (h0_seed + g_seed));
  const Matrix p = psi_i * psi_i.adjoint();
  const Matrix q = Matrix::Identity(n, n) - p;
  Matrix f0 = p * f_seed * q + q * f_seed * p;
  const double removed = (f_seed - f0).norm() / std::max(f_seed.norm(), 1e-300);
  if (removed > 1e-12) {
    std::ostringstream msg;
    msg << "seed F(0) projected onto the {F, P} = F structure; relative change " << removed;
    warnings.push_back(msg.str());
    QB_LOG(1, msg.str());
  }
  Matrix h0 = problem.basis().project(f0, problem.allowed());
  const double h_norm = trace_product_real(h0, h0);
  if (h_norm <= 1e-24) {
    throw ValidationError("projected seed has no component along allowed generators");
  }
  const double kappa = std::sqrt(2.0 * omega * omega / h_norm);
  f0 *= kappa;
  h0 = hermitian_part(h0 * kappa);
  MultiplierVector m0{1.0, RealVector(problem.forbidden().size())};
  for (std::size_t j = 0; j < problem.forbidden().size(); ++j) {
    m0.lambdas(static_cast<Eigen::Index>(j)) =
        trace_product_real(f0, problem.basis().generator(problem.forbidden()[j])) /
        static_cast<double>(problem.dim());
  }

  const double dt = default_dt(problem, options.dt);
  const GoverningFlow flow(problem, m0, h0);
  const std::size_t steps = steps_for(t_max, dt);
  const double h = t_max / static_cast<double>(steps);

  auto endpoint_at = [&](const GoverningFlow::State& st) {
    const GoverningFlow::Sample s = flow.sample(st);
    return endpoint_constraint(s.psi, s.H, s.F);
  };
  auto advance_to = [&](const GoverningFlow::State& from, double t) {
    GoverningFlow::State st = from;
    if (t > st.t) flow.step(st, t - st.t);
    st.t = t;
    return st;
  };

  GoverningFlow::State prev = flow.initial_state();
  EndpointValue ev_prev = endpoint_at(prev);
  double s_scale = std::abs(ev_prev.re);
  double s_max = std::abs(ev_prev.im);
  std::optional<double> root;
  std::vector<GoverningFlow::State> history;  // only for the Bures-angle fallback
  history.push_back(prev);

  for (std::size_t k = 1; k <= steps && !root; ++k) {
    GoverningFlow::State cur = prev;
    flow.step(cur, h);
    cur.t = t_max * static_cast<double>(k) / static_cast<double>(steps);
    const EndpointValue ev = endpoint_at(cur);
    s_scale = std::max(s_scale, std::abs(ev.re));
    s_max = std::max(s_max, std::abs(ev.im));
    const double eps = 1e-12 * std::max(s_scale, 1e-300);
    const bool significant = std::abs(ev_prev.im) > eps || std::abs(ev.im) > eps;
    const bool crossing = significant && (ev.im == 0.0 || (ev_prev.im != 0.0 &&
                                                           (ev_prev.im > 0.0) != (ev.im > 0.0)));
    if (crossing) {
      const GoverningFlow::State base = prev;
      auto s_of = [&](double t) { return endpoint_at(advance_to(base, t)).im; };
      double t_root = ev.im == 0.0 ? cur.t : bisect(s_of, prev.t, cur.t, ev_prev.im);
      // Newton polish with a centred finite-difference slope.
      for (int it = 0; it < 3; ++it) {
        const double delta = 1e-6 * h;
        const double s0 = s_of(t_root);
        const double slope = (s_of(std::min(cur.t, t_root + delta)) -
                              s_of(std::max(prev.t, t_root - delta))) /
                             (std::min(cur.t, t_root + delta) - std::max(prev.t, t_root - delta));
        if (slope == 0.0 || !std::isfinite(slope)) break;
        const double next = t_root - s0 / slope;
        if (next <= prev.t || next > cur.t || std::abs(s_of(next)) >= std::abs(s0)) break;
        t_root = next;
      }
      const EndpointValue at_root = endpoint_at(advance_to(base, t_root));
      if (std::abs(at_root.re) > 1e-12 * std::max(1.0, s_scale) &&
          std::abs(at_root.im) <= options.root_tol * std::abs(at_root.re)) {
        root = t_root;
        break;
      }
    }
    prev = std::move(cur);
    ev_prev = ev;
    if (options.target_bures_angle) history.push_back(prev);
  }

  const bool degenerate = !root && s_max <= 1e-10 * std::max(s_scale, 1e-300);
  if (!root && degenerate && options.target_bures_angle) {
    const double target = *options.target_bures_angle;
    auto gap = [&](const GoverningFlow::State& st) {
      return std::acos(std::clamp(fidelity(psi_i, flow.sample(st).psi), 0.0, 1.0)) - target;
    };
    for (std::size_t k = 1; k < history.size() && !root; ++k) {
      const double g0 = gap(history[k - 1]), g1 = gap(history[k]);
      if (g0 < 0.0 && g1 >= 0.0) {
        const GoverningFlow::State base = history[k - 1];
        root = g1 == 0.0 ? history[k].t
                         : bisect([&](double t) { return gap(advance_to(base, t)); }, base.t,
                                  history[k].t, g0);
      }
    }
    if (root) warnings.push_back("endpoint condition holds identically; stopped at the target "
                                 "Bures angle");
  }
  if (!root) {
    throw NoSolutionError(degenerate
                              ? "Im<psi|H F|psi> vanishes identically and no target Bures "
                                "angle was given"
                              : "no extremal found: Im<psi|H F|psi> has no root with nonzero "
                                "real part in (0, t_max]");
  }

  ControlProblem solved = problem.with_target(std::nullopt);
  ExtremalSolution sol(SolutionKind::Shot, solved);
  sol.T = *root;
  sol.H0 = h0;
  sol.F0 = f0;
  sol.multipliers0 = m0;
  sol.warnings = warnings;
  sol.trajectory = integrate(problem, m0, h0, sol.T, dt);
  sol.problem = problem.with_target(PureState(sol.trajectory.psi.back()));
  finalize(sol, Tolerances::integrated());
  return sol;
}

}  // namespace qbrach
