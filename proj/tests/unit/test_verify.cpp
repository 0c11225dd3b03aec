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

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qbrach/errors.hpp"
#include "qbrach/solvers.hpp"
#include "qbrach/verify.hpp"

using namespace qbrach;

namespace {

// Qubit trajectory at constant lambda1 with psi_f = psi(T), renormalized so
// that Re<psi_f|H F|psi_f> = 1.
struct QubitCase {
  ControlProblem problem;
  Trajectory traj;
};

QubitCase qubit_case(double lambda1, double t_end, double dt) {
  const double w = 1.0;
  ControlProblem p = m1_problem(w, std::nullopt);
  const MultiplierVector m{1.0, RealVector::Constant(1, lambda1)};
  Trajectory tr = closed_form_trajectory(p, w * oracle::sy(), m, t_end, dt);
  const EndpointValue ev = endpoint_constraint(tr.psi.back(), tr.H.back(), tr.F.back());
  tr.rescale(ev.re);
  return {p.with_target(PureState(tr.psi.back())), std::move(tr)};
}

}  // namespace

TEST_CASE("energy uncertainty") {
  CHECK(energy_uncertainty(oracle::sy(), PureState::basis(2, 0).amplitudes()) ==
        doctest::Approx(1.0));
  CHECK(energy_uncertainty(oracle::sz(), PureState::basis(2, 0).amplitudes()) ==
        doctest::Approx(0.0));
}

TEST_CASE("initial condition residual") {
  const Vector psi = PureState::basis(2, 0).amplitudes();
  // F0 = |0><1| + |1><0| satisfies {F, P} = F; sz does not.
  CHECK(initial_condition_residual(oracle::sx(), psi) < 1e-15);
  CHECK(initial_condition_residual(oracle::sz(), psi) > 0.5);
}

TEST_CASE("CHKO residual converges at second order and the fourth-order row is far smaller") {
  const QubitCase a = qubit_case(0.9, 1.0, 1e-2);
  const QubitCase b = qubit_case(0.9, 1.0, 5e-3);
  const double ra = chko_residual(a.traj, 1.0, 2);
  const double rb = chko_residual(b.traj, 1.0, 2);
  CHECK(ra / rb == doctest::Approx(4.0).epsilon(0.25));
  CHECK(chko_residual(b.traj, 1.0, 4) < rb * 1e-2);
}

TEST_CASE("the two endpoint forms agree") {
  for (double l1 : {-1.2, 0.3, 2.5}) {
    const QubitCase c = qubit_case(l1, 0.8, 1e-3);
    const std::size_t last = c.traj.size() - 1;
    const EndpointValue ev = endpoint_constraint(c.traj.psi[last], c.traj.H[last], c.traj.F[last]);
    const Matrix g = g_operator(c.traj.multipliers[last], c.problem.basis(), c.problem.forbidden());
    const cplx alt = endpoint_constraint_initial_form(c.problem.psi_i().amplitudes(),
                                                      c.traj.U[last], c.traj.H[last], g);
    CHECK(std::abs(alt.real()) < 1e-12);
    CHECK(ev.im == doctest::Approx(c.traj.multipliers[last].lambda0 * alt.imag() / 2).epsilon(1e-10));
    CHECK(ev.re == doctest::Approx(1.0));
  }
}

TEST_CASE("gate form needs a traceless F") {
  CHECK(endpoint_constraint_gate(oracle::sy(), 0.5 * oracle::sy()) == doctest::Approx(0.0));
  CHECK_THROWS_AS(endpoint_constraint_gate(oracle::sy(), oracle::id(2)), NumericalError);
}

TEST_CASE("report on a valid closed-form trajectory") {
  const QubitCase c = qubit_case(0.0, 0.7, 1e-3);
  VerifyOptions vo;
  vo.tolerances = Tolerances::analytic();
  const VerificationReport r = verify_trajectory(c.traj, c.problem, vo);
  CHECK(r.passed());
  CHECK(r.speed_max_excess <= 1e-12);
  bool saw_info = false;
  for (const ReportRow& row : r.rows()) {
    if (row.name == "chko_residual") saw_info = !row.checked;
    if (row.name == "endpoint_re") CHECK(row.deviation == doctest::Approx(std::abs(r.endpoint_re - 1)));
  }
  CHECK(saw_info);
  CHECK(r.table().find("FAIL") == std::string::npos);
}

TEST_CASE("off the zero set only the endpoint row fails") {
  // lambda1 T away from any extremal branch
  const QubitCase c = qubit_case(0.37, 0.45, 1e-3);
  VerifyOptions vo;
  vo.tolerances = Tolerances::analytic();
  const VerificationReport r = verify_trajectory(c.traj, c.problem, vo);
  const auto fails = r.failures();
  REQUIRE(fails.size() >= 1);
  for (const std::string& f : fails) CHECK((f == "endpoint_im" || f == "endpoint_agreement"));
}

TEST_CASE("freezing F breaks the state-projected form") {
  QubitCase c = qubit_case(0.6, 0.9, 1e-3);
  CHECK(equivalence_check(c.traj, 1.0).state_projected < 1e-8);
  for (Matrix& f : c.traj.F) f = c.traj.F.front();
  const EquivalenceResult e = equivalence_check(c.traj, 1.0);
  CHECK(e.state_projected > 1e-3);
  CHECK(chko_residual(c.traj, 1.0, 4) > 1e-3);
}

TEST_CASE("speed profile of the two-qubit example") {
  const ExtremalSolution s = solve_two_qubit_example(0.7, 10.0);
  const SpeedProfile sp = speed_profile(s.trajectory, s.problem);
  for (double de : sp.delta_e) CHECK(de == doctest::Approx(10.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(sp.decomposition_mismatch < 1e-10);
}

TEST_CASE("tolerance presets") {
  const Tolerances a = Tolerances::analytic();
  const Tolerances i = Tolerances::integrated();
  CHECK(a.chko == 1e-8);
  CHECK(i.chko == 1e-6);
  CHECK(i.initial == 1e-8);
  CHECK(i.speed == 1e-9);
}
