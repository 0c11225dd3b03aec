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
#include "qbrach/problem.hpp"
#include "qbrach/solvers.hpp"
#include "qbrach/states.hpp"

using namespace qbrach;

TEST_CASE("pure states are normalized or rejected") {
  Vector v(2);
  v << 1.0, 0.0;
  CHECK_NOTHROW(PureState{v});
  v << 1.0 + 1e-12, 0.0;
  CHECK(PureState(v).amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-15));
  v << 1.0 + 1e-6, 0.0;
  CHECK_THROWS_AS(PureState{v}, ValidationError);
  CHECK(PureState::basis(4, 3).amplitudes()(3) == cplx(1.0, 0.0));
}

TEST_CASE("boundary data reconstructs the target") {
  std::mt19937_64 rng(3);
  for (std::size_t n = 2; n <= 5; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const PureState a(oracle::random_state(n, rng));
      const PureState b(oracle::random_state(n, rng));
      const BoundaryData bd = boundary_data(a, b);
      const cplx ov = a.inner(b);
      CHECK(std::cos(bd.omega_b) == doctest::Approx(std::abs(ov)).epsilon(1e-12));
      CHECK(std::arg(ov) == doctest::Approx(bd.phi).epsilon(1e-12));
      REQUIRE(bd.psi_perp.has_value());
      CHECK(std::abs(a.inner(*bd.psi_perp)) < 1e-12);
      const Vector rebuilt =
          ov * a.amplitudes() + std::sin(bd.omega_b) * bd.psi_perp->amplitudes();
      CHECK((rebuilt - b.amplitudes()).norm() < 1e-12);
    }
  }
}

TEST_CASE("orthogonal and identical endpoints") {
  const BoundaryData orth = boundary_data(PureState::basis(2, 0), PureState::basis(2, 1));
  CHECK(orth.omega_b == doctest::Approx(M_PI / 2));
  CHECK(orth.phase_degenerate);
  CHECK(orth.phi == 0.0);

  const BoundaryData same = boundary_data(PureState::basis(3, 1), PureState::basis(3, 1));
  CHECK(same.omega_b == 0.0);
  CHECK_FALSE(same.psi_perp.has_value());
  CHECK_THROWS_AS(boundary_data(PureState::basis(2, 0), PureState::basis(3, 0)), ValidationError);
}

TEST_CASE("trivial restriction agrees with the free Hamiltonian's components") {
  const ControlProblem base = m1_problem(1.0, std::nullopt);
  for (double phi : {0.0, 0.3, M_PI / 2, M_PI, -2.0}) {
    const PureState target = m1_target(0.4, phi);
    const BoundaryData bd = boundary_data(base.psi_i(), target);
    const Matrix hf = free_hamiltonian(base.psi_i(), bd, 1.0);
    const bool expect = std::abs((hf * oracle::sz()).trace()) < 1e-9;
    const TrivialityResult r = is_trivially_restricted(base.with_target(target), bd);
    CHECK(r.trivial == expect);
    if (!r.trivial) CHECK(*r.witness == 2);
  }
  // sin(phi) = 0 is exactly the trivially restricted case here
  CHECK(is_trivially_restricted(base, boundary_data(base.psi_i(), m1_target(0.4, 0.0))).trivial);
  CHECK_FALSE(
      is_trivially_restricted(base, boundary_data(base.psi_i(), m1_target(0.4, 1.0))).trivial);
}

TEST_CASE("control problem validation") {
  const GeneratorBasis b = build_gellmann_basis(2);
  const PureState s = PureState::basis(2, 0);
  CHECK_THROWS_AS(ControlProblem(b, s, std::nullopt, 0.0, {}), ValidationError);
  CHECK_THROWS_AS(ControlProblem(b, s, std::nullopt, -1.0, {}), ValidationError);
  CHECK_THROWS_AS(ControlProblem(b, s, std::nullopt, NAN, {}), ValidationError);
  CHECK_THROWS_AS(ControlProblem(b, PureState::basis(3, 0), std::nullopt, 1.0, {}),
                  ValidationError);
  CHECK_THROWS_AS(ControlProblem(b, s, std::nullopt, 1.0, {0, 0}), ValidationError);
  const ControlProblem p(b, s, std::nullopt, 1.0, {2});
  CHECK(p.allowed() == IndexList{0, 1});
}
