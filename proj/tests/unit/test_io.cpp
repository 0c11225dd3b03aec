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

#include "oracles.hpp"
#include "qbrach/errors.hpp"
#include "qbrach/io.hpp"

using namespace qbrach;

namespace {

json qubit_file() {
  return json::parse(R"({
    "version": 1, "dimension": 2, "omega": 1.5, "basis": "pauli_strings",
    "psi_i": [[0.7071067811865476, 0], [0.7071067811865476, 0]],
    "psi_f": [1, 0, 0, 0],
    "forbidden": ["z"],
    "solver": "shoot",
    "solver_params": {"mu": {"y": 1.5}, "multipliers": {"lambda0": 2.0, "lambdas": {"z": 0.25}},
                      "t_max": 2.0}
  })");
}

}  // namespace

TEST_CASE("problem files") {
  const ProblemFile f = parse_problem(qubit_file());
  CHECK(f.dimension == 2);
  CHECK(f.forbidden == IndexList{2});
  REQUIRE(f.psi_f.has_value());
  CHECK((*f.psi_f)(0) == cplx(1, 0));
  const ControlProblem p = to_control_problem(f);
  CHECK(p.omega() == 1.5);
  const Matrix h = hamiltonian_from_params(p, f.solver_params);
  CHECK((h - 1.5 * oracle::sy()).norm() < 1e-15);
  const MultiplierVector m = multipliers_from_params(p, f.solver_params);
  CHECK(m.lambda0 == 2.0);
  CHECK(m.lambdas(0) == 0.25);
}

TEST_CASE("malformed problem files are validation errors") {
  json j = qubit_file();
  j["dimension"] = 3;
  CHECK_THROWS_AS(parse_problem(j), ValidationError);
  j = qubit_file();
  j["forbidden"] = json::array({"q"});
  CHECK_THROWS_AS(parse_problem(j), ValidationError);
  j = qubit_file();
  j["forbidden"] = json::array({5});
  CHECK_THROWS_AS(parse_problem(j), ValidationError);
  j = qubit_file();
  j.erase("omega");
  CHECK_THROWS_AS(parse_problem(j), ValidationError);
  j = qubit_file();
  j["basis"] = "pauli_strings";
  j["dimension"] = 3;
  j["psi_i"] = json::array({json::array({1, 0}), json::array({0, 0}), json::array({0, 0})});
  j.erase("psi_f");
  CHECK_THROWS_AS(parse_problem(j), ValidationError);
  j = qubit_file();
  j["solver_params"]["mu"] = {{"z", 1.0}};
  const ProblemFile f = parse_problem(j);
  CHECK_THROWS_AS(hamiltonian_from_params(to_control_problem(f), f.solver_params), ValidationError);
}

TEST_CASE("solution JSON round trip is exact") {
  const ExtremalSolution s = solve_two_qubit_example(0.7, 3.0, 1e-2);
  const json j = solution_to_json(s);
  const ExtremalSolution back = solution_from_json(json::parse(dump(j)));
  CHECK(back.T == s.T);
  CHECK(back.kind == s.kind);
  REQUIRE(back.trajectory.size() == s.trajectory.size());
  for (std::size_t k = 0; k < s.trajectory.size(); ++k) {
    CHECK(back.trajectory.U[k] == s.trajectory.U[k]);
    CHECK(back.trajectory.F[k] == s.trajectory.F[k]);
    CHECK(back.trajectory.times[k] == s.trajectory.times[k]);
  }
  CHECK(back.report.chko_residual_hi == s.report.chko_residual_hi);
  CHECK(back.report.tolerances.chko == s.report.tolerances.chko);
  CHECK(dump(solution_to_json(back)) == dump(j));
}

TEST_CASE("vectors and matrices") {
  Vector v(2);
  v << cplx(0.1, -0.2), cplx(3, 4);
  CHECK(vector_from_json(vector_to_json(v)) == v);
  CHECK(vector_from_json(json::parse("[0.1, -0.2, 3, 4]")) == v);
  CHECK_THROWS_AS(vector_from_json(json::parse("[1, 2, 3]")), ValidationError);
  const Matrix m = oracle::sy();
  CHECK(matrix_from_json(matrix_to_json(m), 2) == m);
  CHECK_THROWS_AS(matrix_from_json(matrix_to_json(m), 3), ValidationError);
}

TEST_CASE("non-finite report values survive as null") {
  VerificationReport r;
  r.endpoint_im = INFINITY;
  const VerificationReport back = report_from_json(json::parse(dump(report_to_json(r))));
  CHECK(std::isinf(back.endpoint_im));
}

TEST_CASE("CSV outputs") {
  const ExtremalSolution s = solve_two_qubit_example(0.7, 3.0, 1e-2);
  const std::string csv = trajectory_csv(s);
  CHECK(csv.rfind("t,lambda0,", 0) == 0);
  const auto lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(static_cast<std::size_t>(lines) == s.trajectory.size() + 1);

  const auto rows = sweep_m1(-0.01, 0.01, 3, 0.0, 0.3, 2, 10.0, 1);
  const std::string sc = sweep_csv(rows, 10.0);
  CHECK(std::count(sc.begin(), sc.end(), '\n') == 7);
  CHECK(sweep_to_json(rows, 10.0)["points"].size() == 6);
}
