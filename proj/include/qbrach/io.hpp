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

#include <json.hpp>

#include "qbrach/solvers.hpp"

namespace qbrach {

using json = nlohmann::json;

/// Contents of a problem file. `solver_params` is kept as raw JSON because
/// each solver reads a different subset.
struct ProblemFile {
  int version = 1;
  std::size_t dimension = 0;
  double omega = 1.0;
  BasisKind basis = BasisKind::GellMann;
  Vector psi_i;
  std::optional<Vector> psi_f;
  IndexList forbidden;
  std::string solver;
  json solver_params = json::object();
};

ProblemFile parse_problem(const json& j);
ControlProblem to_control_problem(const ProblemFile& file);

/// H0 = sum mu_j Y_j from solver_params.mu ({label: value}).
Matrix hamiltonian_from_params(const ControlProblem& problem, const json& params);

/// MultiplierVector from solver_params.multipliers ({lambda0, lambdas: {label: value}});
/// missing entries are zero, lambda0 defaults to 1.
MultiplierVector multipliers_from_params(const ControlProblem& problem, const json& params);

/// Complex vector as [[re, im], ...]; flat interleaved arrays are also read.
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

/// Square matrix as a flat row-major array of interleaved re, im.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, std::size_t dim);

json problem_to_json(const ControlProblem& problem);
ControlProblem problem_from_json(const json& j);

json report_to_json(const VerificationReport& report);
VerificationReport report_from_json(const json& j);

json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const json& j, std::size_t dim);

json solution_to_json(const ExtremalSolution& sol);
ExtremalSolution solution_from_json(const json& j);

/// t, multipliers, dE, and the per-sample constraint residuals.
std::string trajectory_csv(const ExtremalSolution& sol);

std::string sweep_csv(const std::vector<SweepRow>& rows, double omega);
json sweep_to_json(const std::vector<SweepRow>& rows, double omega);

/// Stable formatting: 2-space indent, keys sorted.
std::string dump(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qbrach
