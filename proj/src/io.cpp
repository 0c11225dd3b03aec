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

#include "qbrach/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "qbrach/errors.hpp"

namespace qbrach {

namespace {

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
}

// nlohmann writes non-finite numbers as null.
double number_or_inf(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

std::size_t resolve_index(const GeneratorBasis& basis, const json& item) {
  if (item.is_number_integer()) {
    const auto v = item.get<long long>();
    if (v < 0 || static_cast<std::size_t>(v) >= basis.size()) {
      throw ValidationError("generator index " + std::to_string(v) + " out of range");
    }
    return static_cast<std::size_t>(v);
  }
  if (item.is_string()) return basis.index_of(item.get<std::string>());
  throw ValidationError("generator reference must be a label or an index");
}

GeneratorBasis make_basis(BasisKind kind, std::size_t dim) {
  if (kind == BasisKind::GellMann) return build_gellmann_basis(dim);
  std::size_t qubits = 0;
  while ((std::size_t{1} << qubits) < dim) ++qubits;
  if ((std::size_t{1} << qubits) != dim) {
    throw ValidationError("pauli_strings basis needs a power-of-two dimension");
  }
  return build_pauli_string_basis(qubits);
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back({v(k).real(), v(k).imag()});
  return out;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("state must be an array");
  if (!j.empty() && j.front().is_array()) {
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) {
      const json& pair = j[k];
      if (!pair.is_array() || pair.size() != 2) {
        throw ValidationError("complex entries must be [re, im] pairs");
      }
      v(static_cast<Eigen::Index>(k)) = cplx(pair[0].get<double>(), pair[1].get<double>());
    }
    return v;
  }
  if (j.size() % 2 != 0) throw ValidationError("interleaved complex array has odd length");
  Vector v(static_cast<Eigen::Index>(j.size() / 2));
  for (std::size_t k = 0; k < j.size() / 2; ++k) {
    v(static_cast<Eigen::Index>(k)) = cplx(j[2 * k].get<double>(), j[2 * k + 1].get<double>());
  }
  return v;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out.push_back(m(r, c).real());
      out.push_back(m(r, c).imag());
    }
  }
  return out;
}

Matrix matrix_from_json(const json& j, std::size_t dim) {
  if (!j.is_array() || j.size() != 2 * dim * dim) {
    throw ValidationError("matrix must be a flat array of 2 N^2 numbers");
  }
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix m(n, n);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c, k += 2) {
      m(r, c) = cplx(j[k].get<double>(), j[k + 1].get<double>());
    }
  }
  return m;
}

ProblemFile parse_problem(const json& j) {
  if (!j.is_object()) throw ValidationError("problem file must be a JSON object");
  ProblemFile p;
  p.version = j.value("version", 1);
  if (p.version != 1) throw ValidationError("unsupported problem version");
  p.dimension = required<std::size_t>(j, "dimension");
  p.omega = required<double>(j, "omega");
  p.basis = basis_kind_from_string(j.value("basis", std::string("gellmann")));
  p.psi_i = vector_from_json(required<json>(j, "psi_i"));
  if (j.contains("psi_f") && !j.at("psi_f").is_null()) p.psi_f = vector_from_json(j.at("psi_f"));
  if (static_cast<std::size_t>(p.psi_i.size()) != p.dimension ||
      (p.psi_f && static_cast<std::size_t>(p.psi_f->size()) != p.dimension)) {
    throw ValidationError("state length does not match 'dimension'");
  }
  const GeneratorBasis basis = make_basis(p.basis, p.dimension);
  if (j.contains("forbidden")) {
    for (const json& item : j.at("forbidden")) p.forbidden.push_back(resolve_index(basis, item));
  }
  p.solver = j.value("solver", std::string());
  if (j.contains("solver_params")) p.solver_params = j.at("solver_params");
  return p;
}

ControlProblem to_control_problem(const ProblemFile& file) {
  std::optional<PureState> psi_f;
  if (file.psi_f) psi_f = PureState(*file.psi_f);
  return ControlProblem(make_basis(file.basis, file.dimension), PureState(file.psi_i), psi_f,
                        file.omega, file.forbidden);
}

Matrix hamiltonian_from_params(const ControlProblem& problem, const json& params) {
  if (!params.contains("mu")) throw ValidationError("solver_params.mu is required");
  const auto n = static_cast<Eigen::Index>(problem.dim());
  Matrix h = Matrix::Zero(n, n);
  for (const auto& [label, value] : params.at("mu").items()) {
    const std::size_t idx = problem.basis().index_of(label);
    if (std::find(problem.forbidden().begin(), problem.forbidden().end(), idx) !=
        problem.forbidden().end()) {
      throw ValidationError("mu given for forbidden generator " + label);
    }
    h += value.get<double>() * problem.basis().generator(idx);
  }
  return h;
}

MultiplierVector multipliers_from_params(const ControlProblem& problem, const json& params) {
  MultiplierVector m{1.0, RealVector::Zero(static_cast<Eigen::Index>(problem.forbidden().size()))};
  if (!params.contains("multipliers")) return m;
  const json& mj = params.at("multipliers");
  m.lambda0 = mj.value("lambda0", 1.0);
  if (mj.contains("lambdas")) {
    for (const auto& [label, value] : mj.at("lambdas").items()) {
      const std::size_t idx = problem.basis().index_of(label);
      auto it = std::find(problem.forbidden().begin(), problem.forbidden().end(), idx);
      if (it == problem.forbidden().end()) {
        throw ValidationError("multiplier given for non-forbidden generator " + label);
      }
      m.lambdas(static_cast<Eigen::Index>(it - problem.forbidden().begin())) = value.get<double>();
    }
  }
  return m;
}

json problem_to_json(const ControlProblem& problem) {
  json j;
  j["version"] = 1;
  j["dimension"] = problem.dim();
  j["omega"] = problem.omega();
  j["basis"] = to_string(problem.basis().kind());
  j["psi_i"] = vector_to_json(problem.psi_i().amplitudes());
  j["psi_f"] = problem.psi_f() ? vector_to_json(problem.psi_f()->amplitudes()) : json(nullptr);
  json labels = json::array();
  for (std::size_t idx : problem.forbidden()) labels.push_back(problem.basis().label(idx));
  j["forbidden"] = problem.forbidden();
  j["forbidden_labels"] = labels;
  return j;
}

ControlProblem problem_from_json(const json& j) {
  return to_control_problem(parse_problem(j));
}

json report_to_json(const VerificationReport& r) {
  json j;
  for (const ReportRow& row : r.rows()) j[row.name] = row.value;
  j["passed"] = r.passed();
  json tol;
  const Tolerances& t = r.tolerances;
  tol["constraints"] = t.constraints;
  tol["chko"] = t.chko;
  tol["initial"] = t.initial;
  tol["endpoint"] = t.endpoint;
  tol["agreement"] = t.agreement;
  tol["equivalence"] = t.equivalence;
  tol["propagation"] = t.propagation;
  tol["unitarity"] = t.unitarity;
  tol["state"] = t.state;
  tol["speed"] = t.speed;
  tol["speed_decomposition"] = t.speed_decomposition;
  tol["trf2"] = t.trf2;
  tol["lambda0"] = t.lambda0;
  tol["spectrum"] = t.spectrum;
  tol["trxft"] = t.trxft;
  tol["aa_identity"] = t.aa_identity;
  j["tolerances"] = tol;
  return j;
}

VerificationReport report_from_json(const json& j) {
  VerificationReport r;
  auto get = [&](const char* key, double& field) {
    if (j.contains(key)) field = number_or_inf(j.at(key));
  };
  get("traceless_max", r.traceless_max);
  get("norm_max", r.norm_max);
  get("term_max", r.term_max);
  get("chko_residual", r.chko_residual);
  get("chko_residual_hi", r.chko_residual_hi);
  get("initial_cond_residual", r.initial_cond_residual);
  get("endpoint_re", r.endpoint_re);
  get("endpoint_im", r.endpoint_im);
  get("endpoint_agreement", r.endpoint_agreement);
  if (j.contains("gate_endpoint")) r.gate_endpoint = number_or_inf(j.at("gate_endpoint"));
  get("speed_max_excess", r.speed_max_excess);
  get("speed_decomposition", r.speed_decomposition);
  get("trf2_drift", r.trf2_drift);
  get("lambda0_drift", r.lambda0_drift);
  get("spectrum_drift", r.spectrum_drift);
  get("trxft_max", r.trxft_max);
  get("unitarity_max", r.unitarity_max);
  get("state_consistency", r.state_consistency);
  get("aa_identity_max", r.aa_identity_max);
  get("equivalence_state", r.equivalence_state);
  get("equivalence_anticomm", r.equivalence_anticomm);
  get("propagation_mismatch", r.propagation_mismatch);
  if (j.contains("tolerances")) {
    const json& tol = j.at("tolerances");
    Tolerances& t = r.tolerances;
    auto tget = [&](const char* key, double& field) {
      if (tol.contains(key)) field = tol.at(key).get<double>();
    };
    tget("constraints", t.constraints);
    tget("chko", t.chko);
    tget("initial", t.initial);
    tget("endpoint", t.endpoint);
    tget("agreement", t.agreement);
    tget("equivalence", t.equivalence);
    tget("propagation", t.propagation);
    tget("unitarity", t.unitarity);
    tget("state", t.state);
    tget("speed", t.speed);
    tget("speed_decomposition", t.speed_decomposition);
    tget("trf2", t.trf2);
    tget("lambda0", t.lambda0);
    tget("spectrum", t.spectrum);
    tget("trxft", t.trxft);
    tget("aa_identity", t.aa_identity);
  }
  return r;
}

json trajectory_to_json(const Trajectory& traj) {
  json j;
  j["times"] = traj.times;
  json U = json::array(), V = json::array(), H = json::array(), F = json::array(),
       psi = json::array(), mult = json::array();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    U.push_back(matrix_to_json(traj.U[k]));
    V.push_back(matrix_to_json(traj.V[k]));
    H.push_back(matrix_to_json(traj.H[k]));
    F.push_back(matrix_to_json(traj.F[k]));
    psi.push_back(vector_to_json(traj.psi[k]));
    const MultiplierVector& m = traj.multipliers[k];
    mult.push_back({{"lambda0", m.lambda0},
                    {"lambdas", std::vector<double>(m.lambdas.data(),
                                                    m.lambdas.data() + m.lambdas.size())}});
  }
  j["U"] = std::move(U);
  j["V"] = std::move(V);
  j["H"] = std::move(H);
  j["F"] = std::move(F);
  j["psi"] = std::move(psi);
  j["multipliers"] = std::move(mult);
  j["propagation_mismatch"] = traj.propagation_mismatch;
  return j;
}

Trajectory trajectory_from_json(const json& j, std::size_t dim) {
  Trajectory tr;
  tr.times = required<std::vector<double>>(j, "times");
  const std::size_t n = tr.times.size();
  for (const char* key : {"U", "V", "H", "F", "psi", "multipliers"}) {
    if (!j.contains(key) || j.at(key).size() != n) {
      throw ValidationError(std::string("trajectory field '") + key + "' has the wrong length");
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    tr.U.push_back(matrix_from_json(j.at("U")[k], dim));
    tr.V.push_back(matrix_from_json(j.at("V")[k], dim));
    tr.H.push_back(matrix_from_json(j.at("H")[k], dim));
    tr.F.push_back(matrix_from_json(j.at("F")[k], dim));
    tr.psi.push_back(vector_from_json(j.at("psi")[k]));
    const json& m = j.at("multipliers")[k];
    const auto lam = m.at("lambdas").get<std::vector<double>>();
    tr.multipliers.push_back(MultiplierVector{
        m.at("lambda0").get<double>(),
        Eigen::Map<const RealVector>(lam.data(), static_cast<Eigen::Index>(lam.size()))});
  }
  tr.propagation_mismatch = j.value("propagation_mismatch", 0.0);
  return tr;
}

json solution_to_json(const ExtremalSolution& sol) {
  json j;
  j["kind"] = to_string(sol.kind);
  j["T"] = sol.T;
  j["branch"] = sol.branch ? json::array({sol.branch->first, sol.branch->second}) : json(nullptr);
  j["problem"] = problem_to_json(sol.problem);
  const std::size_t dim = sol.problem.dim();
  j["H0"] = sol.H0.size() ? matrix_to_json(sol.H0) : json::array();
  j["F0"] = sol.F0.size() ? matrix_to_json(sol.F0) : json::array();
  (void)dim;
  j["multipliers0"] = {
      {"lambda0", sol.multipliers0.lambda0},
      {"lambdas", std::vector<double>(sol.multipliers0.lambdas.data(),
                                      sol.multipliers0.lambdas.data() +
                                          sol.multipliers0.lambdas.size())}};
  j["warnings"] = sol.warnings;
  j["trajectory"] = trajectory_to_json(sol.trajectory);
  j["report"] = sol.trajectory.empty() ? json(nullptr) : report_to_json(sol.report);
  return j;
}

ExtremalSolution solution_from_json(const json& j) {
  const ControlProblem problem = problem_from_json(required<json>(j, "problem"));
  ExtremalSolution sol(solution_kind_from_string(required<std::string>(j, "kind")), problem);
  sol.T = required<double>(j, "T");
  const std::size_t dim = problem.dim();
  if (j.contains("branch") && j.at("branch").is_array()) {
    sol.branch = std::make_pair(j.at("branch")[0].get<int>(), j.at("branch")[1].get<int>());
  }
  if (j.contains("H0") && !j.at("H0").empty()) sol.H0 = matrix_from_json(j.at("H0"), dim);
  if (j.contains("F0") && !j.at("F0").empty()) sol.F0 = matrix_from_json(j.at("F0"), dim);
  if (j.contains("multipliers0")) {
    const json& m = j.at("multipliers0");
    const auto lam = m.at("lambdas").get<std::vector<double>>();
    sol.multipliers0 = MultiplierVector{
        m.at("lambda0").get<double>(),
        Eigen::Map<const RealVector>(lam.data(), static_cast<Eigen::Index>(lam.size()))};
  }
  if (j.contains("warnings")) sol.warnings = j.at("warnings").get<std::vector<std::string>>();
  sol.trajectory = trajectory_from_json(required<json>(j, "trajectory"), dim);
  if (j.contains("report") && !j.at("report").is_null()) {
    sol.report = report_from_json(j.at("report"));
  }
  return sol;
}

std::string trajectory_csv(const ExtremalSolution& sol) {
  const ControlProblem& problem = sol.problem;
  const Trajectory& tr = sol.trajectory;
  std::ostringstream os;
  os << "t,lambda0";
  for (std::size_t idx : problem.forbidden()) os << ",lambda[" << problem.basis().label(idx) << "]";
  os << ",delta_e,trace_h,norm_dev,term_max\n";
  const double w = problem.omega();
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const MultiplierVector& m = tr.multipliers[k];
    os << fmt17(tr.times[k]) << ',' << fmt17(m.lambda0);
    for (Eigen::Index j = 0; j < m.lambdas.size(); ++j) os << ',' << fmt17(m.lambdas(j));
    double term = 0.0;
    for (std::size_t idx : problem.forbidden()) {
      term = std::max(term, std::abs(trace_product(tr.H[k], problem.basis().generator(idx))) / w);
    }
    os << ',' << fmt17(energy_uncertainty(tr.H[k], tr.psi[k])) << ','
       << fmt17(std::abs(tr.H[k].trace()) / w) << ','
       << fmt17(std::abs(trace_product_real(tr.H[k], tr.H[k]) - 2 * w * w) / (2 * w * w)) << ','
       << fmt17(term) << '\n';
  }
  return os.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows, double omega) {
  std::ostringstream os;
  os << "lambda_tilde,T,amplitude,im_over_omega2,re_over_omega2\n";
  const double w2 = omega * omega;
  for (const SweepRow& r : rows) {
    os << fmt17(r.lambda_tilde) << ',' << fmt17(r.T) << ',' << fmt17(r.value.amplitude) << ','
       << fmt17(r.value.im / w2) << ',' << fmt17(r.value.re / w2) << '\n';
  }
  return os.str();
}

json sweep_to_json(const std::vector<SweepRow>& rows, double omega) {
  json j;
  j["omega"] = omega;
  json pts = json::array();
  for (const SweepRow& r : rows) {
    pts.push_back({{"lambda_tilde", r.lambda_tilde},
                   {"T", r.T},
                   {"amplitude", r.value.amplitude},
                   {"im", r.value.im},
                   {"re", r.value.re}});
  }
  j["points"] = std::move(pts);
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

}  // namespace qbrach
