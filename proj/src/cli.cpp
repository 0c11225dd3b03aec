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

#include "qbrach/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbrach/errors.hpp"
#include "qbrach/io.hpp"
#include "qbrach/log.hpp"

namespace qbrach {

namespace {

struct Flags {
  std::string input;
  std::string output;
  std::string csv;
  std::optional<double> dt;
  std::optional<double> t_max;
  std::optional<double> tol;
  std::string grid;
  std::optional<double> omega;
  std::optional<double> omega_b;
  std::optional<double> phi;
  std::optional<int> k_max;
  std::optional<int> l_max;
  unsigned threads = 0;
};

template <typename T>
T param(const json& params, const char* key, const std::optional<T>& flag, T fallback) {
  if (flag) return *flag;
  if (params.contains(key)) return params.at(key).get<T>();
  return fallback;
}

void emit(const Flags& f, const std::string& text) {
  if (f.output.empty() || f.output == "-") {
    std::cout << text;
  } else {
    write_text_file(f.output, text);
  }
}

void emit_solution(const Flags& f, const ExtremalSolution& sol, json extra = json::object()) {
  json j = solution_to_json(sol);
  for (auto& [key, value] : extra.items()) j[key] = value;
  emit(f, dump(j));
  if (!f.csv.empty()) write_text_file(f.csv, trajectory_csv(sol));
  for (const std::string& w : sol.warnings) std::cerr << "warning: " << w << "\n";
  if (!sol.trajectory.empty() && !sol.report.passed()) {
    std::cerr << "warning: report has failing rows:";
    for (const std::string& name : sol.report.failures()) std::cerr << ' ' << name;
    std::cerr << "\n";
  }
  QB_LOG(1, std::string("solved ") + to_string(sol.kind) + ", T = " + std::to_string(sol.T));
}

ProblemFile load_problem(const Flags& f) {
  if (f.input.empty()) throw ValidationError("--input is required");
  return parse_problem(read_json_file(f.input));
}

int cmd_solve_free(const Flags& f) {
  const ProblemFile file = load_problem(f);
  if (!file.psi_f) throw ValidationError("solve-free needs psi_f");
  if (!file.forbidden.empty()) {
    throw ValidationError("solve-free takes no forbidden generators; use solve-closed or shoot");
  }
  const double dt = param(file.solver_params, "dt", f.dt, 0.0);
  emit_solution(f, solve_free(PureState(file.psi_i), PureState(*file.psi_f), file.omega, dt));
  return 0;
}

int cmd_solve_closed(const Flags& f) {
  const ProblemFile file = load_problem(f);
  const ControlProblem problem = to_control_problem(file);
  const json& p = file.solver_params;
  ClosedOptions opts;
  opts.dt = param(p, "dt", f.dt, 0.0);
  if (p.contains("target_bures_angle")) opts.target_bures_angle = p.at("target_bures_angle").get<double>();
  const double t_max = param(p, "t_max", f.t_max, 0.0);
  if (!(t_max > 0.0)) throw ValidationError("solve-closed needs t_max > 0 (--t-max)");
  emit_solution(f, solve_closed_subalgebra(problem, hamiltonian_from_params(problem, p),
                                           multipliers_from_params(problem, p), t_max, opts));
  return 0;
}

json branch_json(const M1Branch& b) {
  return {{"k", b.k},
          {"l", b.l},
          {"lambda1", b.lambda1},
          {"T", b.T},
          {"sin_theta1", b.sin_theta1},
          {"mu_y", b.mu_y},
          {"diag_residual", b.diag_residual},
          {"offdiag1_residual", b.offdiag1_residual},
          {"offdiag2_residual", b.offdiag2_residual},
          {"fidelity", b.fidelity},
          {"endpoint_im", b.endpoint_im}};
}

int cmd_solve_m1(const Flags& f) {
  json params = json::object();
  double omega_b = 0.0, phi = 0.0, omega = 1.0;
  if (!f.input.empty()) {
    // (Omega_B, phi) are read off the file; psi_i must be |+x> up to a phase.
    const ProblemFile file = load_problem(f);
    const ControlProblem problem = to_control_problem(file);
    if (!problem.psi_f()) throw ValidationError("solve-m1 needs psi_f");
    const ControlProblem canonical = m1_problem(file.omega, std::nullopt);
    if (problem.dim() != 2 ||
        overlap_abs(problem.psi_i().amplitudes(), canonical.psi_i().amplitudes()) < 1 - 1e-12) {
      throw ValidationError("solve-m1 expects a qubit problem with psi_i = |+x>");
    }
    // psi_f ~ cos(Omega_B) e^{i phi}|+x> + sin(Omega_B)|-x> up to a global phase.
    const Vector& x_plus = canonical.psi_i().amplitudes();
    Vector x_minus(2);
    x_minus << x_plus(0), -x_plus(1);
    const cplx a = x_plus.dot(problem.psi_f()->amplitudes());
    const cplx b = x_minus.dot(problem.psi_f()->amplitudes());
    omega_b = std::acos(std::min(1.0, std::abs(a)));
    phi = std::abs(b) > 1e-12 ? std::remainder(std::arg(a) - std::arg(b), 2 * M_PI) : 0.0;
    omega = file.omega;
    params = file.solver_params;
  }
  if (f.omega) omega = *f.omega;
  if (f.omega_b) omega_b = *f.omega_b;
  if (f.phi) phi = *f.phi;
  if (f.input.empty() && !f.omega_b) throw ValidationError("solve-m1 needs --omega-b or --input");
  const int k_max = param(params, "k_max", f.k_max, 20);
  const int l_max = param(params, "l_max", f.l_max, 20);
  const double dt = param(params, "dt", f.dt, 0.0);
  M1Result result = solve_m1_two_level(omega_b, phi, omega, k_max, l_max, dt);
  json branches = json::array();
  for (const M1Branch& b : result.branches) branches.push_back(branch_json(b));
  emit_solution(f, result.global_min, {{"branches", branches}});
  return 0;
}

int cmd_solve_2qubit(const Flags& f) {
  if (!f.omega_b) throw ValidationError("solve-2qubit needs --omega-b");
  emit_solution(f, solve_two_qubit_example(*f.omega_b, f.omega.value_or(1.0), f.dt.value_or(0.0)));
  return 0;
}

int cmd_shoot(const Flags& f) {
  const ProblemFile file = load_problem(f);
  const ControlProblem problem = to_control_problem(file);
  const json& p = file.solver_params;
  ShootOptions opts;
  opts.dt = param(p, "dt", f.dt, 0.0);
  opts.root_tol = param(p, "root_tol", f.tol, opts.root_tol);
  if (p.contains("target_bures_angle")) opts.target_bures_angle = p.at("target_bures_angle").get<double>();
  const double t_max = param(p, "t_max", f.t_max, 0.0);
  if (!(t_max > 0.0)) throw ValidationError("shoot needs t_max > 0 (--t-max)");
  emit_solution(f, shoot(problem, hamiltonian_from_params(problem, p),
                         multipliers_from_params(problem, p), t_max, opts));
  return 0;
}

bool same_value(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

int cmd_verify(const Flags& f) {
  if (f.input.empty()) throw ValidationError("verify needs a solution file");
  const json j = read_json_file(f.input);
  const ExtremalSolution sol = solution_from_json(j);
  if (sol.trajectory.empty()) {
    std::cout << "empty trajectory (T = 0); nothing to verify\n";
    return 0;
  }
  VerifyOptions vo;
  const bool has_report = j.contains("report") && !j.at("report").is_null();
  vo.tolerances = has_report ? sol.report.tolerances : Tolerances::integrated();
  const VerificationReport fresh = verify_trajectory(sol.trajectory, sol.problem, vo);
  std::cout << fresh.table();

  bool ok = fresh.passed();
  if (has_report) {
    const double tol = f.tol.value_or(1e-12);
    const std::vector<ReportRow> embedded = sol.report.rows();
    const std::vector<ReportRow> now = fresh.rows();
    for (std::size_t k = 0; k < now.size(); ++k) {
      if (k >= embedded.size() || embedded[k].name != now[k].name) {
        std::cout << "embedded report is missing " << now[k].name << "\n";
        ok = false;
        continue;
      }
      if (!same_value(now[k].value, embedded[k].value, tol)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "mismatch %-24s embedded %.17g recomputed %.17g\n",
                      now[k].name.c_str(), embedded[k].value, now[k].value);
        std::cout << buf;
        ok = false;
      }
    }
  }
  std::cout << (ok ? "verify: PASS\n" : "verify: FAIL\n");
  return ok ? 0 : 1;
}

struct Grid {
  double lt_min = -0.02, lt_max = 0.02;
  std::size_t n = 200;
  double t_min = 0.0, t_max = 0.6;
  std::size_t m = 200;
};

// "a,b,n x c,d,m"; the separator may also be "X", ":" or the multiplication sign.
Grid parse_grid(const std::string& spec) {
  Grid g;
  if (spec.empty()) return g;
  std::string s = spec;
  for (const std::string sep : {"\xC3\x97", "x", "X", ":"}) {
    const auto pos = s.find(sep);
    if (pos != std::string::npos) {
      s.replace(pos, sep.size(), ";");
      break;
    }
  }
  const auto semi = s.find(';');
  if (semi == std::string::npos) throw ValidationError("--grid must look like 'a,b,n x c,d,m'");
  auto triple = [](const std::string& part, double& lo, double& hi, std::size_t& count) {
    std::string t = part;
    for (char& c : t) {
      if (c == ',') c = ' ';
    }
    std::istringstream is(t);
    long long cnt = 0;
    if (!(is >> lo >> hi >> cnt) || cnt < 1) {
      throw ValidationError("bad --grid component '" + part + "'");
    }
    std::string rest;
    if (is >> rest) throw ValidationError("bad --grid component '" + part + "'");
    count = static_cast<std::size_t>(cnt);
  };
  triple(s.substr(0, semi), g.lt_min, g.lt_max, g.n);
  triple(s.substr(semi + 1), g.t_min, g.t_max, g.m);
  if (!(g.lt_max >= g.lt_min) || !(g.t_max > g.t_min)) {
    throw ValidationError("--grid ranges must be increasing");
  }
  return g;
}

int cmd_sweep_m1(const Flags& f) {
  const Grid g = parse_grid(f.grid);
  const double omega = f.omega.value_or(10.0);
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ValidationError("omega must be positive");
  const std::vector<SweepRow> rows =
      sweep_m1(g.lt_min, g.lt_max, g.n, g.t_min, g.t_max, g.m, omega, f.threads);
  emit(f, dump(sweep_to_json(rows, omega)));
  if (!f.csv.empty()) write_text_file(f.csv, sweep_csv(rows, omega));
  return 0;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("-i,--input", f.input, "Input JSON file");
  sub->add_option("-o,--output", f.output, "Output JSON file (stdout when omitted)");
  sub->add_option("--csv", f.csv, "CSV side output");
  sub->add_option("--dt", f.dt, "Grid step");
  sub->add_option("--t-max", f.t_max, "Integration horizon");
  sub->add_option("--tol", f.tol, "Root tolerance (shoot) or round-trip tolerance (verify)");
  sub->add_option("--omega", f.omega, "Energy scale");
  sub->add_option("--omega-b", f.omega_b, "Bures angle between psi_i and psi_f");
  sub->add_option("--phi", f.phi, "Relative phase of the target");
  sub->add_option("--k-max", f.k_max, "Largest k branch index");
  sub->add_option("--l-max", f.l_max, "Largest l branch index");
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"qbrach: quantum brachistochrone solver and verifier"};
  app.require_subcommand(1);
  Flags f;

  struct Entry {
    const char* name;
    const char* help;
    int (*fn)(const Flags&);
  };
  const Entry entries[] = {
      {"solve-free", "Unrestricted problem: T = Omega_B / omega", cmd_solve_free},
      {"solve-closed", "Forbidden set closed under commutation", cmd_solve_closed},
      {"solve-m1", "Qubit with forbidden sz, all (k, l) branches", cmd_solve_m1},
      {"solve-2qubit", "Two-qubit restricted example", cmd_solve_2qubit},
      {"shoot", "Forward shooting from a seed H0 and multipliers", cmd_shoot},
      {"verify", "Recompute and check the report of a solution file", cmd_verify},
      {"sweep-m1", "Amplitude and endpoint fields on a (lambda, T) grid", cmd_sweep_m1},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, f);
    subs.emplace_back(sub, &e);
  }
  subs[5].first->add_option("file", f.input, "Solution JSON");
  subs[6].first->add_option("--grid", f.grid, "lt_min,lt_max,n x t_min,t_max,m");
  subs[6].first->add_option("--threads", f.threads, "Worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    for (const auto& [sub, entry] : subs) {
      if (sub->parsed()) return entry->fn(f);
    }
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NoSolutionError& e) {
    std::cerr << "no solution: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace qbrach
