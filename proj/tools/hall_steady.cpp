/// @file hall_steady.cpp
/// @brief Batch front end: check-operators, solve, mms, diagnose.
///
/// Exit codes: 0 ran to completion (non-convergence included), 1 an operator
/// check failed, 2 configuration error, 3 internal solver failure.
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hallmhd/checks.hpp"
#include "hallmhd/config.hpp"
#include "hallmhd/driver.hpp"
#include "hallmhd/elliptic.hpp"
#include "hallmhd/io.hpp"
#include "hallmhd/krylov.hpp"
#include "hallmhd/linsys.hpp"
#include "hallmhd/mms.hpp"
#include "hallmhd/norms.hpp"
#include "hallmhd/report.hpp"

namespace fs = std::filesystem;
using namespace hallmhd;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_config = 2;
constexpr int exit_internal = 3;

struct Options {
  std::string config;
  std::vector<int> levels;
  std::optional<int> workers;
  std::string out = ".";
  int n = 16;
  std::uint64_t seed = 12345;
  int samples = 100;
  std::string fault = "none";
};

/// Precedence: --workers, then HALL_STEADY_WORKERS, then the config file.
SolverConfig load(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config is required");
  SolverConfig c = load_config(o.config);
  if (o.workers) {
    c.workers = *o.workers;
  } else if (const char* env = std::getenv("HALL_STEADY_WORKERS")) {
    try {
      c.workers = std::stoi(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("HALL_STEADY_WORKERS is not an integer: '") + env + "'");
    }
  }
  c.validate(true);
  return c;
}

fs::path out_dir(const Options& o) {
  fs::path p(o.out);
  fs::create_directories(p);
  return p;
}

void emit(const KeyValueReport& r, const fs::path& path) {
  r.write(std::cout);
  r.write(path);
}

struct Problem {
  SolverConfig config;
  Grid grid;
  Forcing forcing;
};

Problem make_problem(const Options& o) {
  SolverConfig c = load(o);
  const Grid g(c.n);
  Forcing F = forcing_from_solution(ManufacturedSolution::from_spec(c.forcing), g, c);
  return {c, g, std::move(F)};
}

void add_config(KeyValueReport& r, const SolverConfig& c) {
  r.set("n", c.n);
  r.set("q", c.q);
  r.set("q1", c.q1());
  r.set("mu", c.mu);
  r.set("kappa", c.kappa ? format_double(*c.kappa) : std::string("off"));
  r.set("outer_tol", c.outer_tol);
  r.set("inner_rtol", c.inner_rtol);
  r.set("forcing", to_string(c.forcing.family));
  r.set("forcing_mode", to_string(c.forcing.mode));
  r.set("problem", to_string(c.forcing.problem));
  r.set("amplitude", c.forcing.amplitude);
  r.set("seed", static_cast<long long>(c.seed));
}

void add_solve(KeyValueReport& r, const SolveResult& s) {
  r.set("converged", s.report.converged);
  r.set("iterations", s.report.iterations);
  r.set("stop_reason", s.report.stop_reason);
  r.set("nonlinear_residual", s.report.nonlinear_residual);
  r.set("last_relative_update", s.report.last_relative_update);
  r.set("norm_u_H1", norm(s.state.u, NormKind::H1));
  r.set("norm_B_H1", norm(s.state.B, NormKind::H1));
}

void add_diagnostics(KeyValueReport& r, const Diagnostics& d) {
  r.set("norm_f_L2_as_Hminus1_surrogate", d.norm_f_L2);
  r.set("norm_g_Lq", d.norm_g_Lq);
  r.set("poincare_u", d.constants.poincare_u);
  r.set("poincare_B", d.constants.poincare_B);
  r.set("C_hat", d.constants.C_hat);
  r.set("energy_ratio", d.energy_ratio ? format_double(*d.energy_ratio) : std::string("undefined"));
  r.set("d_set_maintained", d.d_set_maintained ? std::string(*d.d_set_maintained ? "true" : "false")
                                               : std::string("kappa_off"));
  r.set("rho_hat", d.rho ? format_double(*d.rho) : std::string("unavailable"));
  r.set("uniqueness_margin", d.margin());
}

void add_decomposition(KeyValueReport& r, const DecompositionReport& d) {
  r.set("decomposition_residual", d.residual);
  r.set("decomposition_phi_agreement", d.phi_agreement);
}

int cmd_check_operators(const Options& o) {
  const OperatorCheckReport rep = check_operators(o.n, o.seed, o.samples, parse_fault(o.fault));
  KeyValueReport r;
  r.set("n", rep.n);
  r.set("samples", rep.samples);
  for (const auto& item : rep.items) {
    r.set("check[" + item.name + "].defect", item.defect);
    r.set("check[" + item.name + "].bound", item.bound);
    r.set("check[" + item.name + "].passed", item.passed());
  }
  r.set("poincare_u", rep.poincare_u);
  r.set("poincare_u_inverse_iteration", rep.poincare_u_iterated);
  r.set("all_passed", rep.all_passed());
  emit(r, out_dir(o) / "check_operators.txt");
  for (const auto& item : rep.items)
    if (!item.passed()) std::cerr << "FAILED: " << item.name << "\n";
  return rep.all_passed() ? exit_ok : exit_check_failed;
}

int cmd_solve(const Options& o) {
  const Problem p = make_problem(o);
  const fs::path dir = out_dir(o);
  const SolveResult s = solve_hall_mhd(p.forcing.f, p.forcing.g, p.config);

  write_dump(dir / "u.dump", s.state.u);
  write_dump(dir / "p.dump", s.state.p);
  write_dump(dir / "B.dump", s.state.B);
  {
    std::ofstream csv(dir / "iterations.csv");
    write_iteration_csv(csv, s.report);
  }

  Diagnostics d = smallness_report(p.forcing.f, p.forcing.g, p.config, &s);
  std::optional<DecompositionReport> dec;
  if (s.report.converged) {
    d.rho = contraction_probe(s.state, p.forcing.f, p.forcing.g, p.config, p.config.probe_trials).rho;
    dec = decomposition_check(s.state, p.forcing.f, p.forcing.g, p.config);
  }
  KeyValueReport r;
  add_config(r, p.config);
  add_solve(r, s);
  add_diagnostics(r, d);
  if (dec) add_decomposition(r, *dec);
  emit(r, dir / "report.txt");
  return s.report.non_finite ? exit_internal : exit_ok;
}

int cmd_mms(const Options& o) {
  SolverConfig c = load(o);
  validate_levels(o.levels);
  const fs::path dir = out_dir(o);
  const ConvergenceTable t = convergence_study(o.levels, c);
  {
    std::ofstream csv(dir / "convergence.csv");
    write_convergence_csv(csv, t);
  }
  write_convergence_csv(std::cout, t);

  KeyValueReport r;
  r.set("problem", to_string(t.problem));
  r.set("forcing_mode", to_string(t.mode));
  r.set("complete", t.complete);
  if (!t.complete) r.set("failure", t.failure);
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("undefined"); };
  r.set("order_u", opt(t.order_u));
  r.set("order_B", opt(t.order_B));
  r.set("order_u_three_finest", opt(t.order_u_fine));
  r.set("order_B_three_finest", opt(t.order_B_fine));
  if (t.mode == ForcingMode::Discrete) {
    double worst = 0.0;
    for (const auto& row : t.rows) {
      if (row.norm_u > 0.0) worst = std::max(worst, row.err_u / row.norm_u);
      if (row.norm_B > 0.0) worst = std::max(worst, row.err_B / row.norm_B);
    }
    r.set("solver_exactness_max_relative_error", worst);
    r.set("solver_exactness", worst <= 10.0 * c.outer_tol);
  }
  emit(r, dir / "mms_report.txt");
  return exit_ok;
}

int cmd_diagnose(const Options& o) {
  const Problem p = make_problem(o);
  const fs::path dir = out_dir(o);
  const SolverConfig& c = p.config;
  const SolveResult s = solve_hall_mhd(p.forcing.f, p.forcing.g, c);
  Diagnostics d = smallness_report(p.forcing.f, p.forcing.g, c, &s);

  KeyValueReport r;
  add_config(r, c);
  add_solve(r, s);
  if (s.report.converged) {
    d.rho = contraction_probe(s.state, p.forcing.f, p.forcing.g, c, c.probe_trials).rho;
    add_decomposition(r, decomposition_check(s.state, p.forcing.f, p.forcing.g, c));

    // Second solve from zero plus a 10% random admissible perturbation.
    const double size = norm(s.state.u, NormKind::H1) + norm(s.state.B, NormKind::H1);
    const HallState start = random_perturbation(p.grid, c.seed + 17, 0.1 * std::max(size, 1e-3), c);
    const SolveResult s2 = solve_hall_mhd(p.forcing.f, p.forcing.g, c, &start);
    const double agreement =
        norm(s.state.u - s2.state.u, NormKind::H1) + norm(s.state.B - s2.state.B, NormKind::H1);
    r.set("second_start_converged", s2.report.converged);
    r.set("agreement_H1", agreement);
    r.set("agreement_within_10_tol", agreement <= 10.0 * c.outer_tol * std::max(1.0, size));
  }
  add_diagnostics(r, d);
  emit(r, dir / "diagnose.txt");
  return s.report.non_finite ? exit_internal : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady Hall-MHD solver on a staggered grid"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--workers", o.workers, "worker threads for independent solves (env HALL_STEADY_WORKERS)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "output directory");

  auto* check = app.add_subcommand("check-operators", "operator invariant suite");
  check->add_option("--n", o.n, "cells per axis")->check(CLI::Range(4, 1024));
  check->add_option("--seed", o.seed, "random seed");
  check->add_option("--samples", o.samples, "random fields per identity")->check(CLI::PositiveNumber);
  check->add_option("--inject-fault", o.fault, "negative control: none, curl or grad");

  auto* solve = app.add_subcommand("solve", "Picard solve with dumps and reports");
  solve->add_option("--config", o.config, "config file")->required();

  auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
  mms->add_option("--config", o.config, "config file")->required();
  mms->add_option("--levels", o.levels, "grid levels, e.g. 16,32,64")->delimiter(',')->required();

  auto* diag = app.add_subcommand("diagnose", "solve, contraction probe and second solve");
  diag->add_option("--config", o.config, "config file")->required();

  for (auto* sub : {check, solve, mms, diag}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    if (*check) return cmd_check_operators(o);
    if (*solve) return cmd_solve(o);
    if (*mms) return cmd_mms(o);
    if (*diag) return cmd_diagnose(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const ManufacturedError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return exit_internal;
  }
  return exit_internal;
}
