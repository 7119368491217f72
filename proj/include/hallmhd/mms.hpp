/// @file mms.hpp
/// @brief Manufactured solutions, their forcing, and grid-convergence studies.
///
/// The trigonometric family:
///   B* = a (alpha cos(m1 pi x) sin(m2 pi y) sin(m3 pi z),
///           beta  sin(m1 pi x) cos(m2 pi y) sin(m3 pi z),
///           gamma sin(m1 pi x) sin(m2 pi y) cos(m3 pi z)),  m . (alpha, beta, gamma) = 0
///   u* = curl Psi,  Psi = a s(x) (c1, c2, c3),  s = sin^2(pi x) sin^2(pi y) sin^2(pi z)
///   p* = a cos(pi x) cos(pi y) cos(pi z)
/// All derivatives are closed-form.
#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hallmhd/config.hpp"
#include "hallmhd/driver.hpp"
#include "hallmhd/grid.hpp"
#include "hallmhd/hallmat.hpp"
#include "hallmhd/ops.hpp"
#include "hallmhd/state.hpp"

namespace hallmhd {

class ManufacturedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ManufacturedSolution {
 public:
  /// Throws ManufacturedError unless m1 alpha + m2 beta + m3 gamma = 0 and
  /// the mode integers are positive. `problem` switches off u*, p* (maxwell)
  /// or B* (stokes).
  ManufacturedSolution(double amplitude, std::array<int, 3> modes, std::array<double, 3> coefficients,
                       std::array<double, 3> potential, ProblemKind problem = ProblemKind::Coupled);
  static ManufacturedSolution from_spec(const ForcingSpec& spec);

  double amplitude() const noexcept { return a_; }
  ProblemKind problem() const noexcept { return problem_; }
  bool has_flow() const noexcept { return problem_ != ProblemKind::Maxwell; }
  bool has_field() const noexcept { return problem_ != ProblemKind::Stokes; }

  Vec3 psi(const Vec3& x) const;
  Vec3 u(const Vec3& x) const;
  /// J[i][j] = d u_i / d x_j
  Mat3 grad_u(const Vec3& x) const;
  Vec3 laplacian_u(const Vec3& x) const;
  double p(const Vec3& x) const;
  Vec3 grad_p(const Vec3& x) const;
  Vec3 B(const Vec3& x) const;
  /// J[i][j] = d B_i / d x_j
  Mat3 grad_B(const Vec3& x) const;
  Vec3 curl_B(const Vec3& x) const;

  /// -Delta u* + (u*.grad) u* + grad p* - curl B* x B*; the convection term
  /// is dropped for the linear Stokes problem.
  Vec3 f(const Vec3& x) const;
  /// curl B* + mu curl B* x B* - u* x B*.
  Vec3 g(const Vec3& x, double mu) const;

 private:
  /// Mixed partial derivative of s with orders (ox, oy, oz).
  double ds(const Vec3& x, int ox, int oy, int oz) const;

  double a_;
  std::array<int, 3> m_;
  std::array<double, 3> coef_;
  std::array<double, 3> pot_;
  ProblemKind problem_;
};

struct Forcing {
  FaceField f;
  FaceField g;
};

/// Exact fields at the grid. Analytic: pointwise samples of u*, p*, B*.
/// Discrete: u* = curl_e2f(sampled Psi) and B* = reconstruct_B(curl_e2f(sampled B*)),
/// both exactly discretely divergence-free; p* sampled.
HallState sample_exact(const ManufacturedSolution& ms, const Grid& g, ForcingMode mode);

/// Analytic mode samples f and g at the faces. Discrete mode applies the
/// discrete operators to sample_exact(..., Discrete), so the discrete system
/// reproduces those fields up to solver tolerance.
Forcing forcing_from_solution(const ManufacturedSolution& ms, const Grid& g, const SolverConfig& config);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double err_u = 0.0;
  double err_B = 0.0;
  double norm_u = 0.0;  ///< L2 norm of the exact u at this level
  double norm_B = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct ConvergenceTable {
  ProblemKind problem = ProblemKind::Coupled;
  ForcingMode mode = ForcingMode::Analytic;
  std::vector<ConvergenceRow> rows;
  bool complete = false;          ///< false if a level failed to converge
  std::string failure;            ///< reason for an incomplete table
  std::optional<double> order_u;  ///< least-squares fit over all rows
  std::optional<double> order_B;
  std::optional<double> order_u_fine;  ///< fit over the three finest rows
  std::optional<double> order_B_fine;
};

/// Slope of log(err) against log(h) by least squares; empty if any error is
/// zero or fewer than two points are given.
std::optional<double> fitted_order(const std::vector<double>& h, const std::vector<double>& err);

/// Throws ManufacturedError unless there are >= 3 levels, each dividing the next.
void validate_levels(const std::vector<int>& levels);

/// For each level: builds the forcing, solves (solve_hall_mhd for coupled,
/// solve_momentum for stokes, solve_maxwell_type with H = B* for maxwell)
/// and records the L2 errors against sample_exact. Stops at the first level
/// that fails, returning the partial table. `observe`, if set, sees every
/// coupled solve with its level config and forcing.
using LevelObserver = std::function<void(const SolverConfig&, const Forcing&, const SolveResult&)>;
ConvergenceTable convergence_study(const std::vector<int>& levels, const SolverConfig& config,
                                   const LevelObserver& observe = {});

/// Columns n, h, err_u_L2, err_B_L2, order_u, order_B; the orders are the
/// pairwise rates against the previous row (empty in the first row).
void write_convergence_csv(std::ostream& os, const ConvergenceTable& t);

}  // namespace hallmhd
