/// @file driver.hpp
/// @brief The fixed-point map T, Picard iteration and the uniqueness diagnostics.
///
/// T(w, H) = (u, B) is one solve_coupled of the linearized system with the
/// frozen fields (w, H). solve_hall_mhd iterates X_{k+1} = T(X_k).
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hallmhd/config.hpp"
#include "hallmhd/grid.hpp"
#include "hallmhd/state.hpp"

namespace hallmhd {

/// T(X.u, X.B) with forcing (f, g). `sweeps`, if given, receives the number
/// of Gauss-Seidel sweeps. B of X warm-starts the coupled iteration.
HallState apply_T(const HallState& X, const FaceField& f, const FaceField& g, const SolverConfig& config,
                  int* sweeps = nullptr);

struct IterationRecord {
  int iter = 0;
  double norm_u_H1 = 0.0;
  double norm_B_H1 = 0.0;
  double norm_B_W1q = 0.0;
  double du_H1 = 0.0;   ///< ||u_{k} - u_{k-1}||_H1
  double dB_H1 = 0.0;   ///< ||B_{k} - B_{k-1}||_H1
  double ratio = 0.0;   ///< (du + dB) over the previous (du + dB); 0 in the first row
  bool in_D = true;     ///< ||B_k||_W1q <= kappa (true when kappa is off)
  int sweeps = 0;
};

struct IterationReport {
  std::vector<IterationRecord> records;
  bool converged = false;
  int iterations = 0;
  double nonlinear_residual = 0.0;
  double last_relative_update = 0.0;  ///< (du + dB) / max(1, ||u||_H1 + ||B||_H1) of the last step
  bool d_set_maintained = true;
  bool non_finite = false;  ///< a NaN or Inf iterate stopped the iteration
  std::string stop_reason;
};

/// Columns iter, norm_u_H1, norm_B_H1, norm_B_W1q, du_H1, dB_H1, ratio, in_D.
void write_iteration_csv(std::ostream& os, const IterationReport& r);

struct NonlinearResidual {
  double momentum = 0.0;    ///< ||F - L(u)u - grad p|| / (||f|| + ||curl B x B||), interior faces
  double maxwell = 0.0;     ///< curl part of A(mu B) curl B - g - u x B, relative
  double divergence = 0.0;  ///< max(||div u|| / ||u||_H1, ||edge_div B|| / ||B||_H1)
  double max() const noexcept;
};

/// Residual of the full nonlinear discrete system at `s`, each term relative
/// to the size of its data; 0/0 counts as 0.
NonlinearResidual nonlinear_residual(const HallState& s, const FaceField& f, const FaceField& g,
                                     const SolverConfig& config);

struct SolveResult {
  HallState state;
  IterationReport report;
};

/// Picard iteration from `initial` (default zero) until
/// ||u_{k+1} - u_k||_H1 + ||B_{k+1} - B_k||_H1 <= outer_tol * max(1, ||u_k||_H1 + ||B_k||_H1),
/// or max_outer iterations. Non-convergence is reported, not thrown: a
/// KrylovError or StagnationError inside T, a non-finite or diverging iterate
/// all stop the iteration with converged = false and the best iterate so far.
/// CompatibilityError propagates.
SolveResult solve_hall_mhd(const FaceField& f, const FaceField& g, const SolverConfig& config,
                           const HallState* initial = nullptr);

/// Random admissible perturbation: u-part curl_e2f of a smooth random
/// tangential-zero potential, B-part reconstruct_B of the curl of another,
/// scaled to ||du||_H1 + ||dB||_H1 = size.
HallState random_perturbation(const Grid& g, std::uint64_t seed, double size, const SolverConfig& config);

struct ProbeResult {
  double rho = 0.0;             ///< max over trials
  std::vector<double> trials;   ///< ||T(X + d) - T(X)||_H1 / ||d||_H1 per trial
  double delta_size = 0.0;
  bool margin() const noexcept { return rho < 1.0; }
};

/// Trials run on up to config.workers threads; every trial uses its own
/// seed derived from config.seed, so results do not depend on the worker count.
ProbeResult contraction_probe(const HallState& X, const FaceField& f, const FaceField& g,
                              const SolverConfig& config, int trials = 4);

struct DecompositionReport {
  double residual = 0.0;       ///< ||curl_e2f B - A^{-1}(mu B)(grad phi + u x B + g)|| / ||curl_e2f B||
  double phi_agreement = 0.0;  ///< ||phi - phi_state|| / ||phi|| after removing means
};

DecompositionReport decomposition_check(const HallState& s, const FaceField& f, const FaceField& g,
                                        const SolverConfig& config);

/// Discrete constants from the smallest eigenvalues of the componentwise
/// Laplacians: ||u||_L2 <= poincare_u ||grad u||, ||B||_L2 <= poincare_B ||curl B||
/// for discretely divergence-free B, and the energy constant
/// C_hat = (sqrt(1 + poincare_u^2) + sqrt(1 + poincare_B^2)) max(1, poincare_u).
struct EmpiricalConstants {
  double poincare_u = 0.0;
  double poincare_B = 0.0;
  double C_hat = 0.0;
};

EmpiricalConstants empirical_constants(const Grid& g);

/// Same constant by inverse power iteration on the velocity Laplacian (an
/// independent check of poincare_u).
double poincare_by_inverse_iteration(const Grid& g, int iterations = 60);

struct Diagnostics {
  double norm_f_L2 = 0.0;  ///< surrogate for ||f||_{H^-1}
  double norm_g_Lq = 0.0;
  double q = 4.0;
  EmpiricalConstants constants;
  std::optional<double> rho;
  std::optional<bool> d_set_maintained;
  std::optional<double> energy_ratio;  ///< (||u||_H1 + ||B||_H1) / (C_hat (||f|| + ||g||_Lq))
  bool margin() const noexcept { return rho && *rho < 1.0; }
};

Diagnostics smallness_report(const FaceField& f, const FaceField& g, const SolverConfig& config,
                             const SolveResult* solved = nullptr);

}  // namespace hallmhd
