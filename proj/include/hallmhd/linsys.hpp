/// @file linsys.hpp
/// @brief The linearized subproblems behind the fixed-point map T.
///
/// Frozen fields (w, H) turn the system into
///   -Delta u + (w.grad) u + grad p - curl B x H = f,  div u = 0
///   curl(A(H) curl B) = curl(g + u x H),            div B = 0
/// with u = 0 and B x nu = 0 on the walls. Both products curl B x H and u x H
/// are collocated at cell centers by the same averaging and mapped back with
/// its adjoint, so <curl B x H, u> + <u x H, curl B> = 0 holds exactly.
#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "hallmhd/config.hpp"
#include "hallmhd/elliptic.hpp"
#include "hallmhd/grid.hpp"
#include "hallmhd/krylov.hpp"
#include "hallmhd/state.hpp"

namespace hallmhd {

/// from_centers(to_centers(J) x to_centers(H)): the force curl B x H with J = curl B.
FaceField lorentz_force(const FaceField& J, const EdgeField& H);
/// from_centers(to_centers(u) x to_centers(H)).
FaceField induction_term(const FaceField& u, const EdgeField& H);

/// L(u) = -Delta_h u + N_w u on the interior velocity faces, with the
/// componentwise no-slip Laplacian of spectral.hpp and a skew-symmetric
/// finite-volume convection built from control-volume fluxes of w.
class MomentumOperator {
 public:
  explicit MomentumOperator(const FaceField& w);

  const Grid& grid() const noexcept { return grid_; }
  bool has_convection() const noexcept { return convective_; }

  FaceField apply(const FaceField& u) const;
  FaceField convection(const FaceField& u) const;
  /// L^{-1} rhs on interior faces. Exact fast solve when w = 0, otherwise
  /// BiCGStab preconditioned by the Laplacian; the target is rtol * ||rhs||.
  FaceField solve(const FaceField& rhs, const KrylovSpec& spec, FaceField guess) const;
  FaceField solve(const FaceField& rhs, const KrylovSpec& spec) const {
    return solve(rhs, spec, FaceField(grid_));
  }

 private:
  void apply_flat(std::span<const double> x, std::span<double> y) const;
  void precondition(std::span<const double> r, std::span<double> z) const;

  Grid grid_;
  bool convective_ = false;
  // flux[d][6 * idx + s]: outward control-volume flux towards neighbour s
  // (order -x, +x, -y, +y, -z, +z) of the d-normal face idx, divided by 2 h^3.
  std::array<std::vector<double>, 3> flux_;
};

struct MomentumSolution {
  FaceField u;
  ScalarField p;
  int schur_iterations = 0;
  double residual = 0.0;      ///< ||F - L u - grad p||_L2 / ||F||_L2 on interior faces
  double div_residual = 0.0;  ///< ||div u||_L2 / ||u||_H1
};

/// Stokes/Oseen solve with force F = f + lorentz_force(curl_e2f B, H).
/// Uzawa-type Schur complement iteration on p (CG when w = 0, BiCGStab
/// otherwise), repeated as iterative refinement until
/// ||div u|| <= rtol ||u||_H1 and the momentum residual is below rtol.
MomentumSolution solve_momentum(const FaceField& w, const EdgeField& H, const EdgeField& B,
                                const FaceField& f, const KrylovSpec& spec);
MomentumSolution solve_momentum_force(const MomentumOperator& L, const FaceField& F,
                                      const KrylovSpec& spec);

struct MaxwellSolution {
  EdgeField B;
  ScalarField phi;
  FaceField J;  ///< curl_e2f(B) target: A^{-1}(H)(grad phi + G)
  KrylovResult neumann_stats;
};

/// curl(A(mu H) curl B) = curl G by the phi-route: Neumann problem for phi,
/// J = A^{-1}(mu H)(grad phi + G), then B = reconstruct_B(J).
MaxwellSolution solve_maxwell_type(const EdgeField& H, const FaceField& G, const KrylovSpec& spec,
                                   double mu = 1.0);

/// Inverse of the face map Y -> A^{-1}(mu H) Y (wall-normal entries of Y
/// extrapolated, boundary flux dropped): returns Y with A^{-1}(mu H) Y = J on
/// interior faces. Used to evaluate A(H) curl B for residuals and forcing.
FaceField apply_hall_operator(const EdgeField& H, const FaceField& J, const KrylovSpec& spec,
                              double mu = 1.0);

class StagnationError : public std::runtime_error {
 public:
  StagnationError(const std::string& what, std::vector<double> updates)
      : std::runtime_error(what), updates_(std::move(updates)) {}
  const std::vector<double>& updates() const noexcept { return updates_; }

 private:
  std::vector<double> updates_;
};

struct LinearizedProblem {
  FaceField w;
  EdgeField H;
  FaceField f;
  FaceField g;
  SolverConfig config;

  /// Throws std::invalid_argument unless w is no-slip and discretely
  /// divergence-free to 1e-8 and H is tangential-zero.
  void validate() const;
};

struct CoupledResult {
  HallState state;
  int sweeps = 0;
  std::vector<double> updates;  ///< H1 update per sweep relative to the largest iterate so far
};

/// Block Gauss-Seidel between solve_momentum and solve_maxwell_type until the
/// relative H1 update of (u, B) is below coupled_tolerance(config). A start
/// for B may be supplied (warm start); the limit does not depend on it.
CoupledResult solve_coupled(const LinearizedProblem& prob, const EdgeField* B_start = nullptr);

/// max(0.01 * outer_tol, 10 * inner_rtol).
double coupled_tolerance(const SolverConfig& c);

}  // namespace hallmhd
