/// @file elliptic.hpp
/// @brief Variable-coefficient Neumann problem, div-curl reconstruction, and
/// componentwise mixed Poisson solves.
#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "hallmhd/grid.hpp"
#include "hallmhd/hallmat.hpp"
#include "hallmhd/krylov.hpp"
#include "hallmhd/spectral.hpp"

namespace hallmhd {

/// Raised when a source violates the solvability condition of its problem.
class CompatibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NeumannSolution {
  ScalarField phi;       ///< zero mean
  FaceField flux;        ///< A^{-1}(mu H)(grad phi + G), boundary-normal entries exactly 0
  KrylovResult stats;
};

/// Interior-face flux A^{-1}(mu H) Y with Y = grad phi + G; boundary faces are 0.
/// The wall-normal entries of Y only enter through the tangential averages at
/// neighbouring faces and are replaced by linear extrapolation from the interior.
FaceField neumann_flux(const HallCoefficients& coef, const ScalarField& phi, const FaceField& G);

/// div[A^{-1}(mu H)(grad phi + G)] = 0 with zero normal flux, solved by
/// BiCGStab preconditioned with the constant-coefficient Neumann Laplacian.
/// Stops once ||div flux||_L2 <= rtol * ||G||_L2 / h.
NeumannSolution solve_neumann_full(const EdgeField& H, const FaceField& G, const KrylovSpec& spec,
                                   double mu = 1.0);
ScalarField solve_neumann(const EdgeField& H, const FaceField& G, const KrylovSpec& spec,
                          double mu = 1.0);

/// Tangential-zero B with curl_e2f(B) = J and vanishing edge divergence.
/// J must be discretely divergence-free with zero boundary-normal values; the
/// divergence test is ||div J||_L2 <= 1e-8 * max(||J||_L2, scale) / h, where
/// scale lets callers supply the magnitude of the data J was built from.
EdgeField reconstruct_B(const FaceField& J, const KrylovSpec& spec, double scale = 0.0);

/// Componentwise -Delta_h x = rhs for one stored component (see spectral.hpp)
/// by preconditioned CG. PureNeumann requires a zero-mean rhs and returns a
/// zero-mean x.
std::vector<double> solve_poisson_mixed(const Grid& g, std::span<const double> rhs,
                                        BcPattern pattern, const KrylovSpec& spec);

/// L2 (h^3-weighted) norm of a flat cell-centered or component array.
double weighted_l2(const Grid& g, std::span<const double> v);

}  // namespace hallmhd
