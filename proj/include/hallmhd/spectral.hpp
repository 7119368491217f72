/// @file spectral.hpp
/// @brief Componentwise staggered Laplacians and their exact fast inverses.
///
/// Each pattern fixes, per axis, how one stored component meets the walls:
///   D1  node-type axis, wall values are 0 (only the n-1 interior points are unknown)
///   D2  cell-type axis, odd ghost reflection (value 0 halfway to the ghost)
///   N2  cell-type axis, even ghost reflection (zero normal derivative)
/// The 7-point operator -Delta_h is diagonalized by sine/cosine transforms
/// (FFTW r2r), so fast_poisson_solve is an exact inverse up to round-off.
#pragma once

#include <array>
#include <span>

#include "hallmhd/grid.hpp"

namespace hallmhd {

enum class AxisBc { D1, D2, N2 };

enum class BcPattern {
  PureNeumann,  ///< cell-centered, N2 on every axis (semi-definite)
  FaceX,        ///< d-normal face component of a no-slip velocity: D1 along d, D2 elsewhere
  FaceY,
  FaceZ,
  EdgeX,  ///< d-directed edge component of a tangential-zero field: N2 along d, D1 elsewhere
  EdgeY,
  EdgeZ,
};

BcPattern face_pattern(int d);
BcPattern edge_pattern(int d);
std::array<AxisBc, 3> axis_bcs(BcPattern pattern);
/// Storage layout of the component the pattern acts on.
Layout pattern_layout(int n, BcPattern pattern);
/// True when the entry at p is an unknown (not a D1 wall value).
bool is_unknown(int n, BcPattern pattern, const std::array<int, 3>& p);

/// out = -Delta_h in on the unknown entries; wall entries of out are 0.
void apply_laplacian(const Grid& g, BcPattern pattern, std::span<const double> in,
                     std::span<double> out);

/// Exact solve of -Delta_h x = rhs on the unknown entries. For PureNeumann the
/// constant mode of rhs is discarded and x has zero mean.
void fast_poisson_solve(const Grid& g, BcPattern pattern, std::span<const double> rhs,
                        std::span<double> x);

/// Smallest eigenvalue of -Delta_h for the pattern (the constant mode excluded
/// for PureNeumann).
double smallest_eigenvalue(const Grid& g, BcPattern pattern);

}  // namespace hallmhd
