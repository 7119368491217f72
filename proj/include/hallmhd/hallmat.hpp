/// @file hallmat.hpp
/// @brief The Hall matrix A(b) xi = xi + xi x b and its closed-form inverse.
///
///   A^{-1}(b) xi = (xi + (b.xi) b + b x xi) / (1 + |b|^2)
///
/// det A(b) = 1 + |b|^2 >= 1, so both maps are defined for every finite b.
/// No clamping of |b| is done anywhere.
#pragma once

#include <array>

#include "hallmhd/grid.hpp"
#include "hallmhd/ops.hpp"

namespace hallmhd {

using Mat3 = std::array<std::array<double, 3>, 3>;

inline Vec3 cross(const Vec3& a, const Vec3& b) noexcept {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double dot(const Vec3& a, const Vec3& b) noexcept {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 apply_A(const Vec3& b, const Vec3& xi) noexcept {
  const Vec3 c = cross(xi, b);
  return {xi[0] + c[0], xi[1] + c[1], xi[2] + c[2]};
}

inline Vec3 apply_A_inv(const Vec3& b, const Vec3& xi) noexcept {
  const double s = 1.0 / (1.0 + dot(b, b));
  const double bx = dot(b, xi);
  const Vec3 c = cross(b, xi);
  return {s * (xi[0] + bx * b[0] + c[0]), s * (xi[1] + bx * b[1] + c[1]),
          s * (xi[2] + bx * b[2] + c[2])};
}

Mat3 assemble_A(const Vec3& b) noexcept;
Mat3 assemble_A_inv(const Vec3& b) noexcept;

/// Rows of A^{-1}(mu * H) needed at every face: for the d-normal face with
/// flat index idx, row[d][idx] is row d of the matrix evaluated with H
/// averaged from edges onto that face.
struct HallCoefficients {
  HallCoefficients(const EdgeField& H, double mu);
  Grid grid;
  std::array<std::vector<Vec3>, 3> row;
};

/// Pointwise A^{-1}(mu * interp(H, face)) applied to the collocated face vector
/// of F; returns the normal component at every face (boundary faces included).
FaceField apply_A_inv_field(const EdgeField& H, const FaceField& F, double mu = 1.0);
FaceField apply_A_inv_field(const HallCoefficients& coef, const FaceField& F);

/// Largest violation of |F|^2/(1+|H|^2) <= <A^{-1}(H)F, F> <= |F|^2 over all
/// faces, relative to |F|^2 (0 when the sandwich holds everywhere).
double ellipticity_defect(const EdgeField& H, const FaceField& F, double mu = 1.0);

}  // namespace hallmhd
