/// @file ops.hpp
/// @brief Mimetic discrete vector calculus on the staggered unit-cube grid.
///
/// grad: centers -> faces (boundary faces 0, Neumann-consistent)
/// div: faces -> centers
/// curl_e2f: edges -> faces (circulation per face area)
/// curl_f2e: faces -> edges (dual circulation, interior edges only)
/// edge_div: edges -> interior nodes
///
/// With these stencils div(curl_e2f E) = 0 and curl_f2e(grad psi) = 0 hold
/// to round-off, and grad/div, curl_e2f/curl_f2e are adjoint pairs under the
/// weighted inner products of norms.hpp.
#pragma once

#include <array>
#include <vector>

#include "hallmhd/grid.hpp"

namespace hallmhd {

using Vec3 = std::array<double, 3>;

FaceField grad(const ScalarField& phi);
ScalarField div(const FaceField& f);
FaceField curl_e2f(const EdgeField& e);
EdgeField curl_f2e(const FaceField& f);

/// Divergence of an edge field at interior nodes (boundary nodes hold 0).
/// Stored on the node layout.
std::vector<double> edge_div(const EdgeField& e);

/// Three-component vectors collocated at cell centers.
struct CellVectors {
  explicit CellVectors(const Grid& g) : c{ScalarField(g), ScalarField(g), ScalarField(g)} {}
  std::array<ScalarField, 3> c;
  const Grid& grid() const noexcept { return c[0].grid(); }
  Vec3 at(std::size_t idx) const noexcept {
    return {c[0].flat()[idx], c[1].flat()[idx], c[2].flat()[idx]};
  }
};

/// Full three-vectors collocated at every face: vec[d][idx] is the vector at
/// the d-normal face with flat index idx.
struct FaceVectors {
  explicit FaceVectors(const Grid& g);
  Grid grid;
  std::array<std::vector<Vec3>, 3> vec;
};

// Arithmetic averaging between adjacent staggered locations. All are linear
// and preserve constants.
CellVectors to_centers(const FaceField& f);
CellVectors to_centers(const EdgeField& e);
FaceVectors to_faces(const FaceField& f);
FaceVectors to_faces(const EdgeField& e);

/// Adjoint of to_centers(FaceField) under the weighted inner products:
/// interior faces average their two cells, boundary faces copy their cell.
FaceField from_centers(const CellVectors& c);

/// Replaces every boundary-normal entry by linear extrapolation from the two
/// nearest interior faces along the normal (2 v_1 - v_2).
void extrapolate_boundary_normal(FaceField& f);

/// Average of the t-normal face values around the d-normal face p.
double face_tangential_average(const FaceField& f, int d, int t, const std::array<int, 3>& p);

}  // namespace hallmhd
