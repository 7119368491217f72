/// @file sample.hpp
/// @brief Point sampling of closed-form fields at staggered locations.
#pragma once

#include <functional>

#include "hallmhd/grid.hpp"
#include "hallmhd/ops.hpp"

namespace hallmhd {

using ScalarFn = std::function<double(double, double, double)>;
using VectorFn = std::function<Vec3(double, double, double)>;

/// Physical position of entry p of a component.
Vec3 cell_position(const Grid& g, const std::array<int, 3>& p);
Vec3 face_position(const Grid& g, int d, const std::array<int, 3>& p);
Vec3 edge_position(const Grid& g, int d, const std::array<int, 3>& p);

ScalarField sample_cells(const Grid& g, const ScalarFn& fn);
/// Component d of fn at the d-normal faces.
FaceField sample_faces(const Grid& g, const VectorFn& fn);
/// Component d of fn at the d-directed edge midpoints.
EdgeField sample_edges(const Grid& g, const VectorFn& fn);

}  // namespace hallmhd
