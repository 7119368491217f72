/// @file norms.hpp
/// @brief Quadrature-weighted inner products and discrete Sobolev norms.
///
/// Each stored value carries the volume of its dual cell: h^3 times 1/2 for
/// every node-type axis along which it sits on the boundary. This is the
/// midpoint rule at cell-type positions and the trapezoid rule at node-type
/// positions, so constants integrate exactly on every layout.
///
/// First differences ("links") follow the second-order stencils:
///   - node-type axis: all n links between consecutive nodes (boundary values
///     included);
///   - cell-type axis: the n-1 interior links, plus for face fields the two
///     half-cell wall links (v - 0)/(h/2) implied by the no-slip reflection.
/// The H1 seminorm is therefore exactly the quadratic form of the matching
/// componentwise Laplacian used by the solvers.
#pragma once

#include <string_view>

#include "hallmhd/grid.hpp"

namespace hallmhd {

enum class NormKind { L2, Lq, Linf, H1semi, H1, W1q };

/// Parses "L2", "Lq", "Linf", "H1semi", "H1", "W1q"; throws std::invalid_argument.
NormKind parse_norm_kind(std::string_view name);

double norm(const ScalarField& f, NormKind kind, double q = 4.0);
double norm(const FaceField& f, NormKind kind, double q = 4.0);
double norm(const EdgeField& f, NormKind kind, double q = 4.0);

double inner(const ScalarField& a, const ScalarField& b);
double inner(const FaceField& a, const FaceField& b);
double inner(const EdgeField& a, const EdgeField& b);

/// Plain h^3-weighted L2 norm of a node-layout array (interior nodes).
double node_l2(const Grid& g, std::span<const double> node_values);

}  // namespace hallmhd
