/// @file state.hpp
/// @brief The discrete unknowns (u, p, B) of one Hall-MHD solve.
#pragma once

#include "hallmhd/grid.hpp"

namespace hallmhd {

struct HallState {
  explicit HallState(const Grid& g) : u(g), p(g), B(g), phi(g) {}

  FaceField u;     ///< velocity, no-slip
  ScalarField p;   ///< pressure, zero mean
  EdgeField B;     ///< magnetic field, tangential-zero
  ScalarField phi; ///< potential of the last Maxwell-type solve, zero mean

  const Grid& grid() const noexcept { return u.grid(); }
};

}  // namespace hallmhd
