/// @file test_util.hpp
/// @brief Random field generators and small analytic helpers for the tests.
#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "hallmhd/grid.hpp"
#include "hallmhd/ops.hpp"

namespace testutil {

using namespace hallmhd;

inline constexpr double pi = std::numbers::pi;

template <FieldKind K>
Field<K> random_field(const Grid& g, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Field<K> f(g);
  for (double& v : f.flat()) v = u(rng);
  return f;
}

inline ScalarField random_scalar(const Grid& g, std::mt19937_64& rng) {
  return random_field<FieldKind::Scalar>(g, rng);
}

inline FaceField random_noslip(const Grid& g, std::mt19937_64& rng) {
  auto f = random_field<FieldKind::Face>(g, rng);
  enforce_noslip(f);
  return f;
}

inline EdgeField random_tangential_zero(const Grid& g, std::mt19937_64& rng) {
  auto e = random_field<FieldKind::Edge>(g, rng);
  enforce_tangential_zero(e);
  return e;
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double order(double e_coarse, double e_fine, double ratio = 2.0) {
  return std::log(e_coarse / e_fine) / std::log(ratio);
}

}  // namespace testutil
