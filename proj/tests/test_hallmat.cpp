#include <doctest.h>

#include "hallmhd/hallmat.hpp"
#include "hallmhd/sample.hpp"
#include "test_util.hpp"

using namespace hallmhd;

namespace {

Vec3 random_vec(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec3 v{u(rng), u(rng), u(rng)};
  const double s = radius * u(rng) / std::sqrt(dot(v, v) + 1e-300);
  return {v[0] * s, v[1] * s, v[2] * s};
}

double rel(const Vec3& a, const Vec3& b) {
  const Vec3 d{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  return std::sqrt(dot(d, d)) / std::max(std::sqrt(dot(b, b)), 1e-300);
}

// Gaussian elimination with partial pivoting, independent of the closed form.
Vec3 solve3(Mat3 m, Vec3 r) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int i = c + 1; i < 3; ++i)
      if (std::abs(m[i][c]) > std::abs(m[piv][c])) piv = i;
    std::swap(m[c], m[piv]);
    std::swap(r[c], r[piv]);
    for (int i = c + 1; i < 3; ++i) {
      const double f = m[i][c] / m[c][c];
      for (int j = c; j < 3; ++j) m[i][j] -= f * m[c][j];
      r[i] -= f * r[c];
    }
  }
  Vec3 x{};
  for (int i = 2; i >= 0; --i) {
    double s = r[i];
    for (int j = i + 1; j < 3; ++j) s -= m[i][j] * x[j];
    x[i] = s / m[i][i];
  }
  return x;
}

}  // namespace

TEST_CASE("apply_A examples") {
  CHECK(apply_A({0, 0, 0}, {1, 2, 3}) == Vec3{1, 2, 3});
  CHECK(apply_A({0, 0, 1}, {1, 0, 0}) == Vec3{1, -1, 0});
  CHECK(apply_A_inv({0, 0, 1}, {1, -1, 0}) == Vec3{1, 0, 0});
  const Vec3 xi{1, 0, 0};
  CHECK(dot(apply_A_inv({1, 0, 0}, xi), xi) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("assembled matrices agree with the cross-product forms") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const Vec3 b = random_vec(rng, 10.0), xi = random_vec(rng, 3.0);
    const Mat3 a = assemble_A(b);
    const Vec3 ax{dot(a[0], xi), dot(a[1], xi), dot(a[2], xi)};
    CHECK(rel(ax, apply_A(b, xi)) <= 1e-14);
    CHECK(rel(apply_A_inv(b, xi), solve3(a, xi)) <= 1e-13);
    const Mat3 ai = assemble_A_inv(b);
    for (const auto& row : ai)
      for (double v : row) CHECK(std::abs(v) <= 1.0 + 1e-15);
  }
}

TEST_CASE("Hall matrix properties for random samples") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 10000; ++t) {
    const Vec3 b = random_vec(rng, 10.0), xi = random_vec(rng, 5.0);
    const double xx = dot(xi, xi);
    REQUIRE(rel(apply_A(b, apply_A_inv(b, xi)), xi) <= 1e-14);
    REQUIRE(rel(apply_A_inv(b, apply_A(b, xi)), xi) <= 1e-14);
    REQUIRE(std::abs(dot(apply_A(b, xi), xi) - xx) <= 1e-14 * xx);
    const double q = dot(apply_A_inv(b, xi), xi);
    const double bx = dot(b, xi);
    const double exact = (xx + bx * bx) / (1.0 + dot(b, b));
    REQUIRE(std::abs(q - exact) <= 1e-14 * exact);
  }
}

TEST_CASE("apply_A_inv_field") {
  std::mt19937_64 rng(23);
  const Grid g(8);
  const auto f = testutil::random_field<FieldKind::Face>(g, rng);
  CHECK(apply_A_inv_field(EdgeField(g), f) == f);

  const auto h = sample_edges(g, [](double, double, double) { return Vec3{0, 0, 1}; });
  const auto fc = sample_faces(g, [](double, double, double) { return Vec3{1, -1, 0}; });
  const auto out = apply_A_inv_field(h, fc);
  for (double v : out.comp(0)) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
  for (double v : out.comp(1)) CHECK(std::abs(v) <= 1e-15);
  for (double v : out.comp(2)) CHECK(std::abs(v) <= 1e-15);

  const auto hr = testutil::random_field<FieldKind::Edge>(g, rng, 20.0);
  CHECK(ellipticity_defect(hr, f) <= 1e-14);
  const HallCoefficients coef(hr, 1.5);
  const auto diff = apply_A_inv_field(coef, f) - apply_A_inv_field(hr, f, 1.5);
  CHECK(testutil::max_abs(diff.flat()) <= 1e-14 * testutil::max_abs(f.flat()));
  CHECK_THROWS_AS(apply_A_inv_field(EdgeField(Grid(4)), f), GridError);
}
