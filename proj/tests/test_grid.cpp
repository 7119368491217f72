#include <doctest.h>

#include <sstream>

#include "hallmhd/io.hpp"
#include "hallmhd/norms.hpp"
#include "hallmhd/sample.hpp"
#include "test_util.hpp"

using namespace hallmhd;
using testutil::max_abs;
using testutil::pi;

namespace {

// Node-based potential differenced along edges: the discrete gradient of psi.
EdgeField edge_gradient_of_nodes(const Grid& g, const ScalarFn& psi) {
  EdgeField e(g);
  const double h = g.h();
  for (int d = 0; d < 3; ++d) {
    const Layout& l = e.layout(d);
    auto v = e.comp(d);
    std::size_t idx = 0;
    for (int k = 0; k < l.dims[2]; ++k)
      for (int j = 0; j < l.dims[1]; ++j)
        for (int i = 0; i < l.dims[0]; ++i, ++idx) {
          std::array<double, 3> lo{g.node(i), g.node(j), g.node(k)};
          std::array<double, 3> hi = lo;
          hi[d] += h;
          v[idx] = (psi(hi[0], hi[1], hi[2]) - psi(lo[0], lo[1], lo[2])) / h;
        }
  }
  return e;
}

double interior_max(const ScalarField& s) { return max_abs(s.flat()); }

}  // namespace

TEST_CASE("grid construction validates resolution") {
  CHECK_THROWS_AS(Grid(3), GridError);
  CHECK_THROWS_AS(Grid(0), GridError);
  const Grid g(16);
  CHECK(g.h() * g.n() == 1.0);
  CHECK(ScalarField(g).size() == 16u * 16u * 16u);
  CHECK(FaceField(g).comp(0).size() == 17u * 16u * 16u);
  CHECK(EdgeField(g).comp(2).size() == 17u * 17u * 16u);
}

TEST_CASE("mixed-grid operations are rejected") {
  FaceField a(Grid(8)), b(Grid(16));
  CHECK_THROWS_AS(a += b, GridError);
  CHECK_THROWS_AS(inner(a, b), GridError);
}

TEST_CASE("grad: zero, linear, and second-order accuracy") {
  const Grid g(16);
  CHECK(max_abs(grad(ScalarField(g)).flat()) == 0.0);

  const auto lin = grad(sample_cells(g, [](double x, double, double) { return x; }));
  for (int k = 0; k < 16; ++k)
    for (int j = 0; j < 16; ++j)
      for (int i = 1; i < 16; ++i) CHECK(lin.at(0, i, j, k) == 1.0);

  auto err = [](int n) {
    const Grid gg(n);
    const auto gp = grad(sample_cells(gg, [](double x, double, double) { return std::cos(pi * x); }));
    double e = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 1; i < n; ++i)
          e = std::max(e, std::abs(gp.at(0, i, j, k) + pi * std::sin(pi * gg.node(i))));
    return e;
  };
  CHECK(testutil::order(err(16), err(32)) >= 1.9);
}

TEST_CASE("div: constants and second-order accuracy") {
  const Grid g(16);
  const auto c = sample_faces(g, [](double, double, double) { return Vec3{0.3, -1.0, 2.0}; });
  CHECK(interior_max(div(c)) <= 1e-12);

  auto err = [](int n) {
    const Grid gg(n);
    const auto f = sample_faces(gg, [](double x, double y, double) {
      return Vec3{std::sin(pi * x) * std::cos(pi * y), 0.0, 0.0};
    });
    const auto exact =
        sample_cells(gg, [](double x, double y, double) { return pi * std::cos(pi * x) * std::cos(pi * y); });
    return max_abs((div(f) - exact).flat());
  };
  CHECK(testutil::order(err(16), err(32)) >= 1.9);
}

TEST_CASE("mimetic identities hold to round-off") {
  std::mt19937_64 rng(7);
  for (int n : {8, 16}) {
    const Grid g(n);
    const double h2 = g.h() * g.h();
    for (int t = 0; t < 5; ++t) {
      const auto e = testutil::random_field<FieldKind::Edge>(g, rng);
      CHECK(interior_max(div(curl_e2f(e))) <= 1e-13 * max_abs(e.flat()) / h2);
      const auto psi = testutil::random_scalar(g, rng);
      CHECK(max_abs(curl_f2e(grad(psi)).flat()) <= 1e-13 * max_abs(psi.flat()) / h2);
    }
    const auto ge = edge_gradient_of_nodes(g, [](double x, double y, double z) {
      return std::sin(2.0 * x) * std::cos(y) + z * z;
    });
    CHECK(max_abs(curl_e2f(ge).flat()) <= 1e-13 * max_abs(ge.flat()) / g.h());
  }
}

TEST_CASE("summation by parts") {
  std::mt19937_64 rng(11);
  const Grid g(12);
  for (int t = 0; t < 5; ++t) {
    const auto f = testutil::random_noslip(g, rng);
    const auto psi = testutil::random_scalar(g, rng);
    const double a = inner(div(f), psi);
    const double b = inner(f, grad(psi));
    CHECK(std::abs(a + b) <= 1e-13 * (std::abs(a) + std::abs(b)));

    const auto e = testutil::random_tangential_zero(g, rng);
    const double c = inner(curl_e2f(e), f);
    const double d = inner(e, curl_f2e(f));
    CHECK(std::abs(c - d) <= 1e-13 * (std::abs(c) + std::abs(d)));
  }
}

TEST_CASE("curl_e2f matches the analytic curl of the cavity eigenmode") {
  auto err = [](int n) {
    const Grid g(n);
    const auto b = sample_edges(g, [](double x, double y, double z) {
      return Vec3{std::cos(pi * x) * std::sin(pi * y) * std::sin(pi * z),
                  -std::sin(pi * x) * std::cos(pi * y) * std::sin(pi * z), 0.0};
    });
    // (alpha, beta, gamma) = (1, -1, 0)
    const auto exact = sample_faces(g, [](double x, double y, double z) {
      const double sx = std::sin(pi * x), cx = std::cos(pi * x);
      const double sy = std::sin(pi * y), cy = std::cos(pi * y);
      const double sz = std::sin(pi * z), cz = std::cos(pi * z);
      return Vec3{pi * sx * cy * cz, pi * cx * sy * cz, -2.0 * pi * cx * cy * sz};
    });
    return max_abs((curl_e2f(b) - exact).flat());
  };
  CHECK(testutil::order(err(16), err(32)) >= 1.9);
}

TEST_CASE("curl_f2e matches the analytic curl at interior edges") {
  auto err = [](int n) {
    const Grid g(n);
    const auto f = sample_faces(g, [](double x, double y, double) {
      return Vec3{0.0, 0.0, std::sin(pi * x) * std::sin(pi * y)};
    });
    auto exact = sample_edges(g, [](double x, double y, double) {
      return Vec3{pi * std::sin(pi * x) * std::cos(pi * y), -pi * std::cos(pi * x) * std::sin(pi * y), 0.0};
    });
    enforce_tangential_zero(exact);
    return max_abs((curl_f2e(f) - exact).flat());
  };
  CHECK(testutil::order(err(16), err(32)) >= 1.9);
}

TEST_CASE("interpolation preserves constants, is linear, and second order") {
  const Grid g(8);
  const Vec3 c{0.5, -2.0, 3.0};
  const auto fc = sample_faces(g, [&](double, double, double) { return c; });
  const auto ec = sample_edges(g, [&](double, double, double) { return c; });
  for (const auto& cv : {to_centers(fc), to_centers(ec)})
    for (int d = 0; d < 3; ++d)
      for (double v : cv.c[d].flat()) CHECK(v == doctest::Approx(c[d]).epsilon(1e-15));
  for (const auto& fv : {to_faces(fc), to_faces(ec)})
    for (int d = 0; d < 3; ++d)
      for (const auto& v : fv.vec[d])
        for (int t = 0; t < 3; ++t) CHECK(v[t] == doctest::Approx(c[t]).epsilon(1e-15));

  std::mt19937_64 rng(3);
  const auto x = testutil::random_field<FieldKind::Face>(g, rng);
  const auto y = testutil::random_field<FieldKind::Face>(g, rng);
  const auto lhs = to_faces(2.0 * x + (-3.0) * y);
  const auto fx = to_faces(x), fy = to_faces(y);
  double worst = 0.0;
  for (int d = 0; d < 3; ++d)
    for (std::size_t i = 0; i < lhs.vec[d].size(); ++i)
      for (int t = 0; t < 3; ++t)
        worst = std::max(worst, std::abs(lhs.vec[d][i][t] - (2.0 * fx.vec[d][i][t] - 3.0 * fy.vec[d][i][t])));
  CHECK(worst <= 1e-14);

  auto err = [](int n) {
    const Grid gg(n);
    auto fn = [](double x, double y, double z) {
      return Vec3{std::sin(pi * x) * std::cos(pi * y), std::cos(pi * z), std::sin(pi * x * y)};
    };
    const auto cv = to_centers(sample_edges(gg, fn));
    double e = 0.0;
    for (int d = 0; d < 3; ++d) {
      const auto exact = sample_cells(gg, [&](double x, double y, double z) { return fn(x, y, z)[d]; });
      e = std::max(e, max_abs((cv.c[d] - exact).flat()));
    }
    return e;
  };
  CHECK(testutil::order(err(16), err(32)) >= 1.9);
}

TEST_CASE("from_centers is the weighted adjoint of to_centers") {
  std::mt19937_64 rng(5);
  const Grid g(8);
  const auto f = testutil::random_field<FieldKind::Face>(g, rng);
  CellVectors c(g);
  for (int d = 0; d < 3; ++d) c.c[d] = testutil::random_scalar(g, rng);
  const auto tc = to_centers(f);
  double lhs = 0.0;
  for (int d = 0; d < 3; ++d) lhs += inner(tc.c[d], c.c[d]);
  const double rhs = inner(f, from_centers(c));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("norms") {
  const Grid g(16);
  for (auto kind : {NormKind::L2, NormKind::Lq, NormKind::Linf, NormKind::H1semi, NormKind::H1, NormKind::W1q}) {
    CHECK(norm(ScalarField(g), kind) == 0.0);
    CHECK(norm(FaceField(g), kind) == 0.0);
    CHECK(norm(EdgeField(g), kind) == 0.0);
  }
  CHECK(norm(ScalarField(g, -2.5), NormKind::L2) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(norm(ScalarField(g, -2.5), NormKind::Lq, 4.0) == doctest::Approx(2.5).epsilon(1e-14));
  const Grid g64(64);
  const auto s = sample_cells(g64, [](double x, double, double) { return std::sin(pi * x); });
  CHECK(std::abs(norm(s, NormKind::L2) - std::sqrt(0.5)) <= 1e-3);
  CHECK_THROWS_AS(parse_norm_kind("H2"), std::invalid_argument);
  CHECK(parse_norm_kind("W1q") == NormKind::W1q);

  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const auto a = testutil::random_field<FieldKind::Face>(g, rng);
    const auto b = testutil::random_field<FieldKind::Face>(g, rng);
    for (auto kind : {NormKind::L2, NormKind::Lq, NormKind::H1, NormKind::W1q}) {
      CHECK(norm(a + b, kind) <= (norm(a, kind) + norm(b, kind)) * (1 + 1e-14));
      CHECK(norm(-3.0 * a, kind) == doctest::Approx(3.0 * norm(a, kind)).epsilon(1e-13));
    }
  }
}

TEST_CASE("H1 seminorm of a face field equals its Laplacian quadratic form") {
  // Componentwise -Delta with reflection ghosts; discrete integration by parts.
  std::mt19937_64 rng(2);
  const Grid g(8);
  const auto f = testutil::random_noslip(g, rng);
  const double h = g.h(), h3 = h * h * h;
  double form = 0.0;
  for (int d = 0; d < 3; ++d) {
    const Layout& l = f.layout(d);
    for (int k = 0; k < l.dims[2]; ++k)
      for (int j = 0; j < l.dims[1]; ++j)
        for (int i = 0; i < l.dims[0]; ++i) {
          const std::array<int, 3> p{i, j, k};
          if (p[d] == 0 || p[d] == 8) continue;
          const double v = f.at(d, i, j, k);
          double lap = 0.0;
          for (int a = 0; a < 3; ++a) {
            auto nb = [&](int s) {
              auto q = p;
              q[a] += s;
              if (a == d) return (q[a] <= 0 || q[a] >= 8) ? 0.0 : f.at(d, q[0], q[1], q[2]);
              if (q[a] < 0 || q[a] > 7) return -v;
              return f.at(d, q[0], q[1], q[2]);
            };
            lap += 2.0 * v - nb(-1) - nb(1);
          }
          form += h3 * v * lap / (h * h);
        }
  }
  const double s = norm(f, NormKind::H1semi);
  CHECK(s * s == doctest::Approx(form).epsilon(1e-12));
}

TEST_CASE("field dumps round-trip with the documented header") {
  std::mt19937_64 rng(1);
  const Grid g(4);
  const auto e = testutil::random_field<FieldKind::Edge>(g, rng);
  std::stringstream ss;
  write_dump(ss, e);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "HALLFIELD v1 kind=edge n=4 order=x-fastest endian=little fp=64");
  ss.seekg(0);
  CHECK(read_dump<FieldKind::Edge>(ss) == e);
  ss.seekg(0);
  CHECK_THROWS_AS(read_dump<FieldKind::Face>(ss), DumpError);
}
