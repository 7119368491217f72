#include <doctest.h>

#include <random>
#include <sstream>

#include "hallmhd/driver.hpp"
#include "hallmhd/linsys.hpp"
#include "hallmhd/mms.hpp"
#include "hallmhd/norms.hpp"
#include "hallmhd/sample.hpp"
#include "test_util.hpp"

using namespace hallmhd;
using testutil::max_abs;
using testutil::order;

namespace {

constexpr double step = 1e-5;

std::vector<ManufacturedSolution> families() {
  return {ManufacturedSolution(1.0, {1, 1, 1}, {1.0, -1.0, 0.0}, {1.0, 1.0, 1.0}),
          ManufacturedSolution(0.7, {2, 1, 1}, {1.0, -1.0, -1.0}, {0.5, -1.0, 2.0}),
          ManufacturedSolution(1.3, {1, 2, 3}, {1.0, 1.0, -1.0}, {1.0, 0.0, -0.5})};
}

std::vector<Vec3> random_points(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::vector<Vec3> out;
  for (int i = 0; i < count; ++i) out.push_back({u(rng), u(rng), u(rng)});
  return out;
}

Vec3 shifted(Vec3 x, int j, double s) {
  x[j] += s;
  return x;
}

// Central difference of a vector-valued function along axis j.
template <typename Fn>
Vec3 central(const Fn& fn, const Vec3& x, int j) {
  const Vec3 a = fn(shifted(x, j, step));
  const Vec3 b = fn(shifted(x, j, -step));
  return {(a[0] - b[0]) / (2 * step), (a[1] - b[1]) / (2 * step), (a[2] - b[2]) / (2 * step)};
}

}  // namespace

TEST_CASE("closed-form derivatives match central differences") {
  for (const auto& ms : families()) {
    for (const Vec3& x : random_points(10, 42)) {
      const Mat3 du = ms.grad_u(x);
      const Mat3 dB = ms.grad_B(x);
      Vec3 lap{0, 0, 0};
      for (int j = 0; j < 3; ++j) {
        const Vec3 cu = central([&](const Vec3& y) { return ms.u(y); }, x, j);
        const Vec3 cB = central([&](const Vec3& y) { return ms.B(y); }, x, j);
        // d/dx_j of column j of grad u sums to the Laplacian.
        const Vec3 cg = central(
            [&](const Vec3& y) {
              const Mat3 m = ms.grad_u(y);
              return Vec3{m[0][j], m[1][j], m[2][j]};
            },
            x, j);
        for (int i = 0; i < 3; ++i) {
          CHECK(std::abs(cu[i] - du[i][j]) <= 1e-6);
          CHECK(std::abs(cB[i] - dB[i][j]) <= 1e-6);
          lap[i] += cg[i];
        }
        const double cp = (ms.p(shifted(x, j, step)) - ms.p(shifted(x, j, -step))) / (2 * step);
        CHECK(std::abs(cp - ms.grad_p(x)[j]) <= 1e-6);
      }
      const Vec3 l = ms.laplacian_u(x);
      for (int i = 0; i < 3; ++i) CHECK(std::abs(lap[i] - l[i]) <= 1e-6);

      // u* = curl Psi by differences of Psi.
      std::array<Vec3, 3> dpsi;
      for (int j = 0; j < 3; ++j) dpsi[j] = central([&](const Vec3& y) { return ms.psi(y); }, x, j);
      const Vec3 curl_psi{dpsi[1][2] - dpsi[2][1], dpsi[2][0] - dpsi[0][2], dpsi[0][1] - dpsi[1][0]};
      const Vec3 u = ms.u(x);
      for (int i = 0; i < 3; ++i) CHECK(std::abs(curl_psi[i] - u[i]) <= 1e-6);

      const Vec3 cb = ms.curl_B(x);
      const Vec3 by_hand{dB[2][1] - dB[1][2], dB[0][2] - dB[2][0], dB[1][0] - dB[0][1]};
      for (int i = 0; i < 3; ++i) CHECK(cb[i] == doctest::Approx(by_hand[i]));
    }
  }
}

TEST_CASE("manufactured fields are divergence-free and satisfy the wall conditions") {
  for (const auto& ms : families()) {
    for (const Vec3& x : random_points(20, 7)) {
      const Mat3 du = ms.grad_u(x);
      const Mat3 dB = ms.grad_B(x);
      CHECK(std::abs(du[0][0] + du[1][1] + du[2][2]) <= 1e-12);
      CHECK(std::abs(dB[0][0] + dB[1][1] + dB[2][2]) <= 1e-12);
    }
    for (const Vec3& x : random_points(20, 8)) {
      for (int d = 0; d < 3; ++d) {
        for (double wall : {0.0, 1.0}) {
          Vec3 y = x;
          y[d] = wall;
          const Vec3 u = ms.u(y);
          const Vec3 b = ms.B(y);
          for (int i = 0; i < 3; ++i) CHECK(std::abs(u[i]) <= 1e-14);
          for (int t = 0; t < 3; ++t)
            if (t != d) CHECK(std::abs(b[t]) <= 1e-14);
        }
      }
    }
  }
}

TEST_CASE("coefficient constraint is enforced") {
  CHECK_THROWS_AS(ManufacturedSolution(1.0, {1, 1, 1}, {1.0, 1.0, 0.0}, {1, 1, 1}), ManufacturedError);
  CHECK_THROWS_AS(ManufacturedSolution(1.0, {0, 1, 1}, {0.0, 1.0, -1.0}, {1, 1, 1}), ManufacturedError);
  CHECK_NOTHROW(ManufacturedSolution(1.0, {2, 1, 1}, {1.0, -2.0, 0.0}, {1, 1, 1}));
}

TEST_CASE("sampled exact fields: wall flags and discrete divergence") {
  const auto ms = families()[1];
  const auto eigen = families()[0];
  std::array<double, 2> div_u{}, div_B{};
  for (int l = 0; l < 2; ++l) {
    const Grid g(16 << l);
    const HallState s = sample_exact(ms, g, ForcingMode::Analytic);
    CHECK(is_noslip(s.u));
    CHECK(is_tangential_zero(s.B));
    const FaceField raw = sample_faces(g, [&](double x, double y, double z) { return ms.u({x, y, z}); });
    for (int d = 0; d < 3; ++d) {
      const auto c = raw.comp(d);
      const Layout& lay = raw.layout(d);
      for (int k = 0; k < lay.dims[2]; ++k)
        for (int j = 0; j < lay.dims[1]; ++j)
          for (int i = 0; i < lay.dims[0]; ++i) {
            const std::array<int, 3> p{i, j, k};
            if (p[d] == 0 || p[d] == g.n()) CHECK(std::abs(c[lay(p)]) <= 1e-15);
          }
    }
    div_u[l] = max_abs(div(s.u).flat());
    div_B[l] = max_abs(edge_div(s.B));
    // The (1,1,1) cavity eigenmode is exactly discretely divergence-free.
    CHECK(max_abs(edge_div(sample_exact(eigen, g, ForcingMode::Analytic).B)) <= 1e-12);
    const HallState sd = sample_exact(ms, g, ForcingMode::Discrete);
    CHECK(max_abs(div(sd.u).flat()) <= 1e-13);
    CHECK(max_abs(edge_div(sd.B)) <= 1e-13);
  }
  // Centered differences of sin^2 are the exact derivatives times the common
  // factor sin(pi h)/(pi h), so the sampled u* is discretely divergence-free.
  CHECK(div_u[0] <= 1e-12);
  CHECK(div_u[1] <= 1e-12);
  CHECK(order(div_B[0], div_B[1]) >= 1.9);
}

TEST_CASE("curl_e2f of the sampled potential converges to the analytic u*") {
  const auto ms = families()[0];
  std::array<double, 3> err{};
  for (int l = 0; l < 3; ++l) {
    const Grid g(8 << l);
    const FaceField num = sample_exact(ms, g, ForcingMode::Discrete).u;
    const FaceField ref = sample_exact(ms, g, ForcingMode::Analytic).u;
    err[l] = max_abs((num - ref).flat());
  }
  CHECK(order(err[1], err[2]) >= 1.9);
}

TEST_CASE("forcing synthesis") {
  SolverConfig c;
  c.forcing.family = ForcingFamily::Manufactured;
  const Grid g(8);
  SUBCASE("zero amplitude gives zero forcing in both modes") {
    c.forcing.amplitude = 0.0;
    for (auto mode : {ForcingMode::Analytic, ForcingMode::Discrete}) {
      c.forcing.mode = mode;
      const Forcing F = forcing_from_solution(ManufacturedSolution::from_spec(c.forcing), g, c);
      CHECK(max_abs(F.f.flat()) == 0.0);
      CHECK(max_abs(F.g.flat()) == 0.0);
    }
  }
  SUBCASE("B-only problem: g = curl B* + curl B* x B*") {
    c.forcing.problem = ProblemKind::Maxwell;
    c.forcing.amplitude = 0.5;
    const auto ms = ManufacturedSolution::from_spec(c.forcing);
    const Forcing F = forcing_from_solution(ms, g, c);
    CHECK(max_abs(F.f.flat()) == 0.0);
    const FaceField expect = sample_faces(g, [&](double x, double y, double z) {
      const Vec3 j = ms.curl_B({x, y, z});
      const Vec3 h = cross(j, ms.B({x, y, z}));
      return Vec3{j[0] + h[0], j[1] + h[1], j[2] + h[2]};
    });
    CHECK(max_abs((F.g - expect).flat()) <= 1e-14);
  }
  SUBCASE("forcing is linear in the amplitude for the Stokes problem") {
    c.forcing.problem = ProblemKind::Stokes;
    c.forcing.amplitude = 1.0;
    const Forcing F1 = forcing_from_solution(ManufacturedSolution::from_spec(c.forcing), g, c);
    c.forcing.amplitude = 3.0;
    const Forcing F3 = forcing_from_solution(ManufacturedSolution::from_spec(c.forcing), g, c);
    CHECK(max_abs((F3.f - 3.0 * F1.f).flat()) <= 1e-12 * max_abs(F3.f.flat()));
  }
}

TEST_CASE("discrete forcing is reproduced by the nonlinear solver") {
  SolverConfig c;
  c.n = 8;
  c.forcing.family = ForcingFamily::Manufactured;
  c.forcing.mode = ForcingMode::Discrete;
  const Grid g(c.n);
  const auto ms = ManufacturedSolution::from_spec(c.forcing);
  const Forcing F = forcing_from_solution(ms, g, c);
  const SolveResult r = solve_hall_mhd(F.f, F.g, c);
  REQUIRE(r.report.converged);
  const HallState ex = sample_exact(ms, g, ForcingMode::Discrete);
  CHECK(norm(r.state.u - ex.u, NormKind::H1) <= 10 * c.outer_tol * norm(ex.u, NormKind::H1));
  CHECK(norm(r.state.B - ex.B, NormKind::H1) <= 10 * c.outer_tol * norm(ex.B, NormKind::H1));
}

TEST_CASE("order fit and level validation") {
  const std::vector<double> h{0.1, 0.05, 0.025};
  const std::vector<double> e{3e-2, 7.5e-3, 1.875e-3};
  REQUIRE(fitted_order(h, e).has_value());
  CHECK(*fitted_order(h, e) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(fitted_order(h, {1e-2, 0.0, 1e-4}).has_value());
  CHECK_FALSE(fitted_order({0.1}, {1.0}).has_value());
  CHECK_THROWS_AS(validate_levels({16}), ManufacturedError);
  CHECK_THROWS_AS(validate_levels({16, 32}), ManufacturedError);
  CHECK_THROWS_AS(validate_levels({16, 24, 48}), ManufacturedError);
  CHECK_NOTHROW(validate_levels({8, 16, 48}));
}

TEST_CASE("convergence study: Stokes and Maxwell problems") {
  SolverConfig c;
  c.forcing.family = ForcingFamily::Manufactured;
  c.forcing.amplitude = 0.2;
  for (auto problem : {ProblemKind::Stokes, ProblemKind::Maxwell}) {
    CAPTURE(to_string(problem));
    c.forcing.problem = problem;
    const ConvergenceTable t = convergence_study({8, 16, 32}, c);
    REQUIRE(t.complete);
    REQUIRE(t.rows.size() == 3);
    if (problem == ProblemKind::Stokes) {
      REQUIRE(t.order_u.has_value());
      CHECK(*t.order_u >= 1.9);
      CHECK_FALSE(t.order_B.has_value());
    } else {
      REQUIRE(t.order_B.has_value());
      CHECK(*t.order_B >= 1.9);
    }
    std::ostringstream os;
    write_convergence_csv(os, t);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "n,h,err_u_L2,err_B_L2,order_u,order_B");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 3);
  }
}
