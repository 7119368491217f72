#include <doctest.h>

#include <random>

#include "hallmhd/elliptic.hpp"
#include "hallmhd/hallmat.hpp"
#include "hallmhd/linsys.hpp"
#include "hallmhd/mms.hpp"
#include "hallmhd/norms.hpp"
#include "hallmhd/sample.hpp"
#include "test_util.hpp"

using namespace hallmhd;
using testutil::max_abs;
using testutil::order;
using testutil::pi;

namespace {

// Discretely divergence-free no-slip velocity: curl of a random
// tangential-zero edge potential.
FaceField random_div_free(const Grid& g, std::mt19937_64& rng) {
  FaceField u = curl_e2f(testutil::random_tangential_zero(g, rng));
  enforce_noslip(u);
  return u;
}

FaceField smooth_faces(const Grid& g, double phase) {
  return sample_faces(g, [phase](double x, double y, double z) {
    return Vec3{std::sin(2 * pi * x + phase) * std::cos(pi * y) + z, std::cos(pi * (x + y + phase)) * z,
                std::sin(pi * x * y + phase) + std::cos(3 * z)};
  });
}

EdgeField eigen_B(const Grid& g, double a) {
  EdgeField B = sample_edges(g, [a](double x, double y, double z) {
    return Vec3{a * std::cos(pi * x) * std::sin(pi * y) * std::sin(pi * z),
                -a * std::sin(pi * x) * std::cos(pi * y) * std::sin(pi * z), 0.0};
  });
  enforce_tangential_zero(B);
  return B;
}

SolverConfig small_config(int n) {
  SolverConfig c;
  c.n = n;
  return c;
}

}  // namespace

TEST_CASE("shared interpolation gives exact cross-cancellation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Grid g(8 + 4 * (trial % 3));
    const FaceField u = testutil::random_noslip(g, rng);
    const EdgeField H = testutil::random_tangential_zero(g, rng);
    const FaceField J = curl_e2f(testutil::random_tangential_zero(g, rng));
    const double a = inner(lorentz_force(J, H), u);
    const double b = inner(induction_term(u, H), J);
    CHECK(std::abs(a + b) <= 1e-13 * std::max(std::abs(a), 1e-300));
  }
}

TEST_CASE("convection is skew-symmetric for divergence-free w") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Grid g(8 + 4 * (trial % 3));
    const FaceField w = random_div_free(g, rng);
    const MomentumOperator L(w);
    REQUIRE(L.has_convection());
    const FaceField u = testutil::random_noslip(g, rng);
    const FaceField v = testutil::random_noslip(g, rng);
    const FaceField Nu = L.convection(u);
    const FaceField Nv = L.convection(v);
    const double scale = norm(Nu, NormKind::L2) * norm(u, NormKind::L2);
    CHECK(std::abs(inner(Nu, u)) <= 1e-13 * scale);
    // <N u, v> = -<u, N v>
    CHECK(std::abs(inner(Nu, v) + inner(u, Nv)) <= 1e-13 * scale);
  }
  const Grid g(8);
  CHECK_FALSE(MomentumOperator(FaceField(g)).has_convection());
}

TEST_CASE("convection is consistent with (w.grad) u") {
  const ManufacturedSolution ms(1.0, {1, 1, 1}, {1.0, -1.0, 0.0}, {1.0, 0.5, -1.0});
  std::array<double, 3> err{};
  for (int l = 0; l < 3; ++l) {
    const Grid g(8 << l);
    const FaceField w = sample_exact(ms, g, ForcingMode::Discrete).u;
    const FaceField Nw = MomentumOperator(w).convection(w);
    FaceField ref = sample_faces(g, [&](double x, double y, double z) {
      const Vec3 v = ms.u({x, y, z});
      const Mat3 d = ms.grad_u({x, y, z});
      return Vec3{d[0][0] * v[0] + d[0][1] * v[1] + d[0][2] * v[2], d[1][0] * v[0] + d[1][1] * v[1] + d[1][2] * v[2],
                  d[2][0] * v[0] + d[2][1] * v[1] + d[2][2] * v[2]};
    });
    enforce_noslip(ref);
    err[l] = norm(Nw - ref, NormKind::L2);
  }
  CHECK(order(err[1], err[2]) >= 1.8);
}

TEST_CASE("momentum solve: zero data and postconditions") {
  const Grid g(8);
  const KrylovSpec spec;
  std::mt19937_64 rng(13);
  const auto zero = solve_momentum(FaceField(g), EdgeField(g), EdgeField(g), FaceField(g), spec);
  CHECK(max_abs(zero.u.flat()) == 0.0);
  CHECK(max_abs(zero.p.flat()) == 0.0);

  const FaceField w = random_div_free(g, rng);
  const EdgeField H = testutil::random_tangential_zero(g, rng);
  const EdgeField B = testutil::random_tangential_zero(g, rng);
  const FaceField f = smooth_faces(g, 0.3);
  const auto s = solve_momentum(w, H, B, f, spec);
  CHECK(is_noslip(s.u));
  CHECK(std::abs(mean(s.p)) <= 1e-14);
  CHECK(norm(div(s.u), NormKind::L2) <= spec.rtol * norm(s.u, NormKind::H1));

  // Independent residual recomputation.
  const MomentumOperator L(w);
  FaceField F = f + lorentz_force(curl_e2f(B), H);
  enforce_noslip(F);
  FaceField r = F - L.apply(s.u) - grad(s.p);
  enforce_noslip(r);
  CHECK(norm(r, NormKind::L2) <= spec.rtol * norm(F, NormKind::L2));
}

TEST_CASE("momentum solve: energy identity") {
  const Grid g(12);
  const KrylovSpec spec;
  std::mt19937_64 rng(14);
  const FaceField w = random_div_free(g, rng);
  const EdgeField H = testutil::random_tangential_zero(g, rng);
  const EdgeField B = testutil::random_tangential_zero(g, rng);
  FaceField f = smooth_faces(g, 1.1);
  enforce_noslip(f);
  const auto s = solve_momentum(w, H, B, f, spec);
  const double lhs = std::pow(norm(s.u, NormKind::H1semi), 2);
  const double rhs = inner(f, s.u) + inner(lorentz_force(curl_e2f(B), H), s.u);
  CHECK(std::abs(lhs - rhs) <= 1e-8 * lhs);
}

TEST_CASE("momentum solve: analytic Stokes oracle") {
  const ManufacturedSolution ms(1.0, {1, 1, 1}, {1.0, -1.0, 0.0}, {1.0, 1.0, 1.0}, ProblemKind::Stokes);
  std::array<double, 3> eu{}, ep{};
  for (int l = 0; l < 3; ++l) {
    const Grid g(8 << l);
    const FaceField f = sample_faces(g, [&](double x, double y, double z) { return ms.f({x, y, z}); });
    const auto s = solve_momentum(FaceField(g), EdgeField(g), EdgeField(g), f, KrylovSpec{});
    const HallState ex = sample_exact(ms, g, ForcingMode::Analytic);
    eu[l] = norm(s.u - ex.u, NormKind::L2);
    ep[l] = norm(s.p - ex.p, NormKind::L2);
  }
  CHECK(order(eu[1], eu[2]) >= 1.9);
  CHECK(order(ep[1], ep[2]) >= 1.9);
}

TEST_CASE("Maxwell-type solve: zero source and eigenmode oracle") {
  const KrylovSpec spec;
  std::mt19937_64 rng(15);
  {
    const Grid g(8);
    const auto z = solve_maxwell_type(testutil::random_tangential_zero(g, rng), FaceField(g), spec);
    CHECK(max_abs(z.B.flat()) == 0.0);
    CHECK(max_abs(z.phi.flat()) == 0.0);
  }
  const ManufacturedSolution ms(1.0, {1, 1, 1}, {1.0, -1.0, 0.0}, {1, 1, 1}, ProblemKind::Maxwell);
  std::array<double, 3> err{};
  for (int l = 0; l < 3; ++l) {
    const Grid g(8 << l);
    const FaceField G = sample_faces(g, [&](double x, double y, double z) { return ms.curl_B({x, y, z}); });
    const auto s = solve_maxwell_type(EdgeField(g), G, spec);
    err[l] = norm(s.B - sample_exact(ms, g, ForcingMode::Analytic).B, NormKind::L2);
    CHECK(max_abs(edge_div(s.B)) <= 1e-10 * max_abs(s.B.flat()) / g.h());
    CHECK(is_tangential_zero(s.B));
  }
  CHECK(order(err[1], err[2]) >= 1.9);
}

TEST_CASE("Maxwell-type solve: energy inequality ||curl B|| <= ||G||") {
  const KrylovSpec spec;
  const Grid g(16);
  const EdgeField H = eigen_B(g, 0.5);
  for (int k = 0; k < 4; ++k) {
    const FaceField G = smooth_faces(g, 0.7 * k);
    const auto s = solve_maxwell_type(H, G, spec);
    const double lhs = norm(curl_e2f(s.B), NormKind::L2);
    const double rhs = norm(G, NormKind::L2);
    CAPTURE(lhs / rhs);
    CHECK(lhs <= (1 + 1e-6) * rhs);
    // The reconstructed curl is the Neumann flux.
    CHECK(norm(curl_e2f(s.B) - s.J, NormKind::L2) <= 1e-8 * rhs);
  }
}

TEST_CASE("apply_hall_operator inverts the discrete Hall coefficient map") {
  const KrylovSpec spec;
  std::mt19937_64 rng(16);
  const Grid g(8);
  const EdgeField H = eigen_B(g, 2.0);
  const FaceField J = curl_e2f(testutil::random_tangential_zero(g, rng));
  FaceField Y = apply_hall_operator(H, J, spec);
  const HallCoefficients coef(H, 1.0);
  FaceField back = apply_A_inv_field(coef, Y);
  enforce_noslip(back);
  CHECK(norm(back - J, NormKind::L2) <= 1e-9 * norm(J, NormKind::L2));
  CHECK(max_abs(apply_hall_operator(H, FaceField(g), spec).flat()) == 0.0);

  // With H = 0 the map is the identity on interior faces.
  FaceField id = apply_hall_operator(EdgeField(g), J, spec);
  enforce_noslip(id);
  CHECK(norm(id - J, NormKind::L2) <= 1e-12 * norm(J, NormKind::L2));
}

TEST_CASE("coupled solve: zero data, decoupling, validation") {
  std::mt19937_64 rng(17);
  const SolverConfig c = small_config(8);
  const Grid g(c.n);
  SUBCASE("f = g = 0 gives the zero state") {
    LinearizedProblem p{random_div_free(g, rng), testutil::random_tangential_zero(g, rng), FaceField(g),
                        FaceField(g), c};
    const auto r = solve_coupled(p);
    CHECK(max_abs(r.state.u.flat()) == 0.0);
    CHECK(max_abs(r.state.B.flat()) == 0.0);
    CHECK(max_abs(r.state.p.flat()) == 0.0);
  }
  SUBCASE("w = H = 0 decouples into the separate solvers") {
    const FaceField f = smooth_faces(g, 0.2);
    const FaceField gg = smooth_faces(g, 0.9);
    LinearizedProblem p{FaceField(g), EdgeField(g), f, gg, c};
    const auto r = solve_coupled(p);
    const auto mom = solve_momentum(FaceField(g), EdgeField(g), EdgeField(g), f, c.krylov());
    const auto mx = solve_maxwell_type(EdgeField(g), gg, c.krylov(), c.mu);
    CHECK(norm(r.state.u - mom.u, NormKind::H1) <= 1e-12 * norm(mom.u, NormKind::H1));
    CHECK(norm(r.state.B - mx.B, NormKind::H1) <= 1e-12 * norm(mx.B, NormKind::H1));
  }
  SUBCASE("invalid frozen fields are rejected") {
    LinearizedProblem p{testutil::random_noslip(g, rng), EdgeField(g), FaceField(g), FaceField(g), c};
    CHECK_THROWS_AS(solve_coupled(p), std::invalid_argument);
    LinearizedProblem q{FaceField(g), testutil::random_field<FieldKind::Edge>(g, rng), FaceField(g),
                        FaceField(g), c};
    CHECK_THROWS_AS(solve_coupled(q), std::invalid_argument);
  }
  SUBCASE("coupled tolerance") {
    SolverConfig d = c;
    d.outer_tol = 1e-6;
    d.inner_rtol = 1e-12;
    CHECK(coupled_tolerance(d) == doctest::Approx(1e-8));
    d.inner_rtol = 1e-8;
    CHECK(coupled_tolerance(d) == doctest::Approx(1e-7));
  }
}

TEST_CASE("coupled solve: manufactured linearized system") {
  // With frozen (w, H) = (u*, B*) the linearized forcing equals the nonlinear one.
  SolverConfig c;
  c.forcing.family = ForcingFamily::Manufactured;
  c.forcing.amplitude = 0.3;
  const auto ms = ManufacturedSolution::from_spec(c.forcing);
  std::array<double, 3> eu{}, eb{};
  for (int l = 0; l < 3; ++l) {
    c.n = 8 << l;
    const Grid g(c.n);
    const Forcing F = forcing_from_solution(ms, g, c);
    const HallState ex = sample_exact(ms, g, ForcingMode::Analytic);
    const HallState frozen = sample_exact(ms, g, ForcingMode::Discrete);
    LinearizedProblem p{frozen.u, frozen.B, F.f, F.g, c};
    const auto r = solve_coupled(p);
    eu[l] = norm(r.state.u - ex.u, NormKind::L2);
    eb[l] = norm(r.state.B - ex.B, NormKind::L2);
  }
  CHECK(order(eu[1], eu[2]) >= 1.9);
  CHECK(order(eb[1], eb[2]) >= 1.9);
}

TEST_CASE("coupled solve: global energy estimate with the discrete Poincare constant") {
  std::mt19937_64 rng(18);
  const SolverConfig c = small_config(12);
  const Grid g(c.n);
  const double lu = smallest_eigenvalue(g, BcPattern::FaceX);
  double lb = smallest_eigenvalue(g, BcPattern::EdgeX);
  const double cu = 1 / std::sqrt(lu), cb = 1 / std::sqrt(lb);
  const double C = (std::sqrt(1 + cu * cu) + std::sqrt(1 + cb * cb)) * std::max(1.0, cu);
  for (int k = 0; k < 3; ++k) {
    FaceField f = smooth_faces(g, 0.4 * k);
    enforce_noslip(f);
    const FaceField gg = smooth_faces(g, 1.0 + 0.3 * k);
    LinearizedProblem p{0.1 * random_div_free(g, rng), eigen_B(g, 0.2), f, gg, c};
    const auto r = solve_coupled(p);
    const double lhs = norm(r.state.u, NormKind::H1) + norm(r.state.B, NormKind::H1);
    CHECK(lhs <= C * (norm(f, NormKind::L2) + norm(gg, NormKind::L2)));
  }
}
