#include "hallmhd/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hallmhd/driver.hpp"
#include "hallmhd/hallmat.hpp"
#include "hallmhd/linsys.hpp"
#include "hallmhd/norms.hpp"
#include "hallmhd/ops.hpp"

namespace hallmhd {

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <FieldKind K>
Field<K> random_field(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field<K> f(g);
  for (double& v : f.flat()) v = u(rng);
  return f;
}

// First interior entry of the first component.
template <FieldKind K>
void break_entry(Field<K>& f) {
  const int n = f.grid().n();
  f.at(0, n / 2, n / 2, n / 2) += 1e-3;
}

Vec3 random_vec(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec3 v{u(rng), u(rng), u(rng)};
  const double s = radius * std::abs(u(rng)) / std::sqrt(dot(v, v) + 1e-300);
  return {v[0] * s, v[1] * s, v[2] * s};
}

double rel3(const Vec3& a, const Vec3& b) {
  const Vec3 d{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  return std::sqrt(dot(d, d)) / std::max(std::sqrt(dot(b, b)), 1e-300);
}

// |a + b| relative to the Cauchy-Schwarz scale of the two products.
double rel_sum(double a, double b, double scale) { return scale > 0.0 ? std::abs(a + b) / scale : 0.0; }

}  // namespace

bool OperatorCheckReport::all_passed() const noexcept {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.passed(); });
}

InjectedFault parse_fault(const std::string& s) {
  if (s == "none") return InjectedFault::None;
  if (s == "curl") return InjectedFault::Curl;
  if (s == "grad") return InjectedFault::Grad;
  throw std::invalid_argument("fault must be none, curl or grad, got '" + s + "'");
}

OperatorCheckReport check_operators(int n, std::uint64_t seed, int samples, InjectedFault fault) {
  if (samples < 1) throw std::invalid_argument("check_operators needs >= 1 sample");
  const Grid g(n);
  const double h2 = g.h() * g.h();
  std::mt19937_64 rng(seed);
  OperatorCheckReport rep;
  rep.n = n;
  rep.samples = samples;

  auto curl = [&](const EdgeField& e) {
    FaceField f = curl_e2f(e);
    if (fault == InjectedFault::Curl) break_entry(f);
    return f;
  };
  auto gradient = [&](const ScalarField& s) {
    FaceField f = grad(s);
    if (fault == InjectedFault::Grad) break_entry(f);
    return f;
  };

  CheckItem div_curl{"div(curl_e2f E) = 0", 0.0, 1e-13};
  CheckItem curl_grad{"curl_f2e(grad psi) = 0", 0.0, 1e-13};
  CheckItem div_curl_dual{"edge_div(curl_f2e F) = 0", 0.0, 1e-13};
  for (int s = 0; s < samples; ++s) {
    const auto e = random_field<FieldKind::Edge>(g, rng);
    div_curl.defect = std::max(div_curl.defect, max_abs(div(curl(e)).flat()) * h2 / max_abs(e.flat()));
    const auto psi = random_field<FieldKind::Scalar>(g, rng);
    curl_grad.defect =
        std::max(curl_grad.defect, max_abs(curl_f2e(gradient(psi)).flat()) * h2 / max_abs(psi.flat()));
    const auto f = random_field<FieldKind::Face>(g, rng);
    div_curl_dual.defect =
        std::max(div_curl_dual.defect, max_abs(edge_div(curl_f2e(f))) * h2 / max_abs(f.flat()));
  }
  rep.items.push_back(div_curl);
  rep.items.push_back(curl_grad);
  rep.items.push_back(div_curl_dual);

  CheckItem sbp_grad{"<div f, psi> = -<f, grad psi>", 0.0, 1e-13};
  CheckItem sbp_curl{"<curl_e2f E, F> = <E, curl_f2e F>", 0.0, 1e-13};
  CheckItem interp{"from_centers adjoint of to_centers", 0.0, 1e-13};
  CheckItem cancel{"<curl B x H, u> + <u x H, curl B> = 0", 0.0, 1e-13};
  CheckItem skew{"<(w.grad) u, u> = 0 for div-free w", 0.0, 1e-13};
  const int pairs = std::min(samples, 10);
  for (int s = 0; s < pairs; ++s) {
    auto f = random_field<FieldKind::Face>(g, rng);
    enforce_noslip(f);
    const auto psi = random_field<FieldKind::Scalar>(g, rng);
    const ScalarField df = div(f);
    const FaceField gp = gradient(psi);
    sbp_grad.defect = std::max(
        sbp_grad.defect, rel_sum(inner(df, psi), inner(f, gp),
                                 norm(df, NormKind::L2) * norm(psi, NormKind::L2) + norm(f, NormKind::L2) * norm(gp, NormKind::L2)));

    auto e = random_field<FieldKind::Edge>(g, rng);
    enforce_tangential_zero(e);
    const FaceField ce = curl(e);
    const EdgeField cf = curl_f2e(f);
    sbp_curl.defect = std::max(
        sbp_curl.defect, rel_sum(inner(ce, f), -inner(e, cf),
                                 norm(ce, NormKind::L2) * norm(f, NormKind::L2) + norm(e, NormKind::L2) * norm(cf, NormKind::L2)));

    const auto c = to_centers(f);
    CellVectors cv(g);
    for (int d = 0; d < 3; ++d) cv.c[d] = random_field<FieldKind::Scalar>(g, rng);
    double lhs = 0.0, nc = 0.0, ncv = 0.0;
    for (int d = 0; d < 3; ++d) {
      lhs += inner(c.c[d], cv.c[d]);
      nc += inner(c.c[d], c.c[d]);
      ncv += inner(cv.c[d], cv.c[d]);
    }
    const FaceField fc = from_centers(cv);
    interp.defect = std::max(interp.defect, rel_sum(lhs, -inner(f, fc),
                                                    std::sqrt(nc * ncv) + norm(f, NormKind::L2) * norm(fc, NormKind::L2)));

    auto H = random_field<FieldKind::Edge>(g, rng);
    enforce_tangential_zero(H);
    const FaceField J = curl(e);
    const FaceField lf = lorentz_force(J, H);
    const FaceField ind = induction_term(f, H);
    cancel.defect = std::max(cancel.defect, rel_sum(inner(lf, f), inner(ind, J),
                                                    norm(lf, NormKind::L2) * norm(f, NormKind::L2) +
                                                        norm(ind, NormKind::L2) * norm(J, NormKind::L2)));

    auto p = random_field<FieldKind::Edge>(g, rng);
    enforce_tangential_zero(p);
    FaceField w = curl(p);
    enforce_noslip(w);
    const FaceField Nf = MomentumOperator(w).convection(f);
    const double scale = norm(Nf, NormKind::L2) * norm(f, NormKind::L2);
    skew.defect = std::max(skew.defect, scale > 0.0 ? std::abs(inner(Nf, f)) / scale : 0.0);
  }
  for (const auto& c : {sbp_grad, sbp_curl, interp, cancel, skew}) rep.items.push_back(c);

  CheckItem roundtrip{"A(b) A^-1(b) xi = xi", 0.0, 1e-14};
  CheckItem quad{"<A xi, xi> = |xi|^2", 0.0, 1e-14};
  CheckItem quad_inv{"<A^-1 xi, xi> = (|xi|^2 + (b.xi)^2)/(1+|b|^2)", 0.0, 1e-14};
  CheckItem entries{"|A^-1_ij| <= 1 (excess)", 0.0, 1e-14};
  for (int s = 0; s < 10000; ++s) {
    const Vec3 b = random_vec(rng, 10.0), xi = random_vec(rng, 5.0);
    const double xx = dot(xi, xi);
    if (xx == 0.0) continue;
    roundtrip.defect = std::max({roundtrip.defect, rel3(apply_A(b, apply_A_inv(b, xi)), xi),
                                 rel3(apply_A_inv(b, apply_A(b, xi)), xi)});
    quad.defect = std::max(quad.defect, std::abs(dot(apply_A(b, xi), xi) - xx) / xx);
    const double bx = dot(b, xi);
    const double exact = (xx + bx * bx) / (1.0 + dot(b, b));
    quad_inv.defect = std::max(quad_inv.defect, std::abs(dot(apply_A_inv(b, xi), xi) - exact) / exact);
    for (const auto& row : assemble_A_inv(b))
      for (double v : row) entries.defect = std::max(entries.defect, std::abs(v) - 1.0);
  }
  for (const auto& c : {roundtrip, quad, quad_inv, entries}) rep.items.push_back(c);

  const EmpiricalConstants ec = empirical_constants(g);
  rep.poincare_u = ec.poincare_u;
  rep.poincare_u_iterated = poincare_by_inverse_iteration(g);
  rep.items.push_back({"Poincare constant: inverse iteration vs eigenvalue",
                       std::abs(rep.poincare_u_iterated - rep.poincare_u) / rep.poincare_u, 1e-6});
  return rep;
}

}  // namespace hallmhd
