#include "hallmhd/elliptic.hpp"

#include <cmath>
#include <sstream>

#include "hallmhd/norms.hpp"
#include "hallmhd/ops.hpp"

namespace hallmhd {

double weighted_l2(const Grid& g, std::span<const double> v) {
  const double h = g.h();
  return norm2(v) * std::sqrt(h * h * h);
}

namespace {

void zero_boundary_normal(FaceField& f) { enforce_noslip(f); }

ScalarField wrap_scalar(const Grid& g, std::span<const double> v) {
  ScalarField s(g);
  std::copy(v.begin(), v.end(), s.flat().begin());
  return s;
}

}  // namespace

FaceField neumann_flux(const HallCoefficients& coef, const ScalarField& phi, const FaceField& G) {
  FaceField y = grad(phi);
  y += G;
  extrapolate_boundary_normal(y);
  FaceField flux = apply_A_inv_field(coef, y);
  zero_boundary_normal(flux);
  return flux;
}

NeumannSolution solve_neumann_full(const EdgeField& H, const FaceField& G, const KrylovSpec& spec,
                                   double mu) {
  require_same_grid(H.grid(), G.grid());
  spec.validate();
  const Grid& g = G.grid();
  const HallCoefficients coef(H, mu);

  FaceField ge = G;
  extrapolate_boundary_normal(ge);
  FaceField mg = apply_A_inv_field(coef, ge);
  zero_boundary_normal(mg);
  const ScalarField rhs = div(mg);

  const LinearOp op = [&](std::span<const double> x, std::span<double> y) {
    FaceField gx = grad(wrap_scalar(g, x));
    extrapolate_boundary_normal(gx);
    FaceField f = apply_A_inv_field(coef, gx);
    zero_boundary_normal(f);
    const ScalarField d = div(f);
    const auto dv = d.flat();
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = -dv[i];
  };
  const LinearOp precond = [&](std::span<const double> r, std::span<double> z) {
    fast_poisson_solve(g, BcPattern::PureNeumann, r, z);
  };
  const Projector project = [](std::span<double> v) { remove_mean(v); };

  // ||div flux||_L2 <= rtol ||G||_L2 / h, converted to the Euclidean residual.
  const double h = g.h();
  const double reference = norm(G, NormKind::L2) / h / std::sqrt(h * h * h);

  NeumannSolution out{ScalarField(g), FaceField(g), KrylovResult{}};
  out.stats = krylov_solve(spec.with_method(KrylovMethod::BiCGStab), op, rhs.flat(),
                           out.phi.flat(), precond, project, reference, "Neumann solve");
  remove_mean(out.phi);
  out.flux = neumann_flux(coef, out.phi, G);
  return out;
}

ScalarField solve_neumann(const EdgeField& H, const FaceField& G, const KrylovSpec& spec, double mu) {
  return solve_neumann_full(H, G, spec, mu).phi;
}

std::vector<double> solve_poisson_mixed(const Grid& g, std::span<const double> rhs,
                                        BcPattern pattern, const KrylovSpec& spec) {
  spec.validate();
  const Layout l = pattern_layout(g.n(), pattern);
  if (rhs.size() != l.size()) throw std::invalid_argument("solve_poisson_mixed: size mismatch");
  std::vector<double> b(rhs.begin(), rhs.end());
  // Wall entries of a D1 axis are not unknowns.
  {
    std::size_t idx = 0;
    for (int k = 0; k < l.dims[2]; ++k)
      for (int j = 0; j < l.dims[1]; ++j)
        for (int i = 0; i < l.dims[0]; ++i, ++idx)
          if (!is_unknown(g.n(), pattern, {i, j, k})) b[idx] = 0.0;
  }
  Projector project;
  if (pattern == BcPattern::PureNeumann) {
    double sum = 0.0, abs_sum = 0.0;
    for (double v : b) {
      sum += v;
      abs_sum += std::abs(v);
    }
    if (std::abs(sum) > 1e-10 * abs_sum) {
      std::ostringstream os;
      os.precision(17);
      os << "pure-Neumann right-hand side has nonzero mean (sum " << sum << ")";
      throw CompatibilityError(os.str());
    }
    remove_mean(b);
    project = [](std::span<double> v) { remove_mean(v); };
  }
  const LinearOp op = [&](std::span<const double> x, std::span<double> y) {
    apply_laplacian(g, pattern, x, y);
  };
  const LinearOp precond = [&](std::span<const double> r, std::span<double> z) {
    fast_poisson_solve(g, pattern, r, z);
  };
  std::vector<double> x(b.size(), 0.0);
  krylov_solve(spec.with_method(KrylovMethod::ConjugateGradient), op, b, x, precond, project, -1.0,
               "Poisson solve");
  return x;
}

EdgeField reconstruct_B(const FaceField& J, const KrylovSpec& spec, double scale) {
  const Grid& g = J.grid();
  const double h = g.h();
  const double ref = std::max(norm(J, NormKind::L2), scale);
  const double div_norm = norm(div(J), NormKind::L2);
  if (div_norm > 1e-8 * ref / h) {
    std::ostringstream os;
    os.precision(17);
    os << "reconstruct_B: source is not divergence-free (||div J|| = " << div_norm
       << ", allowed " << 1e-8 * ref / h << ")";
    throw CompatibilityError(os.str());
  }
  FaceField Jc = J;
  enforce_noslip(Jc);
  const double bdry = norm(J - Jc, NormKind::Linf);
  if (bdry > 1e-8 * std::max(norm(J, NormKind::Linf), scale)) {
    std::ostringstream os;
    os.precision(17);
    os << "reconstruct_B: source has nonzero boundary-normal values (max " << bdry << ")";
    throw CompatibilityError(os.str());
  }
  const EdgeField rhs = curl_f2e(Jc);
  EdgeField B(g);
  for (int d = 0; d < 3; ++d) {
    const auto x = solve_poisson_mixed(g, rhs.comp(d), edge_pattern(d), spec);
    std::copy(x.begin(), x.end(), B.comp(d).begin());
  }
  enforce_tangential_zero(B);
  return B;
}

}  // namespace hallmhd
