#include "hallmhd/linsys.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hallmhd/hallmat.hpp"
#include "hallmhd/norms.hpp"
#include "hallmhd/ops.hpp"

namespace hallmhd {

namespace {

CellVectors cross_at_centers(const CellVectors& a, const CellVectors& b) {
  CellVectors out(a.grid());
  const std::size_t m = out.c[0].size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3 c = cross(a.at(i), b.at(i));
    for (int d = 0; d < 3; ++d) out.c[d].flat()[i] = c[d];
  }
  return out;
}

bool all_zero(std::span<const double> v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

// Component views of a flat face-field buffer.
std::array<std::span<double>, 3> split(const Grid& g, std::span<double> v) {
  std::array<std::span<double>, 3> out;
  std::size_t off = 0;
  for (int d = 0; d < 3; ++d) {
    const std::size_t s = face_layout(g.n(), d).size();
    out[d] = v.subspan(off, s);
    off += s;
  }
  return out;
}

std::array<std::span<const double>, 3> split(const Grid& g, std::span<const double> v) {
  std::array<std::span<const double>, 3> out;
  std::size_t off = 0;
  for (int d = 0; d < 3; ++d) {
    const std::size_t s = face_layout(g.n(), d).size();
    out[d] = v.subspan(off, s);
    off += s;
  }
  return out;
}

FaceField wrap_face(const Grid& g, std::span<const double> v) {
  FaceField f(g);
  std::copy(v.begin(), v.end(), f.flat().begin());
  return f;
}

ScalarField wrap_scalar(const Grid& g, std::span<const double> v) {
  ScalarField s(g);
  std::copy(v.begin(), v.end(), s.flat().begin());
  return s;
}

FaceField interior(FaceField f) {
  enforce_noslip(f);
  return f;
}

}  // namespace

FaceField lorentz_force(const FaceField& J, const EdgeField& H) {
  require_same_grid(J.grid(), H.grid());
  return from_centers(cross_at_centers(to_centers(J), to_centers(H)));
}

FaceField induction_term(const FaceField& u, const EdgeField& H) {
  require_same_grid(u.grid(), H.grid());
  return from_centers(cross_at_centers(to_centers(u), to_centers(H)));
}

MomentumOperator::MomentumOperator(const FaceField& w) : grid_(w.grid()) {
  convective_ = !all_zero(w.flat());
  if (!convective_) return;
  const int n = grid_.n();
  const double c = 1.0 / (2.0 * grid_.h());
  for (int d = 0; d < 3; ++d) {
    const Layout l = face_layout(n, d);
    flux_[d].assign(6 * l.size(), 0.0);
    const auto wd = w.comp(d);
    const Layout& ld = w.layout(d);
    std::size_t idx = 0;
    for (int k = 0; k < l.dims[2]; ++k)
      for (int j = 0; j < l.dims[1]; ++j)
        for (int i = 0; i < l.dims[0]; ++i, ++idx) {
          const std::array<int, 3> p{i, j, k};
          if (p[d] == 0 || p[d] == n) continue;
          double* fl = &flux_[d][6 * idx];
          for (int t = 0; t < 3; ++t) {
            if (t == d) {
              // Control-volume faces at the cell centers on either side.
              const std::size_t q = ld(p);
              const double hi = 0.5 * (wd[q] + wd[q + ld.stride(d)]);
              const double lo = 0.5 * (wd[q] + wd[q - ld.stride(d)]);
              fl[2 * t] = -c * lo;
              fl[2 * t + 1] = c * hi;
            } else {
              const Layout& lt = w.layout(t);
              const auto wt = w.comp(t);
              auto at = [&](int shift_t) {
                std::array<int, 3> q = p;
                q[t] += shift_t;
                const std::size_t a = lt(q);
                q[d] -= 1;
                const std::size_t b = lt(q);
                return 0.5 * (wt[a] + wt[b]);
              };
              fl[2 * t] = -c * at(0);
              fl[2 * t + 1] = c * at(1);
            }
          }
        }
  }
}

FaceField MomentumOperator::convection(const FaceField& u) const {
  require_same_grid(grid_, u.grid());
  FaceField out(grid_);
  if (!convective_) return out;
  const int n = grid_.n();
  for (int d = 0; d < 3; ++d) {
    const Layout& l = u.layout(d);
    const auto ud = u.comp(d);
    auto o = out.comp(d);
    std::size_t idx = 0;
    for (int k = 0; k < l.dims[2]; ++k)
      for (int j = 0; j < l.dims[1]; ++j)
        for (int i = 0; i < l.dims[0]; ++i, ++idx) {
          const std::array<int, 3> p{i, j, k};
          if (p[d] == 0 || p[d] == n) continue;
          const double* fl = &flux_[d][6 * idx];
          double s = 0.0;
          for (int t = 0; t < 3; ++t) {
            const std::ptrdiff_t st = l.stride(t);
            // Neighbours on the wall (normal direction) or beyond it carry u = 0.
            const int lo_limit = t == d ? 1 : 0;
            if (p[t] - 1 >= lo_limit) s += fl[2 * t] * ud[idx - st];
            if (p[t] + 1 <= n - 1) s += fl[2 * t + 1] * ud[idx + st];
          }
          o[idx] = s;
        }
  }
  return out;
}

FaceField MomentumOperator::apply(const FaceField& u) const {
  require_same_grid(grid_, u.grid());
  FaceField out = convection(u);
  std::vector<double> tmp;
  for (int d = 0; d < 3; ++d) {
    tmp.resize(u.comp(d).size());
    apply_laplacian(grid_, face_pattern(d), u.comp(d), tmp);
    auto o = out.comp(d);
    for (std::size_t i = 0; i < tmp.size(); ++i) o[i] += tmp[i];
  }
  return out;
}

void MomentumOperator::apply_flat(std::span<const double> x, std::span<double> y) const {
  const FaceField out = apply(wrap_face(grid_, x));
  std::copy(out.flat().begin(), out.flat().end(), y.begin());
}

void MomentumOperator::precondition(std::span<const double> r, std::span<double> z) const {
  const auto rs = split(grid_, r);
  const auto zs = split(grid_, z);
  for (int d = 0; d < 3; ++d) fast_poisson_solve(grid_, face_pattern(d), rs[d], zs[d]);
}

FaceField MomentumOperator::solve(const FaceField& rhs, const KrylovSpec& spec, FaceField guess) const {
  require_same_grid(grid_, rhs.grid());
  const FaceField b = interior(rhs);
  FaceField x = interior(std::move(guess));
  if (!convective_) {
    precondition(b.flat(), x.flat());
    return x;
  }
  if (all_zero(b.flat())) return FaceField(grid_);
  const LinearOp op = [this](std::span<const double> in, std::span<double> out) { apply_flat(in, out); };
  const LinearOp pc = [this](std::span<const double> in, std::span<double> out) { precondition(in, out); };
  krylov_solve(spec.with_method(KrylovMethod::BiCGStab), op, b.flat(), x.flat(), pc, {}, -1.0,
               "momentum operator solve");
  return x;
}

MomentumSolution solve_momentum_force(const MomentumOperator& L, const FaceField& F,
                                      const KrylovSpec& spec) {
  spec.validate();
  const Grid& g = L.grid();
  MomentumSolution out{FaceField(g), ScalarField(g), 0, 0.0, 0.0};
  const double scale = norm(interior(F), NormKind::L2);
  if (scale == 0.0) return out;
  // The problem is linear: solve for unit data so that tiny right-hand sides
  // (late Gauss-Seidel corrections) do not underflow in the inner products.
  const FaceField Fm = interior((1.0 / scale) * F);
  const double fnorm = norm(Fm, NormKind::L2);

  KrylovSpec inner = spec;
  inner.rtol = std::max(1e-2 * spec.rtol, 1e-14);
  const bool symmetric = !L.has_convection();

  constexpr int max_rounds = 8;
  for (int round = 0; round <= max_rounds; ++round) {
    FaceField ru = Fm - L.apply(out.u) - grad(out.p);
    ru = interior(std::move(ru));
    const double unorm = norm(out.u, NormKind::H1);
    out.residual = norm(ru, NormKind::L2) / fnorm;
    out.div_residual = unorm > 0.0 ? norm(div(out.u), NormKind::L2) / unorm : 0.0;
    if (round > 0 && out.residual <= spec.rtol && out.div_residual <= spec.rtol) break;
    if (round == max_rounds) {
      std::ostringstream os;
      os.precision(17);
      os << "momentum solve: refinement stalled (residual " << out.residual << ", div residual "
         << out.div_residual << ")";
      throw KrylovError(os.str(), KrylovResult{});
    }

    const FaceField du0 = L.solve(ru, inner);
    FaceField trial = out.u;
    trial += du0;
    const ScalarField bp = -1.0 * div(trial);

    ScalarField dp(g);
    if (!all_zero(bp.flat())) {
      const LinearOp schur = [&](std::span<const double> x, std::span<double> y) {
        const FaceField v = L.solve(grad(wrap_scalar(g, x)), inner);
        const ScalarField d = div(v);
        const auto dv = d.flat();
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = -dv[i];
      };
      const Projector project = [](std::span<double> v) { remove_mean(v); };
      KrylovSpec outer = spec.with_method(symmetric ? KrylovMethod::ConjugateGradient
                                                    : KrylovMethod::BiCGStab);
      outer.rtol = std::min(0.5, 0.1 * spec.rtol * norm(trial, NormKind::H1) /
                                     std::max(norm(bp, NormKind::L2), 1e-300));
      const auto res = krylov_solve(outer, schur, bp.flat(), dp.flat(), {}, project, -1.0,
                                    "pressure Schur complement");
      out.schur_iterations += res.iterations;
    }
    const FaceField corr = L.solve(grad(dp), inner);
    out.u += du0;
    out.u -= corr;
    out.u = interior(std::move(out.u));
    out.p += dp;
    remove_mean(out.p);
  }
  out.u = scale * std::move(out.u);
  out.p = scale * std::move(out.p);
  return out;
}

MomentumSolution solve_momentum(const FaceField& w, const EdgeField& H, const EdgeField& B,
                                const FaceField& f, const KrylovSpec& spec) {
  require_same_grid(w.grid(), f.grid());
  const MomentumOperator L(w);
  FaceField F = f;
  F += lorentz_force(curl_e2f(B), H);
  return solve_momentum_force(L, F, spec);
}

MaxwellSolution solve_maxwell_type(const EdgeField& H, const FaceField& G, const KrylovSpec& spec,
                                   double mu) {
  KrylovSpec ns = spec;
  // reconstruct_B accepts ||div J|| up to 1e-8 ||G|| / h.
  ns.rtol = std::min(spec.rtol, 1e-9);
  // Linear in G: solve for unit data, then scale back (avoids underflow).
  const double gnorm = norm(G, NormKind::L2);
  const double s = gnorm > 0.0 ? gnorm : 1.0;
  NeumannSolution sol = solve_neumann_full(H, (1.0 / s) * G, ns, mu);
  const double scale = std::max(norm(sol.flux, NormKind::L2), gnorm / s);
  EdgeField B = reconstruct_B(sol.flux, spec, scale);
  return {s * std::move(B), s * std::move(sol.phi), s * std::move(sol.flux), std::move(sol.stats)};
}

FaceField apply_hall_operator(const EdgeField& H, const FaceField& J, const KrylovSpec& spec,
                              double mu) {
  require_same_grid(H.grid(), J.grid());
  const Grid& g = J.grid();
  const FaceField b = interior(J);
  if (all_zero(b.flat())) return FaceField(g);
  const HallCoefficients coef(H, mu);
  const FaceVectors hf = to_faces(H);

  // Pointwise A(mu H) applied to the collocated face vector: the exact inverse
  // of the map for constant fields.
  auto pointwise_A = [&](const FaceField& r) {
    const FaceVectors rv = to_faces(r);
    FaceField out(g);
    for (int d = 0; d < 3; ++d) {
      auto o = out.comp(d);
      for (std::size_t i = 0; i < o.size(); ++i) {
        const Vec3& h = hf.vec[d][i];
        o[i] = apply_A({mu * h[0], mu * h[1], mu * h[2]}, rv.vec[d][i])[d];
      }
    }
    return interior(std::move(out));
  };
  const LinearOp op = [&](std::span<const double> x, std::span<double> y) {
    FaceField v = wrap_face(g, x);
    extrapolate_boundary_normal(v);
    const FaceField out = interior(apply_A_inv_field(coef, v));
    std::copy(out.flat().begin(), out.flat().end(), y.begin());
  };
  const LinearOp pc = [&](std::span<const double> r, std::span<double> z) {
    const FaceField out = pointwise_A(wrap_face(g, r));
    std::copy(out.flat().begin(), out.flat().end(), z.begin());
  };
  FaceField Y = pointwise_A(b);
  krylov_solve(spec.with_method(KrylovMethod::BiCGStab), op, b.flat(), Y.flat(), pc, {}, -1.0,
               "Hall operator solve");
  Y = interior(std::move(Y));
  extrapolate_boundary_normal(Y);
  return Y;
}

void LinearizedProblem::validate() const {
  require_same_grid(w.grid(), H.grid());
  require_same_grid(w.grid(), f.grid());
  require_same_grid(w.grid(), g.grid());
  if (!is_noslip(w)) throw std::invalid_argument("frozen velocity w is not no-slip");
  const double wn = norm(w, NormKind::H1);
  if (norm(div(w), NormKind::L2) > 1e-8 * wn) {
    throw std::invalid_argument("frozen velocity w is not discretely divergence-free");
  }
  if (!is_tangential_zero(H)) throw std::invalid_argument("frozen field H is not tangential-zero");
}

double coupled_tolerance(const SolverConfig& c) {
  return std::max(0.01 * c.outer_tol, 10.0 * c.inner_rtol);
}

CoupledResult solve_coupled(const LinearizedProblem& prob, const EdgeField* B_start) {
  prob.validate();
  const SolverConfig& cfg = prob.config;
  const KrylovSpec spec = cfg.krylov();
  const double tol = coupled_tolerance(cfg);
  const Grid& g = prob.w.grid();
  const MomentumOperator L(prob.w);
  const bool decoupled = all_zero(prob.H.flat());

  CoupledResult out{HallState(g), 0, {}};
  // The linear problem is uniquely solvable, so zero data gives the zero state
  // whatever the warm start.
  if (all_zero(prob.f.flat()) && all_zero(prob.g.flat())) {
    out.sweeps = 1;
    out.updates.push_back(0.0);
    return out;
  }
  if (B_start) out.state.B = *B_start;
  constexpr int max_sweeps = 100;
  int slow = 0;
  // Updates are measured against the largest iterate seen so far: with a warm
  // start far from a small solution, the iterate itself may shrink towards it.
  double ref = 0.0;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    FaceField F = prob.f;
    if (!decoupled) F += lorentz_force(curl_e2f(out.state.B), prob.H);
    MomentumSolution mom = solve_momentum_force(L, F, spec);
    FaceField G = prob.g;
    if (!decoupled) G += induction_term(mom.u, prob.H);
    MaxwellSolution mx = solve_maxwell_type(prob.H, G, spec, cfg.mu);

    const double du = norm(mom.u - out.state.u, NormKind::H1) + norm(mx.B - out.state.B, NormKind::H1);
    ref = std::max(ref, norm(mom.u, NormKind::H1) + norm(mx.B, NormKind::H1));
    const double size = ref;
    const double rel = size > 0.0 ? du / size : (du > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    out.state.u = std::move(mom.u);
    out.state.p = std::move(mom.p);
    out.state.B = std::move(mx.B);
    out.state.phi = std::move(mx.phi);
    out.sweeps = sweep;
    out.updates.push_back(rel);

    if (rel <= tol || (decoupled && !B_start)) return out;
    if (sweep > 1 && rel >= 0.99 * out.updates[sweep - 2]) {
      ++slow;
    } else {
      slow = 0;
    }
    if (slow >= 10) {
      throw StagnationError("coupled solve stagnated: relative update decreased by less than 1% "
                            "for 10 successive sweeps",
                            out.updates);
    }
  }
  std::ostringstream os;
  os.precision(17);
  os << "coupled solve did not reach tolerance " << tol << " in " << max_sweeps
     << " sweeps (last relative update " << out.updates.back() << ")";
  throw StagnationError(os.str(), out.updates);
}

}  // namespace hallmhd
