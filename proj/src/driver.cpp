#include "hallmhd/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "hallmhd/elliptic.hpp"
#include "hallmhd/linsys.hpp"
#include "hallmhd/norms.hpp"
#include "hallmhd/ops.hpp"
#include "hallmhd/sample.hpp"
#include "hallmhd/spectral.hpp"

namespace hallmhd {

namespace {

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

double ratio_or_zero(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

FaceField interior(FaceField f) {
  enforce_noslip(f);
  return f;
}

double size_H1(const HallState& s) { return norm(s.u, NormKind::H1) + norm(s.B, NormKind::H1); }

// Smooth random tangential-zero edge field: low sine modes with uniform
// random coefficients in every component.
EdgeField smooth_random_edges(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::array<std::array<double, 8>, 3> c{};
  for (auto& comp : c)
    for (double& v : comp) v = dist(rng);
  constexpr double pi = std::numbers::pi;
  EdgeField e = sample_edges(g, [&](double x, double y, double z) {
    Vec3 out{0, 0, 0};
    for (int m = 0; m < 8; ++m) {
      const int kx = 1 + (m & 1), ky = 1 + ((m >> 1) & 1), kz = 1 + ((m >> 2) & 1);
      const double s = std::sin(kx * pi * x) * std::sin(ky * pi * y) * std::sin(kz * pi * z);
      for (int d = 0; d < 3; ++d) out[d] += c[d][m] * s;
    }
    return out;
  });
  enforce_tangential_zero(e);
  return e;
}

}  // namespace

HallState apply_T(const HallState& X, const FaceField& f, const FaceField& g, const SolverConfig& config,
                  int* sweeps) {
  LinearizedProblem prob{X.u, X.B, f, g, config};
  const EdgeField* start = all_zero(X.B.flat()) ? nullptr : &X.B;
  CoupledResult r = solve_coupled(prob, start);
  if (sweeps) *sweeps = r.sweeps;
  return std::move(r.state);
}

void write_iteration_csv(std::ostream& os, const IterationReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "iter,norm_u_H1,norm_B_H1,norm_B_W1q,du_H1,dB_H1,ratio,in_D\n";
  for (const auto& k : r.records) {
    out << k.iter << "," << k.norm_u_H1 << "," << k.norm_B_H1 << "," << k.norm_B_W1q << "," << k.du_H1
        << "," << k.dB_H1 << "," << k.ratio << "," << (k.in_D ? 1 : 0) << "\n";
  }
  os << out.str();
}

double NonlinearResidual::max() const noexcept { return std::max({momentum, maxwell, divergence}); }

NonlinearResidual nonlinear_residual(const HallState& s, const FaceField& f, const FaceField& g,
                                     const SolverConfig& config) {
  const Grid& grid = s.grid();
  const KrylovSpec spec = config.krylov();
  NonlinearResidual out;

  const FaceField J = curl_e2f(s.B);
  const FaceField lorentz = interior(lorentz_force(J, s.B));
  const MomentumOperator L(s.u);
  FaceField r = interior(f) + lorentz - L.apply(s.u) - grad(s.p);
  r = interior(std::move(r));
  out.momentum = ratio_or_zero(norm(r, NormKind::L2),
                               norm(interior(f), NormKind::L2) + norm(lorentz, NormKind::L2));

  // A(mu B) curl B - G must be a discrete gradient on the interior faces;
  // the residual is what remains after removing the gradient part.
  const FaceField Y = interior(apply_hall_operator(s.B, J, spec, config.mu));
  const FaceField G = interior(g + induction_term(s.u, s.B));
  const FaceField D = Y - G;
  ScalarField rhs = div(D);
  rhs *= -1.0;
  remove_mean(rhs);
  ScalarField phi(grid);
  if (!all_zero(rhs.flat())) {
    const auto x = solve_poisson_mixed(grid, rhs.flat(), BcPattern::PureNeumann, spec);
    std::copy(x.begin(), x.end(), phi.flat().begin());
  }
  const FaceField curl_part = D - grad(phi);
  out.maxwell = ratio_or_zero(norm(curl_part, NormKind::L2),
                              std::max(norm(G, NormKind::L2), norm(Y, NormKind::L2)));

  const double du = ratio_or_zero(norm(div(s.u), NormKind::L2), norm(s.u, NormKind::H1));
  const auto eb = edge_div(s.B);
  const double dB = ratio_or_zero(node_l2(grid, eb), norm(s.B, NormKind::H1));
  out.divergence = std::max(du, dB);
  return out;
}

SolveResult solve_hall_mhd(const FaceField& f, const FaceField& g, const SolverConfig& config,
                           const HallState* initial) {
  config.validate(true);
  const Grid grid(config.n);
  require_same_grid(grid, f.grid());
  require_same_grid(grid, g.grid());
  HallState X = initial ? *initial : HallState(grid);
  require_same_grid(grid, X.grid());

  SolveResult out{X, {}};
  IterationReport& rep = out.report;
  double best = std::numeric_limits<double>::infinity();
  double prev_update = 0.0;
  double first_size = -1.0;
  for (int k = 1; k <= config.max_outer; ++k) {
    IterationRecord rec;
    rec.iter = k;
    HallState Xn(grid);
    try {
      Xn = apply_T(X, f, g, config, &rec.sweeps);
    } catch (const StagnationError& e) {
      rep.stop_reason = e.what();
      break;
    } catch (const KrylovError& e) {
      rep.stop_reason = e.what();
      break;
    }
    rec.norm_u_H1 = norm(Xn.u, NormKind::H1);
    rec.norm_B_H1 = norm(Xn.B, NormKind::H1);
    rec.norm_B_W1q = norm(Xn.B, NormKind::W1q, config.q1());
    rec.du_H1 = norm(Xn.u - X.u, NormKind::H1);
    rec.dB_H1 = norm(Xn.B - X.B, NormKind::H1);
    const double update = rec.du_H1 + rec.dB_H1;
    rec.ratio = k > 1 ? ratio_or_zero(update, prev_update) : 0.0;
    rec.in_D = !config.kappa || rec.norm_B_W1q <= *config.kappa;
    rep.d_set_maintained = rep.d_set_maintained && rec.in_D;
    rep.records.push_back(rec);
    rep.iterations = k;

    const double scale = std::max(1.0, size_H1(X));
    const double new_size = rec.norm_u_H1 + rec.norm_B_H1;
    if (!std::isfinite(update) || !std::isfinite(new_size)) {
      rep.stop_reason = "non-finite iterate";
      rep.non_finite = true;
      break;
    }
    if (first_size < 0.0) first_size = new_size;
    X = std::move(Xn);
    prev_update = update;
    rep.last_relative_update = update / scale;
    if (update < best) {
      best = update;
      out.state = X;
    }
    if (update <= config.outer_tol * scale) {
      rep.converged = true;
      out.state = X;
      rep.stop_reason = "update below outer_tol";
      break;
    }
    if (new_size > 1e8 * std::max(1.0, first_size)) {
      rep.stop_reason = "iterates diverging";
      break;
    }
  }
  if (!rep.converged && rep.stop_reason.empty()) {
    rep.stop_reason = "max_outer reached";
  }
  try {
    rep.nonlinear_residual = nonlinear_residual(out.state, f, g, config).max();
  } catch (const KrylovError&) {
    rep.nonlinear_residual = std::numeric_limits<double>::infinity();
  }
  return out;
}

HallState random_perturbation(const Grid& g, std::uint64_t seed, double size, const SolverConfig& config) {
  std::mt19937_64 rng(seed);
  HallState d(g);
  d.u = curl_e2f(smooth_random_edges(g, rng));
  enforce_noslip(d.u);
  const FaceField J = curl_e2f(smooth_random_edges(g, rng));
  d.B = reconstruct_B(J, config.krylov(), norm(J, NormKind::L2));
  const double s = size_H1(d);
  if (s > 0.0) {
    d.u *= size / s;
    d.B *= size / s;
  }
  return d;
}

ProbeResult contraction_probe(const HallState& X, const FaceField& f, const FaceField& g,
                              const SolverConfig& config, int trials) {
  if (trials < 1) throw std::invalid_argument("contraction_probe needs >= 1 trial");
  const Grid& grid = X.grid();
  ProbeResult out;
  out.delta_size = 1e-3 * std::max(1.0, size_H1(X));
  out.trials.assign(static_cast<std::size_t>(trials), 0.0);
  const HallState TX = apply_T(X, f, g, config);

  std::vector<HallState> deltas;
  for (int t = 0; t < trials; ++t) {
    deltas.push_back(random_perturbation(grid, config.seed + 1000003ULL * (t + 1), out.delta_size, config));
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(trials));
  auto work = [&]() {
    for (int t = next++; t < trials; t = next++) {
      try {
        HallState Xp = X;
        Xp.u += deltas[t].u;
        Xp.B += deltas[t].B;
        const HallState T1 = apply_T(Xp, f, g, config);
        const double diff = norm(T1.u - TX.u, NormKind::H1) + norm(T1.B - TX.B, NormKind::H1);
        out.trials[t] = diff / out.delta_size;
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(config.workers, 1, trials);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  out.rho = *std::max_element(out.trials.begin(), out.trials.end());
  return out;
}

DecompositionReport decomposition_check(const HallState& s, const FaceField& f, const FaceField& g,
                                        const SolverConfig& config) {
  (void)f;
  DecompositionReport out;
  const FaceField J = interior(curl_e2f(s.B));
  const FaceField G = g + induction_term(s.u, s.B);
  KrylovSpec spec = config.krylov();
  spec.rtol = std::min(spec.rtol, 1e-9);
  const NeumannSolution ns = solve_neumann_full(s.B, G, spec, config.mu);
  out.residual = ratio_or_zero(norm(J - interior(ns.flux), NormKind::L2), norm(J, NormKind::L2));
  ScalarField a = ns.phi;
  ScalarField b = s.phi;
  remove_mean(a);
  remove_mean(b);
  out.phi_agreement = ratio_or_zero(norm(a - b, NormKind::L2), norm(a, NormKind::L2));
  return out;
}

EmpiricalConstants empirical_constants(const Grid& g) {
  double lu = std::numeric_limits<double>::infinity();
  double lb = lu;
  for (int d = 0; d < 3; ++d) {
    lu = std::min(lu, smallest_eigenvalue(g, face_pattern(d)));
    lb = std::min(lb, smallest_eigenvalue(g, edge_pattern(d)));
  }
  EmpiricalConstants c;
  c.poincare_u = 1.0 / std::sqrt(lu);
  c.poincare_B = 1.0 / std::sqrt(lb);
  c.C_hat = (std::sqrt(1.0 + c.poincare_u * c.poincare_u) + std::sqrt(1.0 + c.poincare_B * c.poincare_B)) *
            std::max(1.0, c.poincare_u);
  return c;
}

double poincare_by_inverse_iteration(const Grid& g, int iterations) {
  const BcPattern pat = BcPattern::FaceX;
  const std::size_t m = pattern_layout(g.n(), pat).size();
  std::vector<double> x(m), y(m);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (double& v : x) v = dist(rng);
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    fast_poisson_solve(g, pat, x, y);
    const double ny = norm2(y);
    for (std::size_t i = 0; i < m; ++i) x[i] = y[i] / ny;
    apply_laplacian(g, pat, x, y);
    lambda = dot(x, y) / dot(x, x);
  }
  return 1.0 / std::sqrt(lambda);
}

Diagnostics smallness_report(const FaceField& f, const FaceField& g, const SolverConfig& config,
                             const SolveResult* solved) {
  Diagnostics d;
  d.q = config.q;
  d.norm_f_L2 = norm(interior(f), NormKind::L2);
  d.norm_g_Lq = norm(g, NormKind::Lq, config.q);
  d.constants = empirical_constants(f.grid());
  if (solved) {
    if (config.kappa) d.d_set_maintained = solved->report.d_set_maintained;
    const double data = d.norm_f_L2 + d.norm_g_Lq;
    const double sol = size_H1(solved->state);
    if (data > 0.0) d.energy_ratio = sol / (d.constants.C_hat * data);
  } else if (config.kappa) {
    d.d_set_maintained = true;
  }
  return d;
}

}  // namespace hallmhd
