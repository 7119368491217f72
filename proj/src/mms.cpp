#include "hallmhd/mms.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hallmhd/driver.hpp"
#include "hallmhd/elliptic.hpp"
#include "hallmhd/linsys.hpp"
#include "hallmhd/norms.hpp"
#include "hallmhd/sample.hpp"

namespace hallmhd {

namespace {

constexpr double pi = std::numbers::pi;

int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

// k-th derivative of sin^2(pi t).
double sin2_derivative(double t, int k) {
  switch (k) {
    case 0: {
      const double s = std::sin(pi * t);
      return s * s;
    }
    case 1:
      return pi * std::sin(2 * pi * t);
    case 2:
      return 2 * pi * pi * std::cos(2 * pi * t);
    case 3:
      return -4 * pi * pi * pi * std::sin(2 * pi * t);
  }
  throw std::logic_error("sin2_derivative: order > 3");
}

// Derivative of order k of sin(w t) (cosine = false) or cos(w t).
double trig_derivative(bool cosine, double w, double t, int k) {
  // d/dt sin = w cos, d/dt cos = -w sin
  double sign = 1.0;
  bool c = cosine;
  for (int i = 0; i < k; ++i) {
    if (c) sign = -sign;
    c = !c;
  }
  return sign * std::pow(w, k) * (c ? std::cos(w * t) : std::sin(w * t));
}

}  // namespace

ManufacturedSolution::ManufacturedSolution(double amplitude, std::array<int, 3> modes,
                                           std::array<double, 3> coefficients,
                                           std::array<double, 3> potential, ProblemKind problem)
    : a_(amplitude), m_(modes), coef_(coefficients), pot_(potential), problem_(problem) {
  for (int m : m_)
    if (m < 1) throw ManufacturedError("manufactured modes must be positive integers");
  const double c = m_[0] * coef_[0] + m_[1] * coef_[1] + m_[2] * coef_[2];
  const double s = std::abs(m_[0] * coef_[0]) + std::abs(m_[1] * coef_[1]) + std::abs(m_[2] * coef_[2]);
  if (std::abs(c) > 1e-12 * std::max(s, 1.0)) {
    throw ManufacturedError("manufactured field coefficients violate m1*alpha + m2*beta + m3*gamma = 0");
  }
  if (!std::isfinite(a_)) throw ManufacturedError("manufactured amplitude must be finite");
}

ManufacturedSolution ManufacturedSolution::from_spec(const ForcingSpec& spec) {
  const double a = spec.family == ForcingFamily::Zero ? 0.0 : spec.amplitude;
  return ManufacturedSolution(a, spec.modes, spec.coefficients, spec.potential, spec.problem);
}

double ManufacturedSolution::ds(const Vec3& x, int ox, int oy, int oz) const {
  return sin2_derivative(x[0], ox) * sin2_derivative(x[1], oy) * sin2_derivative(x[2], oz);
}

Vec3 ManufacturedSolution::psi(const Vec3& x) const {
  if (!has_flow()) return {0, 0, 0};
  const double s = a_ * ds(x, 0, 0, 0);
  return {s * pot_[0], s * pot_[1], s * pot_[2]};
}

Vec3 ManufacturedSolution::u(const Vec3& x) const {
  Vec3 out{0, 0, 0};
  if (!has_flow()) return out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const int e = levi_civita(i, j, k);
        if (e == 0) continue;
        std::array<int, 3> o{0, 0, 0};
        o[j] = 1;
        out[i] += e * pot_[k] * ds(x, o[0], o[1], o[2]);
      }
  for (double& v : out) v *= a_;
  return out;
}

Mat3 ManufacturedSolution::grad_u(const Vec3& x) const {
  Mat3 out{};
  if (!has_flow()) return out;
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 3; ++l) {
      double v = 0.0;
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          const int e = levi_civita(i, j, k);
          if (e == 0) continue;
          std::array<int, 3> o{0, 0, 0};
          ++o[j];
          ++o[l];
          v += e * pot_[k] * ds(x, o[0], o[1], o[2]);
        }
      out[i][l] = a_ * v;
    }
  return out;
}

Vec3 ManufacturedSolution::laplacian_u(const Vec3& x) const {
  Vec3 out{0, 0, 0};
  if (!has_flow()) return out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const int e = levi_civita(i, j, k);
        if (e == 0) continue;
        for (int l = 0; l < 3; ++l) {
          std::array<int, 3> o{0, 0, 0};
          ++o[j];
          o[l] += 2;
          out[i] += e * pot_[k] * ds(x, o[0], o[1], o[2]);
        }
      }
  for (double& v : out) v *= a_;
  return out;
}

double ManufacturedSolution::p(const Vec3& x) const {
  if (!has_flow()) return 0.0;
  return a_ * std::cos(pi * x[0]) * std::cos(pi * x[1]) * std::cos(pi * x[2]);
}

Vec3 ManufacturedSolution::grad_p(const Vec3& x) const {
  if (!has_flow()) return {0, 0, 0};
  const double cx = std::cos(pi * x[0]), cy = std::cos(pi * x[1]), cz = std::cos(pi * x[2]);
  const double sx = std::sin(pi * x[0]), sy = std::sin(pi * x[1]), sz = std::sin(pi * x[2]);
  return {-a_ * pi * sx * cy * cz, -a_ * pi * cx * sy * cz, -a_ * pi * cx * cy * sz};
}

Vec3 ManufacturedSolution::B(const Vec3& x) const {
  Vec3 out{0, 0, 0};
  if (!has_field()) return out;
  for (int i = 0; i < 3; ++i) {
    double v = a_ * coef_[i];
    for (int l = 0; l < 3; ++l) v *= trig_derivative(l == i, m_[l] * pi, x[l], 0);
    out[i] = v;
  }
  return out;
}

Mat3 ManufacturedSolution::grad_B(const Vec3& x) const {
  Mat3 out{};
  if (!has_field()) return out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double v = a_ * coef_[i];
      for (int l = 0; l < 3; ++l) v *= trig_derivative(l == i, m_[l] * pi, x[l], l == j ? 1 : 0);
      out[i][j] = v;
    }
  return out;
}

Vec3 ManufacturedSolution::curl_B(const Vec3& x) const {
  const Mat3 d = grad_B(x);
  return {d[2][1] - d[1][2], d[0][2] - d[2][0], d[1][0] - d[0][1]};
}

Vec3 ManufacturedSolution::f(const Vec3& x) const {
  const Vec3 lap = laplacian_u(x);
  const Vec3 gp = grad_p(x);
  const Vec3 lorentz = cross(curl_B(x), B(x));
  Vec3 out{};
  for (int i = 0; i < 3; ++i) out[i] = -lap[i] + gp[i] - lorentz[i];
  if (problem_ == ProblemKind::Coupled) {
    const Vec3 v = u(x);
    const Mat3 du = grad_u(x);
    for (int i = 0; i < 3; ++i) out[i] += du[i][0] * v[0] + du[i][1] * v[1] + du[i][2] * v[2];
  }
  return out;
}

Vec3 ManufacturedSolution::g(const Vec3& x, double mu) const {
  const Vec3 j = curl_B(x);
  const Vec3 b = B(x);
  const Vec3 hall = cross(j, b);
  const Vec3 ind = cross(u(x), b);
  return {j[0] + mu * hall[0] - ind[0], j[1] + mu * hall[1] - ind[1], j[2] + mu * hall[2] - ind[2]};
}

HallState sample_exact(const ManufacturedSolution& ms, const Grid& g, ForcingMode mode) {
  HallState s(g);
  auto at = [](const auto& fn) { return [&fn](double x, double y, double z) { return fn({x, y, z}); }; };
  if (ms.has_flow()) {
    if (mode == ForcingMode::Analytic) {
      s.u = sample_faces(g, at([&](const Vec3& x) { return ms.u(x); }));
    } else {
      s.u = curl_e2f(sample_edges(g, at([&](const Vec3& x) { return ms.psi(x); })));
    }
    s.p = sample_cells(g, at([&](const Vec3& x) { return ms.p(x); }));
    remove_mean(s.p);
    enforce_noslip(s.u);
  }
  if (ms.has_field()) {
    s.B = sample_edges(g, at([&](const Vec3& x) { return ms.B(x); }));
    enforce_tangential_zero(s.B);
    if (mode == ForcingMode::Discrete) {
      // Only the (1,1,1) family is exactly discretely divergence-free as sampled.
      const FaceField J = curl_e2f(s.B);
      s.B = reconstruct_B(J, KrylovSpec{KrylovMethod::ConjugateGradient, 1e-13, 500},
                          norm(J, NormKind::L2));
    }
  }
  return s;
}

Forcing forcing_from_solution(const ManufacturedSolution& ms, const Grid& g, const SolverConfig& config) {
  Forcing out{FaceField(g), FaceField(g)};
  const ProblemKind problem = ms.problem();
  if (config.forcing.mode == ForcingMode::Analytic) {
    if (problem != ProblemKind::Maxwell) {
      out.f = sample_faces(g, [&](double x, double y, double z) { return ms.f({x, y, z}); });
    }
    if (problem != ProblemKind::Stokes) {
      out.g = sample_faces(g, [&](double x, double y, double z) { return ms.g({x, y, z}, config.mu); });
    }
    return out;
  }

  const HallState X = sample_exact(ms, g, ForcingMode::Discrete);
  const KrylovSpec spec = config.krylov();
  const FaceField J = curl_e2f(X.B);
  if (problem != ProblemKind::Maxwell) {
    const MomentumOperator L(problem == ProblemKind::Coupled ? X.u : FaceField(g));
    out.f = L.apply(X.u) + grad(X.p);
    if (problem == ProblemKind::Coupled) out.f -= lorentz_force(J, X.B);
  }
  if (problem != ProblemKind::Stokes) {
    out.g = apply_hall_operator(X.B, J, spec, config.mu);
    if (problem == ProblemKind::Coupled) out.g -= induction_term(X.u, X.B);
  }
  return out;
}

std::optional<double> fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(err[i] > 0.0) || !(h[i] > 0.0)) return std::nullopt;
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = m * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  return (m * sxy - sx * sy) / den;
}

void validate_levels(const std::vector<int>& levels) {
  if (levels.size() < 3) throw ManufacturedError("convergence study needs >= 3 levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 8) throw ManufacturedError("convergence study levels must be >= 8");
    if (i > 0 && (levels[i] <= levels[i - 1] || levels[i] % levels[i - 1] != 0)) {
      throw ManufacturedError("each convergence level must divide the next");
    }
  }
}

ConvergenceTable convergence_study(const std::vector<int>& levels, const SolverConfig& config,
                                   const LevelObserver& observe) {
  validate_levels(levels);
  const ManufacturedSolution ms = ManufacturedSolution::from_spec(config.forcing);
  ConvergenceTable t;
  t.problem = ms.problem();
  t.mode = config.forcing.mode;
  for (int n : levels) {
    SolverConfig c = config;
    c.n = n;
    const Grid g(n);
    const Forcing F = forcing_from_solution(ms, g, c);
    const HallState exact = sample_exact(ms, g, c.forcing.mode);
    ConvergenceRow row;
    row.n = n;
    row.h = g.h();
    FaceField u(g);
    EdgeField B(g);
    switch (t.problem) {
      case ProblemKind::Coupled: {
        SolveResult r = solve_hall_mhd(F.f, F.g, c);
        if (observe) observe(c, F, r);
        row.converged = r.report.converged;
        row.iterations = r.report.iterations;
        if (!row.converged) {
          t.failure = "level n=" + std::to_string(n) + " did not converge: " + r.report.stop_reason;
        }
        u = std::move(r.state.u);
        B = std::move(r.state.B);
        break;
      }
      case ProblemKind::Stokes: {
        MomentumSolution r = solve_momentum(FaceField(g), EdgeField(g), EdgeField(g), F.f, c.krylov());
        row.converged = true;
        u = std::move(r.u);
        break;
      }
      case ProblemKind::Maxwell: {
        MaxwellSolution r = solve_maxwell_type(exact.B, F.g, c.krylov(), c.mu);
        row.converged = true;
        B = std::move(r.B);
        break;
      }
    }
    row.err_u = norm(u - exact.u, NormKind::L2);
    row.err_B = norm(B - exact.B, NormKind::L2);
    row.norm_u = norm(exact.u, NormKind::L2);
    row.norm_B = norm(exact.B, NormKind::L2);
    t.rows.push_back(row);
    if (!row.converged) return t;
  }
  t.complete = true;
  std::vector<double> h, eu, eb;
  for (const auto& r : t.rows) {
    h.push_back(r.h);
    eu.push_back(r.err_u);
    eb.push_back(r.err_B);
  }
  t.order_u = fitted_order(h, eu);
  t.order_B = fitted_order(h, eb);
  const std::size_t k = h.size() - 3;
  auto tail = [k](const std::vector<double>& v) { return std::vector<double>(v.begin() + k, v.end()); };
  t.order_u_fine = fitted_order(tail(h), tail(eu));
  t.order_B_fine = fitted_order(tail(h), tail(eb));
  return t;
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& t) {
  std::ostringstream out;
  out.precision(17);
  out << "n,h,err_u_L2,err_B_L2,order_u,order_B\n";
  auto rate = [](double e0, double e1, double h0, double h1) -> std::string {
    if (!(e0 > 0.0) || !(e1 > 0.0)) return "";
    std::ostringstream s;
    s.precision(17);
    s << std::log(e0 / e1) / std::log(h0 / h1);
    return s.str();
  };
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    out << r.n << "," << r.h << "," << r.err_u << "," << r.err_B << ",";
    if (i > 0) {
      const auto& p = t.rows[i - 1];
      out << rate(p.err_u, r.err_u, p.h, r.h) << "," << rate(p.err_B, r.err_B, p.h, r.h);
    } else {
      out << ",";
    }
    out << "\n";
  }
  os << out.str();
}

}  // namespace hallmhd
