#include "hallmhd/krylov.hpp"

#include <cmath>
#include <sstream>

namespace hallmhd {

void KrylovSpec::validate() const {
  if (!(rtol > 0.0 && rtol < 1.0)) throw std::invalid_argument("Krylov rtol must lie in (0, 1)");
  if (maxiter < 1) throw std::invalid_argument("Krylov maxiter must be >= 1");
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

namespace {

using Vec = std::vector<double>;

void residual(const LinearOp& A, std::span<const double> b, std::span<const double> x, Vec& r,
              Vec& tmp) {
  A(x, tmp);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - tmp[i];
}

void apply_precond(const KrylovOptions& opt, const Vec& in, Vec& out) {
  if (opt.precond) {
    opt.precond(in, out);
  } else {
    out = in;
  }
  if (opt.project) opt.project(out);
}

}  // namespace

KrylovResult conjugate_gradient(const LinearOp& A, std::span<const double> b, std::span<double> x,
                                const KrylovOptions& opt) {
  const std::size_t n = b.size();
  KrylovResult res;
  res.rhs_norm = norm2(b);
  res.target = opt.target;
  Vec r(n), z(n), p(n), q(n), s(n), y(n), tmp(n);

  if (opt.project) opt.project(x);
  residual(A, b, x, r, tmp);
  if (opt.project) opt.project(r);
  double rnorm = norm2(r);
  res.history.push_back(rnorm);

  while (true) {
    if (rnorm <= opt.target) {
      res.converged = true;
      break;
    }
    if (res.iterations >= opt.maxiter) break;

    // One CG cycle from the current x; (y, s) is the smoothed iterate/residual pair.
    y.assign(x.begin(), x.end());
    s = r;
    double snorm2 = rnorm * rnorm;
    apply_precond(opt, r, z);
    p = z;
    double rz = dot(r, z);
    bool stalled = false;
    while (res.iterations < opt.maxiter) {
      A(p, q);
      const double pq = dot(p, q);
      if (!(pq > 0.0) || !std::isfinite(pq)) {
        stalled = true;
        break;
      }
      const double alpha = rz / pq;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * q[i];
      }
      if (opt.project) opt.project(r);
      ++res.iterations;

      double sd = 0.0, dd = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = r[i] - s[i];
        sd += s[i] * d;
        dd += d * d;
      }
      if (dd > 0.0) {
        const double eta = -sd / dd;
        for (std::size_t i = 0; i < n; ++i) {
          s[i] += eta * (r[i] - s[i]);
          y[i] += eta * (x[i] - y[i]);
        }
        snorm2 = dot(s, s);
      }
      res.history.push_back(std::sqrt(snorm2));
      if (std::sqrt(snorm2) <= opt.target) break;

      apply_precond(opt, r, z);
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    std::copy(y.begin(), y.end(), x.begin());
    if (opt.project) opt.project(x);
    residual(A, b, x, r, tmp);
    if (opt.project) opt.project(r);
    const double true_norm = norm2(r);
    if (stalled && true_norm > opt.target && true_norm >= rnorm) {
      rnorm = true_norm;
      break;
    }
    rnorm = true_norm;
  }
  res.residual = rnorm;
  res.converged = rnorm <= opt.target;
  return res;
}

KrylovResult bicgstab(const LinearOp& A, std::span<const double> b, std::span<double> x,
                      const KrylovOptions& opt) {
  const std::size_t n = b.size();
  KrylovResult res;
  res.rhs_norm = norm2(b);
  res.target = opt.target;
  Vec r(n), rhat(n), p(n), v(n), phat(n), s(n), shat(n), t(n), tmp(n);

  if (opt.project) opt.project(x);
  residual(A, b, x, r, tmp);
  if (opt.project) opt.project(r);
  double rnorm = norm2(r);
  res.history.push_back(rnorm);
  int restarts = 0;

  while (rnorm > opt.target && res.iterations < opt.maxiter) {
    rhat = r;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    bool breakdown = false;
    while (res.iterations < opt.maxiter) {
      const double rho_new = dot(rhat, r);
      if (rho_new == 0.0 || !std::isfinite(rho_new)) {
        breakdown = true;
        break;
      }
      const double beta = (rho_new / rho) * (alpha / omega);
      rho = rho_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
      apply_precond(opt, p, phat);
      A(phat, v);
      const double rv = dot(rhat, v);
      if (rv == 0.0 || !std::isfinite(rv)) {
        breakdown = true;
        break;
      }
      alpha = rho / rv;
      for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
      ++res.iterations;
      const double snorm = norm2(s);
      if (snorm <= opt.target) {
        for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
        res.history.push_back(snorm);
        break;
      }
      apply_precond(opt, s, shat);
      A(shat, t);
      const double tt = dot(t, t);
      omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * phat[i] + omega * shat[i];
        r[i] = s[i] - omega * t[i];
      }
      if (opt.project) opt.project(r);
      const double rn = norm2(r);
      res.history.push_back(rn);
      if (rn <= opt.target) break;
      if (omega == 0.0) {
        breakdown = true;
        break;
      }
    }
    if (opt.project) opt.project(x);
    residual(A, b, x, r, tmp);
    if (opt.project) opt.project(r);
    const double true_norm = norm2(r);
    if (breakdown && true_norm >= rnorm && ++restarts > 3) {
      rnorm = true_norm;
      break;
    }
    rnorm = true_norm;
  }
  res.residual = rnorm;
  res.converged = rnorm <= opt.target;
  return res;
}

KrylovResult krylov_solve(const KrylovSpec& spec, const LinearOp& A, std::span<const double> b,
                          std::span<double> x, const LinearOp& precond, const Projector& project,
                          double reference, const std::string& label) {
  spec.validate();
  KrylovOptions opt;
  opt.maxiter = spec.maxiter;
  opt.precond = precond;
  opt.project = project;
  opt.target = spec.rtol * (reference >= 0.0 ? reference : norm2(b));
  KrylovResult res = spec.method == KrylovMethod::ConjugateGradient
                         ? conjugate_gradient(A, b, x, opt)
                         : bicgstab(A, b, x, opt);
  if (!res.converged) {
    std::ostringstream os;
    os.precision(17);
    os << label << ": no convergence in " << res.iterations << " iterations (residual "
       << res.residual << ", target " << res.target << ")";
    throw KrylovError(os.str(), res);
  }
  return res;
}

}  // namespace hallmhd
