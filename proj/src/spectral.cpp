#include "hallmhd/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace hallmhd {

BcPattern face_pattern(int d) {
  static constexpr BcPattern p[3] = {BcPattern::FaceX, BcPattern::FaceY, BcPattern::FaceZ};
  return p[d];
}

BcPattern edge_pattern(int d) {
  static constexpr BcPattern p[3] = {BcPattern::EdgeX, BcPattern::EdgeY, BcPattern::EdgeZ};
  return p[d];
}

namespace {

int pattern_axis(BcPattern p) {
  switch (p) {
    case BcPattern::FaceX:
    case BcPattern::EdgeX:
      return 0;
    case BcPattern::FaceY:
    case BcPattern::EdgeY:
      return 1;
    case BcPattern::FaceZ:
    case BcPattern::EdgeZ:
      return 2;
    case BcPattern::PureNeumann:
      break;
  }
  return -1;
}

bool is_face(BcPattern p) {
  return p == BcPattern::FaceX || p == BcPattern::FaceY || p == BcPattern::FaceZ;
}

// Number of unknowns along an axis.
int unknowns(int n, AxisBc bc) { return bc == AxisBc::D1 ? n - 1 : n; }

// Eigenvalue of the 1D operator for transform index k (0-based).
double eigenvalue_1d(int n, double h, AxisBc bc, int k) {
  const int mode = bc == AxisBc::N2 ? k : k + 1;
  return (2.0 - 2.0 * std::cos(mode * std::numbers::pi / n)) / (h * h);
}

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

struct AlignedBuffer {
  explicit AlignedBuffer(std::size_t n)
      : data(static_cast<double*>(fftw_malloc(sizeof(double) * (n ? n : 1)))), size(n) {
    if (!data) throw std::bad_alloc();
  }
  ~AlignedBuffer() { fftw_free(data); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  double* data;
  std::size_t size;
};

std::mutex plan_mutex;

const Plans& plans_for(int n, BcPattern pattern) {
  static std::map<std::pair<int, BcPattern>, std::unique_ptr<Plans>> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& slot = cache[{n, pattern}];
  if (slot) return *slot;
  const auto bcs = axis_bcs(pattern);
  int dims[3];
  fftw_r2r_kind fwd[3], bwd[3];
  std::size_t total = 1;
  // FFTW is row-major (last index fastest); our storage is x-fastest.
  for (int a = 0; a < 3; ++a) {
    const int r = 2 - a;
    dims[r] = unknowns(n, bcs[a]);
    total *= static_cast<std::size_t>(dims[r]);
    switch (bcs[a]) {
      case AxisBc::D1:
        fwd[r] = FFTW_RODFT00;
        bwd[r] = FFTW_RODFT00;
        break;
      case AxisBc::D2:
        fwd[r] = FFTW_RODFT10;
        bwd[r] = FFTW_RODFT01;
        break;
      case AxisBc::N2:
        fwd[r] = FFTW_REDFT10;
        bwd[r] = FFTW_REDFT01;
        break;
    }
  }
  AlignedBuffer a(total), b(total);
  auto p = std::make_unique<Plans>();
  p->forward = fftw_plan_r2r(3, dims, a.data, b.data, fwd, FFTW_ESTIMATE);
  p->backward = fftw_plan_r2r(3, dims, b.data, a.data, bwd, FFTW_ESTIMATE);
  if (!p->forward || !p->backward) throw std::runtime_error("FFTW planning failed");
  slot = std::move(p);
  return *slot;
}

}  // namespace

std::array<AxisBc, 3> axis_bcs(BcPattern pattern) {
  if (pattern == BcPattern::PureNeumann) return {AxisBc::N2, AxisBc::N2, AxisBc::N2};
  const int d = pattern_axis(pattern);
  std::array<AxisBc, 3> out{};
  for (int a = 0; a < 3; ++a) {
    if (is_face(pattern)) {
      out[a] = a == d ? AxisBc::D1 : AxisBc::D2;
    } else {
      out[a] = a == d ? AxisBc::N2 : AxisBc::D1;
    }
  }
  return out;
}

Layout pattern_layout(int n, BcPattern pattern) {
  if (pattern == BcPattern::PureNeumann) return cell_layout(n);
  const int d = pattern_axis(pattern);
  return is_face(pattern) ? face_layout(n, d) : edge_layout(n, d);
}

bool is_unknown(int n, BcPattern pattern, const std::array<int, 3>& p) {
  const auto bcs = axis_bcs(pattern);
  for (int a = 0; a < 3; ++a)
    if (bcs[a] == AxisBc::D1 && (p[a] == 0 || p[a] == n)) return false;
  return true;
}

void apply_laplacian(const Grid& g, BcPattern pattern, std::span<const double> in,
                     std::span<double> out) {
  const int n = g.n();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const Layout l = pattern_layout(n, pattern);
  const auto bcs = axis_bcs(pattern);
  if (in.size() != l.size() || out.size() != l.size()) {
    throw std::invalid_argument("apply_laplacian: size mismatch");
  }
  std::size_t idx = 0;
  for (int k = 0; k < l.dims[2]; ++k)
    for (int j = 0; j < l.dims[1]; ++j)
      for (int i = 0; i < l.dims[0]; ++i, ++idx) {
        const std::array<int, 3> p{i, j, k};
        if (!is_unknown(n, pattern, p)) {
          out[idx] = 0.0;
          continue;
        }
        const double v = in[idx];
        double s = 0.0;
        for (int a = 0; a < 3; ++a) {
          const std::ptrdiff_t st = l.stride(a);
          const int last = l.dims[a] - 1;
          double lo, hi;
          if (bcs[a] == AxisBc::D1) {
            lo = p[a] - 1 == 0 ? 0.0 : in[idx - st];
            hi = p[a] + 1 == last ? 0.0 : in[idx + st];
          } else {
            const double ghost = bcs[a] == AxisBc::D2 ? -v : v;
            lo = p[a] == 0 ? ghost : in[idx - st];
            hi = p[a] == last ? ghost : in[idx + st];
          }
          s += 2.0 * v - lo - hi;
        }
        out[idx] = s * inv_h2;
      }
}

void fast_poisson_solve(const Grid& g, BcPattern pattern, std::span<const double> rhs,
                        std::span<double> x) {
  const int n = g.n();
  const double h = g.h();
  const Layout l = pattern_layout(n, pattern);
  if (rhs.size() != l.size() || x.size() != l.size()) {
    throw std::invalid_argument("fast_poisson_solve: size mismatch");
  }
  const auto bcs = axis_bcs(pattern);
  std::array<int, 3> m{}, lo{};
  for (int a = 0; a < 3; ++a) {
    m[a] = unknowns(n, bcs[a]);
    lo[a] = bcs[a] == AxisBc::D1 ? 1 : 0;
  }
  const std::size_t total = static_cast<std::size_t>(m[0]) * m[1] * m[2];
  AlignedBuffer a(total), b(total);
  std::size_t t = 0;
  for (int k = 0; k < m[2]; ++k)
    for (int j = 0; j < m[1]; ++j)
      for (int i = 0; i < m[0]; ++i, ++t) a.data[t] = rhs[l(i + lo[0], j + lo[1], k + lo[2])];

  const Plans& plans = plans_for(n, pattern);
  fftw_execute_r2r(plans.forward, a.data, b.data);

  std::array<std::vector<double>, 3> lam;
  for (int ax = 0; ax < 3; ++ax) {
    lam[ax].resize(m[ax]);
    for (int q = 0; q < m[ax]; ++q) lam[ax][q] = eigenvalue_1d(n, h, bcs[ax], q);
  }
  const double norm = 1.0 / (8.0 * n * n * static_cast<double>(n));
  t = 0;
  for (int k = 0; k < m[2]; ++k)
    for (int j = 0; j < m[1]; ++j)
      for (int i = 0; i < m[0]; ++i, ++t) {
        const double s = lam[0][i] + lam[1][j] + lam[2][k];
        b.data[t] = s > 0.0 ? b.data[t] * norm / s : 0.0;
      }

  fftw_execute_r2r(plans.backward, b.data, a.data);
  std::fill(x.begin(), x.end(), 0.0);
  t = 0;
  for (int k = 0; k < m[2]; ++k)
    for (int j = 0; j < m[1]; ++j)
      for (int i = 0; i < m[0]; ++i, ++t) x[l(i + lo[0], j + lo[1], k + lo[2])] = a.data[t];
  if (pattern == BcPattern::PureNeumann) remove_mean(x);
}

double smallest_eigenvalue(const Grid& g, BcPattern pattern) {
  const auto bcs = axis_bcs(pattern);
  double s = 0.0;
  bool all_neumann = true;
  for (int a = 0; a < 3; ++a) {
    s += eigenvalue_1d(g.n(), g.h(), bcs[a], 0);
    all_neumann = all_neumann && bcs[a] == AxisBc::N2;
  }
  if (all_neumann) return eigenvalue_1d(g.n(), g.h(), AxisBc::N2, 1);
  return s;
}

}  // namespace hallmhd
