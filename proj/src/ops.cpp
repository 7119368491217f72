#include "hallmhd/ops.hpp"

namespace hallmhd {

namespace {

template <typename Fn>
void for_each_index(const Layout& l, Fn&& fn) {
  std::size_t idx = 0;
  for (int k = 0; k < l.dims[2]; ++k)
    for (int j = 0; j < l.dims[1]; ++j)
      for (int i = 0; i < l.dims[0]; ++i, ++idx) fn(std::array<int, 3>{i, j, k}, idx);
}

inline std::array<int, 3> shifted(std::array<int, 3> p, int axis, int by) {
  p[axis] += by;
  return p;
}

}  // namespace

FaceVectors::FaceVectors(const Grid& g) : grid(g) {
  for (int d = 0; d < 3; ++d) vec[d].assign(face_layout(g.n(), d).size(), Vec3{0.0, 0.0, 0.0});
}

FaceField grad(const ScalarField& phi) {
  const Grid& g = phi.grid();
  const int n = g.n();
  const double inv_h = 1.0 / g.h();
  const Layout cl = cell_layout(n);
  const auto v = phi.flat();
  FaceField out(g);
  for (int d = 0; d < 3; ++d) {
    auto o = out.comp(d);
    const std::ptrdiff_t s = cl.stride(d);
    for_each_index(out.layout(d), [&](const std::array<int, 3>& p, std::size_t idx) {
      if (p[d] == 0 || p[d] == n) return;
      const std::size_t c = cl(p);
      o[idx] = (v[c] - v[c - s]) * inv_h;
    });
  }
  return out;
}

ScalarField div(const FaceField& f) {
  const Grid& g = f.grid();
  const double inv_h = 1.0 / g.h();
  ScalarField out(g);
  auto o = out.flat();
  for (int d = 0; d < 3; ++d) {
    const Layout& fl = f.layout(d);
    const auto c = f.comp(d);
    const std::ptrdiff_t s = fl.stride(d);
    for_each_index(out.layout(), [&](const std::array<int, 3>& p, std::size_t idx) {
      const std::size_t q = fl(p);
      o[idx] += (c[q + s] - c[q]) * inv_h;
    });
  }
  return out;
}

FaceField curl_e2f(const EdgeField& e) {
  const Grid& g = e.grid();
  const double inv_h = 1.0 / g.h();
  FaceField out(g);
  for (int d = 0; d < 3; ++d) {
    const int a = (d + 1) % 3;
    const int b = (d + 2) % 3;
    const Layout& la = e.layout(a);
    const Layout& lb = e.layout(b);
    const auto ea = e.comp(a);
    const auto eb = e.comp(b);
    auto o = out.comp(d);
    for_each_index(out.layout(d), [&](const std::array<int, 3>& p, std::size_t idx) {
      const std::size_t ib = lb(p);
      const std::size_t ia = la(p);
      o[idx] = ((eb[ib + lb.stride(a)] - eb[ib]) - (ea[ia + la.stride(b)] - ea[ia])) * inv_h;
    });
  }
  return out;
}

EdgeField curl_f2e(const FaceField& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const double inv_h = 1.0 / g.h();
  EdgeField out(g);
  for (int d = 0; d < 3; ++d) {
    const int a = (d + 1) % 3;
    const int b = (d + 2) % 3;
    const Layout& la = f.layout(a);
    const Layout& lb = f.layout(b);
    const auto fa = f.comp(a);
    const auto fb = f.comp(b);
    auto o = out.comp(d);
    for_each_index(out.layout(d), [&](const std::array<int, 3>& p, std::size_t idx) {
      if (p[a] == 0 || p[a] == n || p[b] == 0 || p[b] == n) return;
      const std::size_t ib = lb(p);
      const std::size_t ia = la(p);
      o[idx] = ((fb[ib] - fb[ib - lb.stride(a)]) - (fa[ia] - fa[ia - la.stride(b)])) * inv_h;
    });
  }
  return out;
}

std::vector<double> edge_div(const EdgeField& e) {
  const Grid& g = e.grid();
  const int n = g.n();
  const double inv_h = 1.0 / g.h();
  const Layout nl = node_layout(n);
  std::vector<double> out(nl.size(), 0.0);
  for_each_index(nl, [&](const std::array<int, 3>& p, std::size_t idx) {
    for (int d = 0; d < 3; ++d)
      if (p[d] == 0 || p[d] == n) return;
    double s = 0.0;
    for (int d = 0; d < 3; ++d) {
      const Layout& l = e.layout(d);
      const std::size_t q = l(p);
      s += e.comp(d)[q] - e.comp(d)[q - l.stride(d)];
    }
    out[idx] = s * inv_h;
  });
  return out;
}

CellVectors to_centers(const FaceField& f) {
  CellVectors out(f.grid());
  for (int d = 0; d < 3; ++d) {
    const Layout& fl = f.layout(d);
    const auto c = f.comp(d);
    const std::ptrdiff_t s = fl.stride(d);
    auto o = out.c[d].flat();
    for_each_index(out.c[d].layout(), [&](const std::array<int, 3>& p, std::size_t idx) {
      const std::size_t q = fl(p);
      o[idx] = 0.5 * (c[q] + c[q + s]);
    });
  }
  return out;
}

CellVectors to_centers(const EdgeField& e) {
  CellVectors out(e.grid());
  for (int d = 0; d < 3; ++d) {
    const int a = (d + 1) % 3;
    const int b = (d + 2) % 3;
    const Layout& el = e.layout(d);
    const auto c = e.comp(d);
    const std::ptrdiff_t sa = el.stride(a);
    const std::ptrdiff_t sb = el.stride(b);
    auto o = out.c[d].flat();
    for_each_index(out.c[d].layout(), [&](const std::array<int, 3>& p, std::size_t idx) {
      const std::size_t q = el(p);
      o[idx] = 0.25 * (c[q] + c[q + sa] + c[q + sb] + c[q + sa + sb]);
    });
  }
  return out;
}

FaceField from_centers(const CellVectors& cv) {
  const Grid& g = cv.grid();
  const int n = g.n();
  const Layout cl = cell_layout(n);
  FaceField out(g);
  for (int d = 0; d < 3; ++d) {
    const auto c = cv.c[d].flat();
    const std::ptrdiff_t s = cl.stride(d);
    auto o = out.comp(d);
    for_each_index(out.layout(d), [&](const std::array<int, 3>& p, std::size_t idx) {
      if (p[d] == 0) {
        o[idx] = c[cl(p)];
      } else if (p[d] == n) {
        o[idx] = c[cl(shifted(p, d, -1))];
      } else {
        const std::size_t q = cl(p);
        o[idx] = 0.5 * (c[q] + c[q - s]);
      }
    });
  }
  return out;
}

void extrapolate_boundary_normal(FaceField& f) {
  const int n = f.grid().n();
  for (int d = 0; d < 3; ++d) {
    const Layout& l = f.layout(d);
    const std::ptrdiff_t s = l.stride(d);
    auto c = f.comp(d);
    for_each_index(l, [&](const std::array<int, 3>& p, std::size_t idx) {
      if (p[d] == 0) c[idx] = 2.0 * c[idx + s] - c[idx + 2 * s];
      if (p[d] == n) c[idx] = 2.0 * c[idx - s] - c[idx - 2 * s];
    });
  }
}

double face_tangential_average(const FaceField& f, int d, int t, const std::array<int, 3>& p) {
  const int n = f.grid().n();
  const Layout& lt = f.layout(t);
  const auto c = f.comp(t);
  const std::ptrdiff_t st = lt.stride(t);
  const std::ptrdiff_t sd = lt.stride(d);
  // t-faces at q[t] in {p[t], p[t]+1}, q[d] in {p[d]-1, p[d]} clipped to [0, n-1].
  if (p[d] == 0) {
    const std::size_t q = lt(p);
    return 0.5 * (c[q] + c[q + st]);
  }
  if (p[d] == n) {
    const std::size_t q = lt(shifted(p, d, -1));
    return 0.5 * (c[q] + c[q + st]);
  }
  const std::size_t q = lt(p);
  return 0.25 * (c[q] + c[q + st] + c[q - sd] + c[q - sd + st]);
}

FaceVectors to_faces(const FaceField& f) {
  FaceVectors out(f.grid());
  for (int d = 0; d < 3; ++d) {
    const auto cd = f.comp(d);
    for_each_index(f.layout(d), [&](const std::array<int, 3>& p, std::size_t idx) {
      Vec3& v = out.vec[d][idx];
      for (int t = 0; t < 3; ++t) v[t] = (t == d) ? cd[idx] : face_tangential_average(f, d, t, p);
    });
  }
  return out;
}

FaceVectors to_faces(const EdgeField& e) {
  const int n = e.grid().n();
  FaceVectors out(e.grid());
  for (int d = 0; d < 3; ++d) {
    for_each_index(face_layout(n, d), [&](const std::array<int, 3>& p, std::size_t idx) {
      Vec3& v = out.vec[d][idx];
      for (int c = 0; c < 3; ++c) {
        const Layout& l = e.layout(c);
        const auto ec = e.comp(c);
        if (c == d) {
          // d-edges: q[d] in {p[d]-1, p[d]} clipped, both transverse axes in {p, p+1}.
          const int a = (d + 1) % 3;
          const int b = (d + 2) % 3;
          const std::ptrdiff_t sa = l.stride(a);
          const std::ptrdiff_t sb = l.stride(b);
          double sum = 0.0;
          int count = 0;
          for (int s = -1; s <= 0; ++s) {
            const int qd = p[d] + s;
            if (qd < 0 || qd > n - 1) continue;
            const std::size_t q = l(shifted(p, d, s));
            sum += ec[q] + ec[q + sa] + ec[q + sb] + ec[q + sa + sb];
            count += 4;
          }
          v[c] = sum / count;
        } else {
          // c-edges: same index along c and d, two points along the third axis.
          const int o = 3 - c - d;
          const std::size_t q = l(p);
          v[c] = 0.5 * (ec[q] + ec[q + l.stride(o)]);
        }
      }
    });
  }
  return out;
}

}  // namespace hallmhd
