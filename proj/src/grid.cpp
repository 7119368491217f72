#include "hallmhd/grid.hpp"

#include <cmath>
#include <numeric>

namespace hallmhd {

Grid::Grid(int n) : n_(n), h_(0.0) {
  if (n < 4) throw GridError("grid needs at least 4 cells per axis, got " + std::to_string(n));
  h_ = 1.0 / n;
  if (h_ * n != 1.0) {
    throw GridError("h*n is not exactly 1 for n = " + std::to_string(n));
  }
}

Layout cell_layout(int n) { return {{n, n, n}}; }
Layout node_layout(int n) { return {{n + 1, n + 1, n + 1}}; }

Layout face_layout(int n, int axis) {
  Layout l{{n, n, n}};
  l.dims[axis] = n + 1;
  return l;
}

Layout edge_layout(int n, int axis) {
  Layout l{{n + 1, n + 1, n + 1}};
  l.dims[axis] = n;
  return l;
}

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Scalar: return "scalar";
    case FieldKind::Face: return "face";
    case FieldKind::Edge: return "edge";
  }
  return "unknown";
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) {
    throw GridError("grid mismatch: n = " + std::to_string(a.n()) + " vs n = " +
                    std::to_string(b.n()));
  }
}

template <FieldKind K>
bool all_finite(const Field<K>& f) {
  for (double v : f.flat())
    if (!std::isfinite(v)) return false;
  return true;
}

template bool all_finite(const ScalarField&);
template bool all_finite(const FaceField&);
template bool all_finite(const EdgeField&);

namespace {

// Visits every entry of a component whose index along `axis` is 0 or n.
template <typename Fn>
void for_boundary_planes(const Layout& l, int axis, int n, Fn&& fn) {
  for (int k = 0; k < l.dims[2]; ++k)
    for (int j = 0; j < l.dims[1]; ++j)
      for (int i = 0; i < l.dims[0]; ++i) {
        const int p[3] = {i, j, k};
        if (p[axis] == 0 || p[axis] == n) fn(l(i, j, k));
      }
}

}  // namespace

bool is_noslip(const FaceField& f) {
  const int n = f.grid().n();
  bool ok = true;
  for (int d = 0; d < 3; ++d) {
    auto c = f.comp(d);
    for_boundary_planes(f.layout(d), d, n, [&](std::size_t idx) {
      if (c[idx] != 0.0) ok = false;
    });
  }
  return ok;
}

void enforce_noslip(FaceField& f) {
  const int n = f.grid().n();
  for (int d = 0; d < 3; ++d) {
    auto c = f.comp(d);
    for_boundary_planes(f.layout(d), d, n, [&](std::size_t idx) { c[idx] = 0.0; });
  }
}

bool is_tangential_zero(const EdgeField& e) {
  const int n = e.grid().n();
  bool ok = true;
  for (int d = 0; d < 3; ++d) {
    auto c = e.comp(d);
    for (int a = 0; a < 3; ++a) {
      if (a == d) continue;
      for_boundary_planes(e.layout(d), a, n, [&](std::size_t idx) {
        if (c[idx] != 0.0) ok = false;
      });
    }
  }
  return ok;
}

void enforce_tangential_zero(EdgeField& e) {
  const int n = e.grid().n();
  for (int d = 0; d < 3; ++d) {
    auto c = e.comp(d);
    for (int a = 0; a < 3; ++a) {
      if (a == d) continue;
      for_boundary_planes(e.layout(d), a, n, [&](std::size_t idx) { c[idx] = 0.0; });
    }
  }
}

double mean(const ScalarField& s) {
  auto v = s.flat();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void remove_mean(std::span<double> values) {
  const double m =
      std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  for (double& v : values) v -= m;
}

void remove_mean(ScalarField& s) { remove_mean(s.flat()); }

}  // namespace hallmhd
