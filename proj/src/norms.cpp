#include "hallmhd/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hallmhd {

namespace {

struct ComponentView {
  std::span<const double> values;
  Layout layout;
  std::array<bool, 3> node_axis;  // node-type along the axis
};

inline double node_factor(const ComponentView& c, const std::array<int, 3>& p, int n, int skip) {
  double w = 1.0;
  for (int a = 0; a < 3; ++a) {
    if (a == skip || !c.node_axis[a]) continue;
    if (p[a] == 0 || p[a] == n) w *= 0.5;
  }
  return w;
}

// Accumulates sum of w*|v|^q (power) or w*v^2 (q == 2) over values.
template <typename Pow>
double accumulate_values(const ComponentView& c, int n, double h3, Pow&& pw) {
  double s = 0.0;
  std::size_t idx = 0;
  const Layout& l = c.layout;
  for (int k = 0; k < l.dims[2]; ++k)
    for (int j = 0; j < l.dims[1]; ++j)
      for (int i = 0; i < l.dims[0]; ++i, ++idx) {
        const double v = c.values[idx];
        if (v == 0.0) continue;
        s += h3 * node_factor(c, {i, j, k}, n, -1) * pw(v);
      }
  return s;
}

template <typename Pow>
double accumulate_links(const ComponentView& c, int n, double h, bool wall_links, Pow&& pw) {
  const double h3 = h * h * h;
  const Layout& l = c.layout;
  double s = 0.0;
  for (int a = 0; a < 3; ++a) {
    const std::ptrdiff_t st = l.stride(a);
    std::size_t idx = 0;
    for (int k = 0; k < l.dims[2]; ++k)
      for (int j = 0; j < l.dims[1]; ++j)
        for (int i = 0; i < l.dims[0]; ++i, ++idx) {
          const std::array<int, 3> p{i, j, k};
          const double wt = node_factor(c, p, n, a);
          const double v = c.values[idx];
          const int last = l.dims[a] - 1;
          if (p[a] < last) {
            const double d = (c.values[idx + st] - v) / h;
            s += h3 * wt * pw(d);
          }
          if (wall_links && !c.node_axis[a] && (p[a] == 0 || p[a] == last)) {
            const double d = v / (0.5 * h);
            s += 0.5 * h3 * wt * pw(d);
          }
        }
  }
  return s;
}

template <FieldKind K>
std::vector<ComponentView> views(const Field<K>& f) {
  std::vector<ComponentView> out;
  for (int c = 0; c < Field<K>::components; ++c) {
    ComponentView v{f.comp(c), f.layout(c), {false, false, false}};
    for (int a = 0; a < 3; ++a) {
      if constexpr (K == FieldKind::Face) v.node_axis[a] = (a == c);
      if constexpr (K == FieldKind::Edge) v.node_axis[a] = (a != c);
    }
    out.push_back(v);
  }
  return out;
}

template <FieldKind K>
double norm_impl(const Field<K>& f, NormKind kind, double q) {
  const int n = f.grid().n();
  const double h = f.grid().h();
  const double h3 = h * h * h;
  const bool wall = (K == FieldKind::Face);
  const auto vs = views(f);
  auto sq = [](double v) { return v * v; };
  auto pq = [q](double v) { return std::pow(std::abs(v), q); };
  if ((kind == NormKind::Lq || kind == NormKind::W1q) && !(q >= 1.0)) {
    throw std::invalid_argument("Lq/W1q norms need q >= 1");
  }
  double s = 0.0;
  switch (kind) {
    case NormKind::L2:
      for (const auto& v : vs) s += accumulate_values(v, n, h3, sq);
      return std::sqrt(s);
    case NormKind::Lq:
      for (const auto& v : vs) s += accumulate_values(v, n, h3, pq);
      return std::pow(s, 1.0 / q);
    case NormKind::Linf: {
      double m = 0.0;
      for (double v : f.flat()) m = std::max(m, std::abs(v));
      return m;
    }
    case NormKind::H1semi:
      for (const auto& v : vs) s += accumulate_links(v, n, h, wall, sq);
      return std::sqrt(s);
    case NormKind::H1:
      for (const auto& v : vs) s += accumulate_values(v, n, h3, sq) + accumulate_links(v, n, h, wall, sq);
      return std::sqrt(s);
    case NormKind::W1q:
      for (const auto& v : vs) s += accumulate_values(v, n, h3, pq) + accumulate_links(v, n, h, wall, pq);
      return std::pow(s, 1.0 / q);
  }
  throw std::invalid_argument("unknown norm kind");
}

template <FieldKind K>
double inner_impl(const Field<K>& a, const Field<K>& b) {
  require_same_grid(a.grid(), b.grid());
  const int n = a.grid().n();
  const double h = a.grid().h();
  const double h3 = h * h * h;
  const auto va = views(a);
  const auto vb = views(b);
  double s = 0.0;
  for (std::size_t c = 0; c < va.size(); ++c) {
    const Layout& l = va[c].layout;
    std::size_t idx = 0;
    for (int k = 0; k < l.dims[2]; ++k)
      for (int j = 0; j < l.dims[1]; ++j)
        for (int i = 0; i < l.dims[0]; ++i, ++idx)
          s += h3 * node_factor(va[c], {i, j, k}, n, -1) * va[c].values[idx] * vb[c].values[idx];
  }
  return s;
}

}  // namespace

NormKind parse_norm_kind(std::string_view name) {
  if (name == "L2") return NormKind::L2;
  if (name == "Lq") return NormKind::Lq;
  if (name == "Linf") return NormKind::Linf;
  if (name == "H1semi") return NormKind::H1semi;
  if (name == "H1") return NormKind::H1;
  if (name == "W1q") return NormKind::W1q;
  throw std::invalid_argument("unknown norm kind: " + std::string(name));
}

double norm(const ScalarField& f, NormKind kind, double q) { return norm_impl(f, kind, q); }
double norm(const FaceField& f, NormKind kind, double q) { return norm_impl(f, kind, q); }
double norm(const EdgeField& f, NormKind kind, double q) { return norm_impl(f, kind, q); }

double inner(const ScalarField& a, const ScalarField& b) { return inner_impl(a, b); }
double inner(const FaceField& a, const FaceField& b) { return inner_impl(a, b); }
double inner(const EdgeField& a, const EdgeField& b) { return inner_impl(a, b); }

double node_l2(const Grid& g, std::span<const double> node_values) {
  const double h = g.h();
  double s = 0.0;
  for (double v : node_values) s += v * v;
  return std::sqrt(s * h * h * h);
}

}  // namespace hallmhd
