#include "hallmhd/sample.hpp"

namespace hallmhd {

Vec3 cell_position(const Grid& g, const std::array<int, 3>& p) {
  return {g.center(p[0]), g.center(p[1]), g.center(p[2])};
}

Vec3 face_position(const Grid& g, int d, const std::array<int, 3>& p) {
  Vec3 x = cell_position(g, p);
  x[d] = g.node(p[d]);
  return x;
}

Vec3 edge_position(const Grid& g, int d, const std::array<int, 3>& p) {
  Vec3 x{g.node(p[0]), g.node(p[1]), g.node(p[2])};
  x[d] = g.center(p[d]);
  return x;
}

namespace {

template <typename Pos, typename Out>
void fill(const Layout& l, Pos&& pos, Out&& out) {
  std::size_t idx = 0;
  for (int k = 0; k < l.dims[2]; ++k)
    for (int j = 0; j < l.dims[1]; ++j)
      for (int i = 0; i < l.dims[0]; ++i, ++idx) out(idx, pos(std::array<int, 3>{i, j, k}));
}

}  // namespace

ScalarField sample_cells(const Grid& g, const ScalarFn& fn) {
  ScalarField s(g);
  auto v = s.flat();
  fill(s.layout(), [&](const auto& p) { return cell_position(g, p); },
       [&](std::size_t idx, const Vec3& x) { v[idx] = fn(x[0], x[1], x[2]); });
  return s;
}

FaceField sample_faces(const Grid& g, const VectorFn& fn) {
  FaceField f(g);
  for (int d = 0; d < 3; ++d) {
    auto v = f.comp(d);
    fill(f.layout(d), [&](const auto& p) { return face_position(g, d, p); },
         [&](std::size_t idx, const Vec3& x) { v[idx] = fn(x[0], x[1], x[2])[d]; });
  }
  return f;
}

EdgeField sample_edges(const Grid& g, const VectorFn& fn) {
  EdgeField e(g);
  for (int d = 0; d < 3; ++d) {
    auto v = e.comp(d);
    fill(e.layout(d), [&](const auto& p) { return edge_position(g, d, p); },
         [&](std::size_t idx, const Vec3& x) { v[idx] = fn(x[0], x[1], x[2])[d]; });
  }
  return e;
}

}  // namespace hallmhd
