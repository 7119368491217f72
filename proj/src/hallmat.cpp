#include "hallmhd/hallmat.hpp"

#include <algorithm>
#include <cassert>

namespace hallmhd {

Mat3 assemble_A(const Vec3& b) noexcept {
  return {{{1.0, b[2], -b[1]}, {-b[2], 1.0, b[0]}, {b[1], -b[0], 1.0}}};
}

Mat3 assemble_A_inv(const Vec3& b) noexcept {
  const double s = 1.0 / (1.0 + dot(b, b));
  return {{{s * (1.0 + b[0] * b[0]), s * (b[0] * b[1] - b[2]), s * (b[0] * b[2] + b[1])},
           {s * (b[0] * b[1] + b[2]), s * (1.0 + b[1] * b[1]), s * (b[1] * b[2] - b[0])},
           {s * (b[0] * b[2] - b[1]), s * (b[1] * b[2] + b[0]), s * (1.0 + b[2] * b[2])}}};
}

HallCoefficients::HallCoefficients(const EdgeField& H, double mu) : grid(H.grid()) {
  const FaceVectors hf = to_faces(H);
  for (int d = 0; d < 3; ++d) {
    row[d].resize(hf.vec[d].size());
    for (std::size_t i = 0; i < hf.vec[d].size(); ++i) {
      const Vec3& h = hf.vec[d][i];
      const Mat3 m = assemble_A_inv({mu * h[0], mu * h[1], mu * h[2]});
      row[d][i] = m[d];
    }
  }
}

FaceField apply_A_inv_field(const HallCoefficients& coef, const FaceField& F) {
  require_same_grid(coef.grid, F.grid());
  FaceField out(F.grid());
  for (int d = 0; d < 3; ++d) {
    const Layout& l = F.layout(d);
    const auto fd = F.comp(d);
    auto o = out.comp(d);
    const auto& rows = coef.row[d];
    std::size_t idx = 0;
    for (int k = 0; k < l.dims[2]; ++k)
      for (int j = 0; j < l.dims[1]; ++j)
        for (int i = 0; i < l.dims[0]; ++i, ++idx) {
          const std::array<int, 3> p{i, j, k};
          Vec3 v;
          for (int t = 0; t < 3; ++t) v[t] = t == d ? fd[idx] : face_tangential_average(F, d, t, p);
          o[idx] = dot(rows[idx], v);
        }
  }
  return out;
}

FaceField apply_A_inv_field(const EdgeField& H, const FaceField& F, double mu) {
  require_same_grid(H.grid(), F.grid());
  const FaceVectors hf = to_faces(H);
  const FaceVectors fv = to_faces(F);
  FaceField out(F.grid());
  for (int d = 0; d < 3; ++d) {
    auto o = out.comp(d);
    for (std::size_t i = 0; i < o.size(); ++i) {
      const Vec3& h = hf.vec[d][i];
      const Vec3 b{mu * h[0], mu * h[1], mu * h[2]};
      const Vec3 y = apply_A_inv(b, fv.vec[d][i]);
#ifndef NDEBUG
      {
        const double ff = dot(fv.vec[d][i], fv.vec[d][i]);
        const double q = dot(y, fv.vec[d][i]);
        assert(q <= ff * (1.0 + 1e-12) + 1e-300);
        assert(q >= ff / (1.0 + dot(b, b)) * (1.0 - 1e-12) - 1e-300);
      }
#endif
      o[i] = y[d];
    }
  }
  return out;
}

double ellipticity_defect(const EdgeField& H, const FaceField& F, double mu) {
  require_same_grid(H.grid(), F.grid());
  const FaceVectors hf = to_faces(H);
  const FaceVectors fv = to_faces(F);
  double worst = 0.0;
  for (int d = 0; d < 3; ++d) {
    for (std::size_t i = 0; i < fv.vec[d].size(); ++i) {
      const Vec3& h = hf.vec[d][i];
      const Vec3 b{mu * h[0], mu * h[1], mu * h[2]};
      const Vec3& xi = fv.vec[d][i];
      const double ff = dot(xi, xi);
      if (ff == 0.0) continue;
      const double q = dot(apply_A_inv(b, xi), xi);
      const double lower = ff / (1.0 + dot(b, b));
      worst = std::max({worst, (q - ff) / ff, (lower - q) / ff});
    }
  }
  return worst;
}

}  // namespace hallmhd
