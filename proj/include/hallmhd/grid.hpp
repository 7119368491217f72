/// @file grid.hpp
/// @brief Uniform staggered (MAC/Yee) grid on the unit cube and its field types.
///
/// Storage conventions:
///   - cell centers  ((i+.5)h, (j+.5)h, (k+.5)h), n^3 values
///   - d-normal faces: node-type along axis d, cell-type along the others
///   - d-directed edges: cell-type along axis d, node-type along the others
///   - every component is stored x-fastest, zero-based; vector fields keep
///     their three components concatenated in x, y, z order in one buffer.
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hallmhd {

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Grid {
 public:
  explicit Grid(int n);

  int n() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  double center(int i) const noexcept { return (i + 0.5) * h_; }
  double node(int i) const noexcept { return i * h_; }

  bool operator==(const Grid& other) const noexcept { return n_ == other.n_; }

 private:
  int n_;
  double h_;
};

/// Shape of one staggered component.
struct Layout {
  std::array<int, 3> dims{0, 0, 0};

  bool operator==(const Layout&) const = default;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }
  std::size_t operator()(int i, int j, int k) const noexcept {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims[1]) * k);
  }
  std::size_t operator()(const std::array<int, 3>& p) const noexcept {
    return (*this)(p[0], p[1], p[2]);
  }
  std::ptrdiff_t stride(int axis) const noexcept {
    if (axis == 0) return 1;
    if (axis == 1) return dims[0];
    return static_cast<std::ptrdiff_t>(dims[0]) * dims[1];
  }
};

Layout cell_layout(int n);
Layout node_layout(int n);
Layout face_layout(int n, int axis);
Layout edge_layout(int n, int axis);

enum class FieldKind { Scalar, Face, Edge };

const char* to_string(FieldKind kind);

template <FieldKind Kind>
class Field {
 public:
  static constexpr int components = Kind == FieldKind::Scalar ? 1 : 3;
  static constexpr FieldKind kind = Kind;

  explicit Field(const Grid& grid, double fill = 0.0) : grid_(grid) {
    std::size_t offset = 0;
    for (int c = 0; c < components; ++c) {
      if constexpr (Kind == FieldKind::Scalar) {
        layouts_[c] = cell_layout(grid.n());
      } else if constexpr (Kind == FieldKind::Face) {
        layouts_[c] = face_layout(grid.n(), c);
      } else {
        layouts_[c] = edge_layout(grid.n(), c);
      }
      offsets_[c] = offset;
      offset += layouts_[c].size();
    }
    offsets_[components] = offset;
    data_.assign(offset, fill);
  }

  const Grid& grid() const noexcept { return grid_; }
  const Layout& layout(int c = 0) const noexcept { return layouts_[c]; }

  std::span<double> comp(int c) noexcept {
    return {data_.data() + offsets_[c], layouts_[c].size()};
  }
  std::span<const double> comp(int c) const noexcept {
    return {data_.data() + offsets_[c], layouts_[c].size()};
  }

  double& at(int c, int i, int j, int k) noexcept {
    return data_[offsets_[c] + layouts_[c](i, j, k)];
  }
  double at(int c, int i, int j, int k) const noexcept {
    return data_[offsets_[c] + layouts_[c](i, j, k)];
  }

  double& operator()(int i, int j, int k) noexcept
    requires(Kind == FieldKind::Scalar)
  {
    return data_[layouts_[0](i, j, k)];
  }
  double operator()(int i, int j, int k) const noexcept
    requires(Kind == FieldKind::Scalar)
  {
    return data_[layouts_[0](i, j, k)];
  }

  std::span<double> flat() noexcept { return data_; }
  std::span<const double> flat() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double a) noexcept {
    for (double& v : data_) v *= a;
    return *this;
  }
  /// this += a * o
  Field& axpy(double a, const Field& o);

  bool operator==(const Field& o) const = default;

 private:
  Grid grid_;
  std::array<Layout, components> layouts_{};
  std::array<std::size_t, components + 1> offsets_{};
  std::vector<double> data_;
};

using ScalarField = Field<FieldKind::Scalar>;
using FaceField = Field<FieldKind::Face>;
using EdgeField = Field<FieldKind::Edge>;

void require_same_grid(const Grid& a, const Grid& b);

template <FieldKind K>
Field<K>& Field<K>::operator+=(const Field& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

template <FieldKind K>
Field<K>& Field<K>::operator-=(const Field& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

template <FieldKind K>
Field<K>& Field<K>::axpy(double a, const Field& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * o.data_[i];
  return *this;
}

template <FieldKind K>
Field<K> operator+(Field<K> a, const Field<K>& b) {
  a += b;
  return a;
}
template <FieldKind K>
Field<K> operator-(Field<K> a, const Field<K>& b) {
  a -= b;
  return a;
}
template <FieldKind K>
Field<K> operator*(double s, Field<K> a) {
  a *= s;
  return a;
}

template <FieldKind K>
bool all_finite(const Field<K>& f);

/// u = 0 on the walls: every boundary-normal face value is exactly zero.
/// Tangential no-slip is carried by the ghost reflection of the operators.
bool is_noslip(const FaceField& f);
void enforce_noslip(FaceField& f);

/// B x nu = 0: every edge lying in the boundary is exactly zero.
bool is_tangential_zero(const EdgeField& e);
void enforce_tangential_zero(EdgeField& e);

/// Zero-mean normalization for cell-centered fields (H^1 / R quotient).
double mean(const ScalarField& s);
void remove_mean(ScalarField& s);
void remove_mean(std::span<double> values);

}  // namespace hallmhd
