#ifndef VARINT_ARRAY2D_HPP
#define VARINT_ARRAY2D_HPP

#include <cstddef>
#include <vector>

namespace varint {

/// Dense row-major 2D array of doubles.
struct Array2D {
  int nx = 0, ny = 0;
  std::vector<double> v;

  Array2D() = default;
  Array2D(int nx_, int ny_, double fill = 0.0)
      : nx(nx_), ny(ny_), v(static_cast<size_t>(nx_) * ny_, fill) {}

  double& operator()(int i, int j) { return v[static_cast<size_t>(i) * ny + j]; }
  double operator()(int i, int j) const {
    return v[static_cast<size_t>(i) * ny + j];
  }
  size_t size() const { return v.size(); }
  bool same_shape(const Array2D& o) const { return nx == o.nx && ny == o.ny; }
};

struct Array3D {
  int nx = 0, ny = 0, nz = 0;
  std::vector<double> v;

  Array3D() = default;
  Array3D(int nx_, int ny_, int nz_, double fill = 0.0)
      : nx(nx_), ny(ny_), nz(nz_),
        v(static_cast<size_t>(nx_) * ny_ * nz_, fill) {}

  double& operator()(int i, int j, int k) {
    return v[(static_cast<size_t>(i) * ny + j) * nz + k];
  }
  double operator()(int i, int j, int k) const {
    return v[(static_cast<size_t>(i) * ny + j) * nz + k];
  }
  size_t size() const { return v.size(); }
};

inline int pwrap(int i, int n) { return (i % n + n) % n; }

}  // namespace varint

#endif
