#pragma once

// Geometry of S^n: the projected cube grid, angular distance, the
// exponential map and an orthonormal tangent frame.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "realrays/arithmetic.hpp"

namespace realrays {

class GridTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A unit vector of R^{n+1}.
class SpherePoint {
 public:
  static constexpr double kUnitTolerance = 1e-12;

  SpherePoint() = default;
  /// Throws std::invalid_argument unless | ||coords|| - 1 | <= kUnitTolerance.
  explicit SpherePoint(std::vector<double> coords);
  /// Scales a nonzero vector onto the sphere.
  static SpherePoint normalize(std::span<const double> v);

  const std::vector<double>& coords() const noexcept { return coords_; }
  std::span<const double> span() const noexcept { return coords_; }
  int dimension() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](std::size_t i) const { return coords_[i]; }

  SpherePoint operator-() const;

 private:
  std::vector<double> coords_;
};

/// Default resource guard on the number of grid points per level.
inline constexpr std::uint64_t kDefaultGridCap = 100'000'000;

/// Mesh eta = 2^-k on the surface of the cube [-1,1]^{n+1}.
struct CubeGridSpec {
  int n = 1;  // the grid lives in R^{n+1}
  int k = 1;

  double eta() const noexcept;
  /// (2^{k+1}+1)^{n+1} - (2^{k+1}-1)^{n+1}; saturates at UINT64_MAX.
  std::uint64_t point_count() const noexcept;
};

/// Index-addressable enumeration of the cube-surface lattice.
///
/// Points are grouped by owning face: the face of a point is the smallest
/// coordinate index j with |y_j| = 1.  Faces are laid out as (0,+), (0,-),
/// (1,+), (1,-), ...; inside a face the free coordinates are a mixed-radix
/// counter.  The point at local index i on face (j,-) is the negative of
/// the point at local index i on face (j,+).
class CubeGrid {
 public:
  /// Throws std::invalid_argument for k < 1 or n < 1, and GridTooLarge
  /// when the point count exceeds `cap`.
  explicit CubeGrid(CubeGridSpec spec, std::uint64_t cap = kDefaultGridCap);

  const CubeGridSpec& spec() const noexcept { return spec_; }
  int dimension() const noexcept { return spec_.n + 1; }
  /// Half-lattice size m = 2^k; coordinates are i/m with |i| <= m.
  std::int64_t scale() const noexcept { return m_; }

  std::uint64_t size() const noexcept { return 2 * half_size_; }
  /// Number of points on the positive faces.
  std::uint64_t half_size() const noexcept { return half_size_; }

  /// Integer lattice coordinates (times 2^-k) of the point at `index`.
  void lattice_point(std::uint64_t index, std::span<std::int64_t> out) const;
  /// Cube point y with ||y||_inf = 1.
  void point(std::uint64_t index, std::span<double> out) const;

  /// Index of the positive-face point with local order `half_index`
  /// (0 <= half_index < half_size()), and of its antipode.
  std::uint64_t positive_index(std::uint64_t half_index) const;
  std::uint64_t antipode(std::uint64_t index) const;

 private:
  CubeGridSpec spec_;
  std::int64_t m_;
  std::vector<std::uint64_t> face_size_;   // per j, points on face (j,+)
  std::vector<std::uint64_t> face_start_;  // per j, index of first point of (j,+)
  std::uint64_t half_size_ = 0;
};

/// phi(y) = y / ||y||.  Throws std::invalid_argument for y = 0.
SpherePoint project(std::span<const double> y);
/// phi^{-1}(x) = x / ||x||_inf.
std::vector<double> project_inverse(const SpherePoint& x);

/// Angular distance arccos(<x1, x2>), evaluated as 2 atan2(|x1 - x2|, |x1 + x2|)
/// which stays accurate for nearby and nearly antipodal points.
double distance(const SpherePoint& x1, const SpherePoint& x2);

/// Host arithmetic uses the atan2 form; emulated arithmetic rounds the inner
/// product and then arccos, as the finite-precision model prescribes.
template <class Arith>
double distance_with(const Arith& ar, std::span<const double> x1, std::span<const double> x2) {
  if constexpr (!Arith::kRounded) {
    double diff = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < x1.size(); ++i) {
      diff += (x1[i] - x2[i]) * (x1[i] - x2[i]);
      sum += (x1[i] + x2[i]) * (x1[i] + x2[i]);
    }
    return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i) dot = ar.add(dot, ar.mul(x1[i], x2[i]));
  return ar.acos(dot);
}

/// exp_x(h) = cos(|h|) x + sin(|h|)/|h| h.  Throws std::invalid_argument if
/// |<h, x>| > 1e-10.
SpherePoint exp_map(const SpherePoint& x, std::span<const double> h);

/// Below this distance from e_last the Householder frame is replaced by the
/// first n identity columns.
inline constexpr double kHouseholderDegenerate = 1e-8;

/// Row-major (n+1) x n matrix whose columns are an orthonormal basis of
/// T_x S^n: the first n columns of I - 2 y y^T with y = (x - e_last)/|x - e_last|.
std::vector<double> tangent_basis(const SpherePoint& x);

/// out (rows x n, row-major) = A H for A (rows x (n+1), row-major) and H the
/// tangent frame at x, without forming H.
template <class Arith>
void times_tangent_basis(const Arith& ar, std::span<const double> a, int rows,
                         std::span<const double> x, std::span<double> out) {
  const int dim = static_cast<int>(x.size());
  const int n = dim - 1;
  double w[16];
  std::vector<double> wheap;
  double* y = w;
  if (dim > 16) {
    wheap.resize(static_cast<std::size_t>(dim));
    y = wheap.data();
  }
  double ss = 0.0;
  for (int c = 0; c < dim; ++c) {
    y[c] = (c == n) ? ar.sub(x[static_cast<std::size_t>(c)], 1.0) : x[static_cast<std::size_t>(c)];
    ss = ar.add(ss, ar.mul(y[c], y[c]));
  }
  const double len = ar.sqrt(ss);
  const bool degenerate = len < kHouseholderDegenerate;
  if (!degenerate) {
    for (int c = 0; c < dim; ++c) y[c] = ar.div(y[c], len);
  }
  for (int r = 0; r < rows; ++r) {
    const double* arow = a.data() + static_cast<std::size_t>(r) * dim;
    double* orow = out.data() + static_cast<std::size_t>(r) * n;
    if (degenerate) {
      for (int c = 0; c < n; ++c) orow[c] = arow[c];
      continue;
    }
    double dot = 0.0;
    for (int c = 0; c < dim; ++c) dot = ar.add(dot, ar.mul(arow[c], y[c]));
    const double twice = ar.mul(2.0, dot);
    for (int c = 0; c < n; ++c) orow[c] = ar.sub(arow[c], ar.mul(twice, y[c]));
  }
}

}  // namespace realrays
