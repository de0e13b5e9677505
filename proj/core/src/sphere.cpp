#include "realrays/sphere.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace realrays {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

// a * b with saturation at UINT64_MAX.
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r = sat_mul(r, base);
  return r;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return (b > std::numeric_limits<std::uint64_t>::max() - a) ? std::numeric_limits<std::uint64_t>::max()
                                                             : a + b;
}

}  // namespace

SpherePoint::SpherePoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("SpherePoint: empty coordinate vector");
  const double len = norm2(coords_);
  if (!(std::abs(len - 1.0) <= kUnitTolerance)) {
    throw std::invalid_argument("SpherePoint: vector is not unit (norm " + std::to_string(len) + ")");
  }
}

SpherePoint SpherePoint::normalize(std::span<const double> v) {
  const double len = norm2(v);
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw std::invalid_argument("SpherePoint::normalize: zero or non-finite vector");
  }
  std::vector<double> c(v.begin(), v.end());
  for (double& e : c) e /= len;
  return SpherePoint(std::move(c));
}

SpherePoint SpherePoint::operator-() const {
  SpherePoint out = *this;
  for (double& c : out.coords_) c = -c;
  return out;
}

double CubeGridSpec::eta() const noexcept { return std::ldexp(1.0, -k); }

std::uint64_t CubeGridSpec::point_count() const noexcept {
  if (k >= 62) return std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t m2 = std::uint64_t{1} << (k + 1);
  // (2m+1)^{n+1} - (2m-1)^{n+1} = sum_j 2 (2m-1)^j (2m+1)^{n-j}
  std::uint64_t total = 0;
  for (int j = 0; j <= n; ++j) {
    total = sat_add(total, sat_mul(2, sat_mul(sat_pow(m2 - 1, j), sat_pow(m2 + 1, n - j))));
  }
  return total;
}

CubeGrid::CubeGrid(CubeGridSpec spec, std::uint64_t cap) : spec_(spec) {
  if (spec.n < 1) throw std::invalid_argument("CubeGrid: n must be >= 1");
  if (spec.k < 1) throw std::invalid_argument("CubeGrid: refinement level k must be >= 1");
  const std::uint64_t count = spec.point_count();
  if (count > cap) {
    throw GridTooLarge("grid at level k=" + std::to_string(spec.k) + " has " + std::to_string(count) +
                       " points, above the cap of " + std::to_string(cap));
  }
  m_ = std::int64_t{1} << spec.k;
  const std::uint64_t inner = static_cast<std::uint64_t>(2 * m_ - 1);
  const std::uint64_t full = static_cast<std::uint64_t>(2 * m_ + 1);
  std::uint64_t start = 0;
  for (int j = 0; j <= spec.n; ++j) {
    const std::uint64_t sz = sat_pow(inner, j) * sat_pow(full, spec.n - j);
    face_size_.push_back(sz);
    face_start_.push_back(start);
    start += 2 * sz;
    half_size_ += sz;
  }
}

void CubeGrid::lattice_point(std::uint64_t index, std::span<std::int64_t> out) const {
  if (index >= size()) throw std::out_of_range("CubeGrid: index out of range");
  const int dim = dimension();
  int j = 0;
  while (j < spec_.n && index >= face_start_[static_cast<std::size_t>(j) + 1]) ++j;
  std::uint64_t local = index - face_start_[static_cast<std::size_t>(j)];
  const bool negative = local >= face_size_[static_cast<std::size_t>(j)];
  if (negative) local -= face_size_[static_cast<std::size_t>(j)];

  // Last free coordinate varies fastest.
  for (int c = dim - 1; c >= 0; --c) {
    if (c == j) continue;
    const std::int64_t lo = (c < j) ? -m_ + 1 : -m_;
    const std::uint64_t radix = static_cast<std::uint64_t>(c < j ? 2 * m_ - 1 : 2 * m_ + 1);
    out[static_cast<std::size_t>(c)] = lo + static_cast<std::int64_t>(local % radix);
    local /= radix;
  }
  out[static_cast<std::size_t>(j)] = m_;
  if (negative) {
    for (int c = 0; c < dim; ++c) out[static_cast<std::size_t>(c)] = -out[static_cast<std::size_t>(c)];
  }
}

void CubeGrid::point(std::uint64_t index, std::span<double> out) const {
  std::int64_t buf[16];
  std::vector<std::int64_t> heap;
  std::span<std::int64_t> lat;
  if (dimension() <= 16) {
    lat = std::span<std::int64_t>(buf, static_cast<std::size_t>(dimension()));
  } else {
    heap.resize(static_cast<std::size_t>(dimension()));
    lat = heap;
  }
  lattice_point(index, lat);
  const double inv = std::ldexp(1.0, -spec_.k);
  for (int c = 0; c < dimension(); ++c) {
    out[static_cast<std::size_t>(c)] = static_cast<double>(lat[static_cast<std::size_t>(c)]) * inv;
  }
}

std::uint64_t CubeGrid::positive_index(std::uint64_t half_index) const {
  if (half_index >= half_size_) throw std::out_of_range("CubeGrid: half index out of range");
  for (int j = 0; j <= spec_.n; ++j) {
    const std::uint64_t sz = face_size_[static_cast<std::size_t>(j)];
    if (half_index < sz) return face_start_[static_cast<std::size_t>(j)] + half_index;
    half_index -= sz;
  }
  throw std::logic_error("CubeGrid: unreachable");
}

std::uint64_t CubeGrid::antipode(std::uint64_t index) const {
  if (index >= size()) throw std::out_of_range("CubeGrid: index out of range");
  int j = 0;
  while (j < spec_.n && index >= face_start_[static_cast<std::size_t>(j) + 1]) ++j;
  const std::uint64_t start = face_start_[static_cast<std::size_t>(j)];
  const std::uint64_t sz = face_size_[static_cast<std::size_t>(j)];
  const std::uint64_t local = index - start;
  return local < sz ? index + sz : index - sz;
}

SpherePoint project(std::span<const double> y) {
  const double len = norm2(y);
  if (!(len > 0.0)) throw std::invalid_argument("project: zero vector");
  std::vector<double> c(y.begin(), y.end());
  for (double& e : c) e /= len;
  return SpherePoint(std::move(c));
}

std::vector<double> project_inverse(const SpherePoint& x) {
  double sup = 0.0;
  for (double c : x.coords()) sup = std::max(sup, std::abs(c));
  std::vector<double> y = x.coords();
  for (double& e : y) e /= sup;
  return y;
}

double distance(const SpherePoint& x1, const SpherePoint& x2) {
  if (x1.dimension() != x2.dimension()) throw std::invalid_argument("distance: dimension mismatch");
  return distance_with(HostArithmetic{}, x1.span(), x2.span());
}

SpherePoint exp_map(const SpherePoint& x, std::span<const double> h) {
  if (static_cast<int>(h.size()) != x.dimension()) {
    throw std::invalid_argument("exp_map: dimension mismatch");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) dot += h[i] * x[i];
  if (std::abs(dot) > 1e-10) throw std::invalid_argument("exp_map: h is not tangent at x");
  const double t = norm2(h);
  if (t == 0.0) return x;
  const double c = std::cos(t);
  const double s = std::sin(t) / t;
  std::vector<double> out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = c * x[i] + s * h[i];
  // Renormalize away the rounding of cos/sin so the result satisfies the
  // unit invariant.
  return SpherePoint::normalize(out);
}

std::vector<double> tangent_basis(const SpherePoint& x) {
  const int dim = x.dimension();
  const int n = dim - 1;
  // A = I_{dim}; A H = H.
  std::vector<double> eye(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) eye[static_cast<std::size_t>(i) * dim + i] = 1.0;
  std::vector<double> h(static_cast<std::size_t>(dim) * n);
  times_tangent_basis(HostArithmetic{}, eye, dim, x.span(), h);
  return h;
}

}  // namespace realrays
