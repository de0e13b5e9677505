#include "realrays/linalg.hpp"

#include <numeric>
#include <utility>

namespace realrays {

bool solve_qr_pivoted(std::span<double> a, int n, std::span<double> b) {
  auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * n + c]; };
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> colnorm(static_cast<std::size_t>(n), 0.0);

  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  const double tiny = scale * n * std::numeric_limits<double>::epsilon();

  for (int k = 0; k < n; ++k) {
    // Pivot on the remaining column of largest norm.
    int best = k;
    double best_norm = -1.0;
    for (int c = k; c < n; ++c) {
      double s = 0.0;
      for (int r = k; r < n; ++r) s += at(r, c) * at(r, c);
      colnorm[static_cast<std::size_t>(c)] = std::sqrt(s);
      if (colnorm[static_cast<std::size_t>(c)] > best_norm) {
        best_norm = colnorm[static_cast<std::size_t>(c)];
        best = c;
      }
    }
    if (best != k) {
      for (int r = 0; r < n; ++r) std::swap(at(r, k), at(r, best));
      std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(best)]);
    }
    const double norm = best_norm;
    if (norm <= tiny) return false;

    // Householder vector v with v_k = x_k + sign(x_k) ||x||.
    const double alpha = at(k, k) >= 0 ? -norm : norm;
    std::vector<double> v(static_cast<std::size_t>(n - k));
    for (int r = k; r < n; ++r) v[static_cast<std::size_t>(r - k)] = at(r, k);
    v[0] -= alpha;
    double vv = 0.0;
    for (double x : v) vv += x * x;
    if (vv > 0.0) {
      for (int c = k; c < n; ++c) {
        double dot = 0.0;
        for (int r = k; r < n; ++r) dot += v[static_cast<std::size_t>(r - k)] * at(r, c);
        const double f = 2.0 * dot / vv;
        for (int r = k; r < n; ++r) at(r, c) -= f * v[static_cast<std::size_t>(r - k)];
      }
      double dot = 0.0;
      for (int r = k; r < n; ++r) dot += v[static_cast<std::size_t>(r - k)] * b[static_cast<std::size_t>(r)];
      const double f = 2.0 * dot / vv;
      for (int r = k; r < n; ++r) b[static_cast<std::size_t>(r)] -= f * v[static_cast<std::size_t>(r - k)];
    }
  }

  // Back substitution on R, then undo the column permutation.
  std::vector<double> z(static_cast<std::size_t>(n));
  for (int r = n - 1; r >= 0; --r) {
    double s = b[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < n; ++c) s -= at(r, c) * z[static_cast<std::size_t>(c)];
    z[static_cast<std::size_t>(r)] = s / at(r, r);
  }
  for (int c = 0; c < n; ++c) b[static_cast<std::size_t>(perm[static_cast<std::size_t>(c)])] = z[static_cast<std::size_t>(c)];
  return true;
}

double frobenius_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

}  // namespace realrays
