#pragma once

// Dense kernels for the small square matrices that appear at a single
// point (n x n, n small).  Storage is row-major in a caller-owned span.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "realrays/arithmetic.hpp"

namespace realrays {

/// Singular values of the n x n matrix `a` (row-major, overwritten) by
/// one-sided Jacobi rotations, sorted ascending into `out`.  Every
/// arithmetic operation goes through `ar`.
template <class Arith>
void singular_values(const Arith& ar, std::span<double> a, int n, std::span<double> out) {
  auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * n + c]; };
  // Rotations stop once the normalized column coupling is at the working
  // precision.
  double tol = 8.0 * std::numeric_limits<double>::epsilon();
  if constexpr (Arith::kRounded) tol = std::max(tol, 8.0 * ar.context().unit());
  constexpr int kMaxSweeps = 60;

  for (int sweep = 0; sweep < kMaxSweeps && n > 1; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        double gamma = 0.0;
        for (int r = 0; r < n; ++r) {
          alpha = ar.add(alpha, ar.mul(at(r, p), at(r, p)));
          beta = ar.add(beta, ar.mul(at(r, q), at(r, q)));
          gamma = ar.add(gamma, ar.mul(at(r, p), at(r, q)));
        }
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const double zeta = ar.div(ar.sub(beta, alpha), ar.mul(2.0, gamma));
        const double root = ar.sqrt(ar.add(1.0, ar.mul(zeta, zeta)));
        double t = ar.div(1.0, ar.add(std::abs(zeta), root));
        if (zeta < 0) t = -t;
        const double c = ar.div(1.0, ar.sqrt(ar.add(1.0, ar.mul(t, t))));
        const double s = ar.mul(c, t);
        for (int r = 0; r < n; ++r) {
          const double xp = at(r, p);
          const double xq = at(r, q);
          at(r, p) = ar.sub(ar.mul(c, xp), ar.mul(s, xq));
          at(r, q) = ar.add(ar.mul(s, xp), ar.mul(c, xq));
        }
      }
    }
    if (!rotated) break;
  }
  for (int c = 0; c < n; ++c) {
    double ss = 0.0;
    for (int r = 0; r < n; ++r) ss = ar.add(ss, ar.mul(at(r, c), at(r, c)));
    out[static_cast<std::size_t>(c)] = ar.sqrt(ss);
  }
  std::sort(out.begin(), out.begin() + n);
}

/// Smallest singular value; `a` is overwritten.
template <class Arith>
double smallest_singular_value(const Arith& ar, std::span<double> a, int n) {
  if (n == 1) return std::abs(a[0]);
  double buf[8];
  std::vector<double> heap;
  std::span<double> out;
  if (n <= 8) {
    out = std::span<double>(buf, static_cast<std::size_t>(n));
  } else {
    heap.resize(static_cast<std::size_t>(n));
    out = heap;
  }
  singular_values(ar, a, n, out);
  return out[0];
}

/// Solves the n x n system a w = b by Householder QR with column pivoting
/// in host arithmetic.  `a` and `b` are overwritten; the solution is left in
/// `b`.  Returns false when a zero pivot is met (numerically singular).
bool solve_qr_pivoted(std::span<double> a, int n, std::span<double> b);

/// Frobenius norm of a row-major matrix.
double frobenius_norm(std::span<const double> a);

}  // namespace realrays
