#pragma once

// Point certification: the scaled tangent Jacobian M, sigma_min(M), the
// normalized condition number and the computable alpha-theory bounds
// beta_bar, gamma_bar, alpha_bar; Newton's method on the sphere; and the
// universal constants of the certification theorems.
//
// All functions taking a PolynomialSystem expect it normalized, ||f|| = 1.

#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "realrays/arithmetic.hpp"
#include "realrays/linalg.hpp"
#include "realrays/polynomial.hpp"
#include "realrays/sphere.hpp"

namespace realrays {

struct TheoryConstants {
  double sigma;         // sum_{k>=0} 2^{-2^k+1}
  double nu_star;       // root of (3-sqrt7)(1-u)psi(u) - 4u
  double alpha_star;    // nu_star / sigma
  double nu_bullet;     // root of (3-sqrt7)(1-u)psi(u) - 6u
  double alpha_bullet;  // nu_bullet / sigma
  double alpha_0;       // smallest positive root of psi(u)^2 - 2u
  double s_0;
};

/// psi(u) = 1 - 4u + 2u^2
double psi(double u) noexcept;
/// (3 - sqrt 7)(1 - u) psi(u) - slope * u; slope 4 defines nu_star, 6 nu_bullet.
double capital_psi(double u, double slope = 4.0) noexcept;

/// Computed on first use by bisection; thread-safe.
const TheoryConstants& theory_constants();

struct PointData {
  std::vector<double> M;  // n x n, row-major
  double sigma_min = 0.0;
  double mu_norm = std::numeric_limits<double>::infinity();
  double beta_bar = 0.0;
  double gamma_bar = std::numeric_limits<double>::infinity();
  double alpha_bar = std::numeric_limits<double>::infinity();
  double f_sup = 0.0;
  double exclusion_radius = 0.0;
};

/// M = diag(1/sqrt d_i) Df(x) H with H the Householder tangent frame at x.
std::vector<double> compute_M(const PolynomialSystem& f, const SpherePoint& x);

/// Smallest singular value of the n x n matrix `m`.
double sigma_min(std::span<const double> m, int n);

PointData point_data(const PolynomialSystem& f, const SpherePoint& x);

class SingularJacobian : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NewtonStep {
  SpherePoint point;
  double beta = 0.0;  // d(x, N_f(x)) = |tangent step|
};

/// N_f(x) = exp_x(-Df(x)|_{T_x}^{-1} f(x)).  Throws SingularJacobian when the
/// restricted derivative is singular.
NewtonStep newton_step(const PolynomialSystem& f, const SpherePoint& x);

struct RefineResult {
  SpherePoint point;
  std::vector<double> beta_trace;  // beta_k = d(x_k, x_{k+1})
  int steps = 0;                   // trace entries above beta_tol
  bool converged = false;          // reached beta <= beta_tol
  bool singular = false;           // stopped on a singular Jacobian
  bool envelope_satisfied = true;  // see satisfies_quadratic_envelope
};

inline constexpr double kEnvelopeSlack = 1.1;

/// beta_k <= (1/2)^{2^k - 1} beta_0 * slack for every k in the trace.
bool satisfies_quadratic_envelope(std::span<const double> beta_trace, double slack = kEnvelopeSlack);

/// Iterates newton_step until beta <= beta_tol or max_steps iterations.  A
/// singular Jacobian ends the iteration with `singular` set and the partial
/// trace kept.
RefineResult newton_refine(const PolynomialSystem& f, const SpherePoint& x, int max_steps = 12,
                           double beta_tol = 1e-13);

/// Per-point kernel shared by the counting engine: evaluates ||f(x)||_inf
/// and sigma_min(M) through the arithmetic provider, reusing its buffers.
/// Not thread-safe; use one instance per worker.
template <class Arith>
class PointEvaluator {
 public:
  struct Sample {
    double f_sup;
    double sigma_min;
  };

  PointEvaluator(Arith ar, const PolynomialSystem& f)
      : ar_(std::move(ar)),
        f_(&f),
        values_(static_cast<std::size_t>(f.n())),
        jac_(static_cast<std::size_t>(f.n()) * f.dimension()),
        m_(static_cast<std::size_t>(f.n()) * f.n()),
        work_(m_.size()) {
    scratch_.reserve(f);
    for (int d : f.degrees()) {
      inv_sqrt_degree_.push_back(ar_.div(1.0, ar_.sqrt(ar_.round(static_cast<double>(d)))));
    }
  }

  Sample operator()(std::span<const double> x) {
    const int n = f_->n();
    const double sup = evaluate_into(ar_, *f_, x, values_, jac_, scratch_);
    times_tangent_basis(ar_, jac_, n, x, m_);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < n; ++c) {
        double& e = m_[static_cast<std::size_t>(i) * n + c];
        e = ar_.mul(inv_sqrt_degree_[static_cast<std::size_t>(i)], e);
      }
    }
    std::copy(m_.begin(), m_.end(), work_.begin());
    return {sup, smallest_singular_value(ar_, std::span<double>(work_), n)};
  }

  /// ||f(x)||_inf only; leaves jacobian() and M() stale.
  double residual(std::span<const double> x) {
    return evaluate_into(ar_, *f_, x, values_, std::span<double>(), scratch_);
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> jacobian() const noexcept { return jac_; }
  std::span<const double> M() const noexcept { return m_; }
  const Arith& arithmetic() const noexcept { return ar_; }

 private:
  Arith ar_;
  const PolynomialSystem* f_;
  std::vector<double> values_;
  std::vector<double> jac_;
  std::vector<double> m_;
  std::vector<double> work_;
  std::vector<double> inv_sqrt_degree_;
  EvalScratch scratch_;
};

}  // namespace realrays
