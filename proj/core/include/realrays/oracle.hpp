#pragma once

// Exact ground truth for real zero-ray counts.
//
//  * n = 1: binary forms with rational coefficients, counted with Sturm
//    sequences over Q.
//  * n >= 2: products of rational linear forms, whose zero rays are the
//    kernels of the n x (n+1) linear systems picked one factor per equation.
//
// Everything here runs in GMP rationals; nothing shares arithmetic with the
// floating-point engine it checks.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "realrays/polynomial.hpp"
#include "realrays/sphere.hpp"

namespace realrays::oracle {

/// Dense univariate polynomial over Q; coefficient i multiplies t^i.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<mpq_class> coefficients);

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<mpq_class>& coefficients() const noexcept { return coeffs_; }
  const mpq_class& leading() const { return coeffs_.back(); }

  mpq_class operator()(const mpq_class& t) const;
  RationalPolynomial derivative() const;
  RationalPolynomial operator*(const RationalPolynomial& other) const;
  RationalPolynomial operator-() const;

  /// Quotient and remainder of Euclidean division; divisor must be nonzero.
  static void divide(const RationalPolynomial& num, const RationalPolynomial& den, RationalPolynomial& quotient,
                     RationalPolynomial& remainder);

  /// Monic greatest common divisor.
  static RationalPolynomial gcd(RationalPolynomial a, RationalPolynomial b);

  /// p / gcd(p, p')
  RationalPolynomial square_free_part() const;

 private:
  void trim();
  std::vector<mpq_class> coeffs_;
};

std::vector<RationalPolynomial> sturm_sequence(const RationalPolynomial& p);

/// Number of distinct real roots of p, p != 0.
int count_real_roots(const RationalPolynomial& p);

/// Homogeneous binary form sum_j a_j X0^{d-j} X1^j with a_j = coefficients[j].
struct BinaryForm {
  int degree = 0;
  std::vector<mpq_class> coefficients;  // size degree+1

  /// p(1, t)
  RationalPolynomial dehomogenized() const;
  PolynomialSystem to_system() const;
};

/// Distinct real roots of p(1,t), plus one when p(0,1) = 0.  Throws
/// std::invalid_argument for the zero form.
int binary_form_ray_count(const BinaryForm& p);

/// True when every zero ray of p is simple: p(1,t) square-free and the ray
/// (0,1) of multiplicity at most one.
bool has_simple_rays(const BinaryForm& p);

/// Random form of exact degree `degree`, built as a product of random
/// linear and quadratic factors with integer coefficients in
/// [-coefficient_bound, coefficient_bound].
BinaryForm random_binary_form(int degree, std::uint64_t seed, int coefficient_bound = 4);

/// Exactly represented system: each polynomial a list of (exponent, Q) terms.
struct RationalTerm {
  std::vector<int> exponents;
  mpq_class coefficient;
};
using RationalPoly = std::vector<RationalTerm>;

mpq_class evaluate(const RationalPoly& p, const std::vector<mpq_class>& x);

struct LinearProductOptions {
  int coefficient_bound = 4;
  /// Minimum angle between distinct zero lines.
  double min_ray_angle = 0.2;
  /// Minimum |l(zeta)| / (|l| |zeta|) for every factor l not chosen at zeta.
  double min_factor_residual = 0.1;
  int max_retries = 5000;
};

struct LinearProductSystem {
  PolynomialSystem system;
  std::uint64_t known_count = 0;
  /// forms[i][j] = coefficients of the j-th linear factor of f_i.
  std::vector<std::vector<std::vector<mpq_class>>> forms;
  std::vector<RationalPoly> exact_polys;
  /// Integer kernel vectors, one per zero ray.
  std::vector<std::vector<mpq_class>> rays;
};

class SeedExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// f_i = prod_j l_ij with random integer linear forms.  Seeds leading to
/// rank-deficient choices, repeated rays, or rays lying on two factors of
/// one equation are rejected (verified in exact arithmetic), as are those
/// failing the separation thresholds of `options`; the generator retries
/// deterministically from `seed`.  Throws SeedExhausted after
/// options.max_retries attempts.
LinearProductSystem make_linear_product_system(int n, const std::vector<int>& degrees, std::uint64_t seed,
                                               const LinearProductOptions& options = {});

/// Kernel of an n x (n+1) rational matrix of rank n (integer, primitive,
/// first nonzero entry positive).  Returns empty when the rank is below n.
std::vector<mpq_class> kernel_vector(const std::vector<std::vector<mpq_class>>& rows);

/// ||f(z)||_inf <= tol and sigma_min(M(z)) > tol, for f normalized first.
bool verify_zero(const PolynomialSystem& f, const SpherePoint& z, double tol);

/// f(z) == 0 exactly and Df(z) restricted to z-perp has full rank, in Q.
bool verify_zero_exact(const std::vector<RationalPoly>& f, const std::vector<mpq_class>& z);

/// A system with its oracle count.
struct SuiteCase {
  std::string name;
  PolynomialSystem system;
  std::uint64_t expected_count = 0;
};

/// Level of the grid used to screen univariate forms by their kappa estimate.
inline constexpr int kScreeningLevel = 10;

/// The first `size` forms random_binary_form(1 + i % 6, i), i = 1, 2, ...,
/// with simple rays and grid kappa estimate at most `kappa_max`.
std::vector<SuiteCase> univariate_suite(int size = 20, double kappa_max = 1e3);

/// `size` linear-product systems with n = 2, seeds 1..size, degrees cycling
/// through (1,1) (2,1) (1,2) (2,2) (3,1) (1,3) (3,2) (2,3) (3,3).
std::vector<SuiteCase> multivariate_suite(int size = 10);

}  // namespace realrays::oracle
