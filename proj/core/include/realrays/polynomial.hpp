#pragma once

// Homogeneous polynomial systems f = (f_1, ..., f_n) in n+1 variables.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "realrays/arithmetic.hpp"

namespace realrays {

/// Raised for any malformed or mathematically invalid input system.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Monomial {
  std::vector<int> exponents;  // multi-index J, length n+1
  double coefficient = 0.0;

  int total_degree() const noexcept;
};

/// Exact multinomial coefficient d! / (J_0! ... J_n!) for |J| = d.
std::uint64_t multinomial(std::span<const int> exponents);

class Polynomial {
 public:
  Polynomial() = default;
  /// Validates and sorts `terms` lexicographically by exponent vector.
  /// Throws InputError on negative exponents, wrong arity, degree mismatch
  /// or duplicate exponent vectors.
  Polynomial(int num_variables, int degree, std::vector<Monomial> terms);

  int num_variables() const noexcept { return num_variables_; }
  int degree() const noexcept { return degree_; }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Multinomial weights (d choose J), one per term, in term order.
  const std::vector<double>& weights() const noexcept { return weights_; }

  Polynomial scaled(double factor) const;

 private:
  int num_variables_ = 0;
  int degree_ = 0;
  std::vector<Monomial> terms_;
  std::vector<double> weights_;
};

/// Weyl (Bombieri) inner product sum_J g_J h_J / (d choose J).
double weyl_inner(const Polynomial& g, const Polynomial& h);
double weyl_norm(const Polynomial& g);

class PolynomialSystem {
 public:
  PolynomialSystem() = default;
  /// Throws InputError when `polys` is empty, sizes disagree, a degree is
  /// not positive, or some f_i is identically zero.
  PolynomialSystem(std::vector<int> degrees, std::vector<Polynomial> polys);

  /// Number of equations; the ambient space is R^{n+1}.
  int n() const noexcept { return static_cast<int>(polys_.size()); }
  int dimension() const noexcept { return n() + 1; }
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  const std::vector<Polynomial>& polys() const noexcept { return polys_; }
  const Polynomial& poly(int i) const { return polys_.at(static_cast<std::size_t>(i)); }

  /// D = max_i d_i
  int max_degree() const noexcept { return max_degree_; }
  /// S = max_i (number of monomials of f_i)
  int max_terms() const noexcept { return max_terms_; }
  /// ||f|| = max_i weyl_norm(f_i)
  double norm() const noexcept { return norm_; }

  /// Copy scaled so that norm() == 1.
  PolynomialSystem normalized() const;

  // Flattened storage used by the evaluation kernels.
  struct Flat {
    std::vector<std::size_t> offsets;  // n+1 entries, term ranges per polynomial
    std::vector<int> exponents;        // term-major, (n+1) per term
    std::vector<double> coefficients;
  };
  const Flat& flat() const noexcept { return flat_; }

 private:
  void build_cache();

  std::vector<int> degrees_;
  std::vector<Polynomial> polys_;
  int max_degree_ = 0;
  int max_terms_ = 0;
  double norm_ = 0.0;
  Flat flat_;
};

/// Copy with every coefficient rounded into `ctx`.
PolynomialSystem round_coefficients(const PolynomialSystem& f, const PrecisionContext& ctx);

struct Evaluation {
  std::vector<double> values;
  double sup_norm = 0.0;
};

/// f(x) and ||f(x)||_inf in host arithmetic.
Evaluation evaluate(const PolynomialSystem& f, std::span<const double> x);

/// Row-major n x (n+1) Jacobian Df(x).
std::vector<double> jacobian(const PolynomialSystem& f, std::span<const double> x);

/// Reusable buffers for the templated kernels below.
struct EvalScratch {
  std::vector<double> powers;  // (n+1) x (D+1) table of x_k^e

  void reserve(const PolynomialSystem& f) {
    powers.resize(static_cast<std::size_t>(f.dimension()) * (f.max_degree() + 1));
  }
};

namespace detail {

template <class Arith>
void fill_powers(const Arith& ar, const PolynomialSystem& f, std::span<const double> x,
                 EvalScratch& scratch) {
  const int dim = f.dimension();
  const int stride = f.max_degree() + 1;
  scratch.reserve(f);
  for (int k = 0; k < dim; ++k) {
    double* row = scratch.powers.data() + static_cast<std::size_t>(k) * stride;
    row[0] = 1.0;
    for (int e = 1; e < stride; ++e) row[e] = ar.mul(row[e - 1], x[static_cast<std::size_t>(k)]);
  }
}

}  // namespace detail

/// Monomial-wise evaluation: each term c_J x^J is a product of powers, and
/// the terms are summed in storage order.  Writes f(x) into `values` and
/// returns ||f(x)||_inf.  If `jac` is non-empty it receives the row-major
/// Jacobian, each partial derivative evaluated the same way.
template <class Arith>
double evaluate_into(const Arith& ar, const PolynomialSystem& f, std::span<const double> x,
                     std::span<double> values, std::span<double> jac, EvalScratch& scratch) {
  detail::fill_powers(ar, f, x, scratch);
  const int dim = f.dimension();
  const int stride = f.max_degree() + 1;
  const auto& flat = f.flat();
  const double* pw = scratch.powers.data();
  const bool want_jac = !jac.empty();
  double sup = 0.0;

  for (int i = 0; i < f.n(); ++i) {
    double acc = 0.0;
    double* jrow = want_jac ? jac.data() + static_cast<std::size_t>(i) * dim : nullptr;
    if (want_jac) {
      for (int k = 0; k < dim; ++k) jrow[k] = 0.0;
    }
    for (std::size_t t = flat.offsets[i]; t < flat.offsets[i + 1]; ++t) {
      const int* J = flat.exponents.data() + t * dim;
      const double c = flat.coefficients[t];
      double term = c;
      for (int k = 0; k < dim; ++k) {
        if (J[k] != 0) term = ar.mul(term, pw[k * stride + J[k]]);
      }
      acc = ar.add(acc, term);
      if (!want_jac) continue;
      for (int k = 0; k < dim; ++k) {
        if (J[k] == 0) continue;
        double dterm = ar.mul(c, ar.round(static_cast<double>(J[k])));
        for (int l = 0; l < dim; ++l) {
          const int e = (l == k) ? J[l] - 1 : J[l];
          if (e != 0) dterm = ar.mul(dterm, pw[l * stride + e]);
        }
        jrow[k] = ar.add(jrow[k], dterm);
      }
    }
    values[static_cast<std::size_t>(i)] = acc;
    const double a = acc < 0 ? -acc : acc;
    if (a > sup) sup = a;
  }
  return sup;
}

}  // namespace realrays
