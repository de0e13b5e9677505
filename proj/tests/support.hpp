#pragma once

// Helpers shared by the unit tests and the acceptance binary.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "realrays/polynomial.hpp"
#include "realrays/sphere.hpp"

namespace realrays::testing {

inline Polynomial make_poly(int num_variables, int degree, std::vector<Monomial> terms) {
  return Polynomial(num_variables, degree, std::move(terms));
}

inline PolynomialSystem make_system(std::vector<int> degrees, std::vector<std::vector<Monomial>> polys) {
  std::vector<Polynomial> ps;
  const int dim = static_cast<int>(degrees.size()) + 1;
  for (std::size_t i = 0; i < polys.size(); ++i) ps.emplace_back(dim, degrees[i], std::move(polys[i]));
  return PolynomialSystem(std::move(degrees), std::move(ps));
}

// All exponent vectors of total degree d in `dim` variables.
inline void exponents_of_degree(int dim, int d, std::vector<std::vector<int>>& out, std::vector<int>& cur,
                                int pos = 0) {
  if (pos == dim - 1) {
    cur[static_cast<std::size_t>(pos)] = d;
    out.push_back(cur);
    return;
  }
  for (int e = d; e >= 0; --e) {
    cur[static_cast<std::size_t>(pos)] = e;
    exponents_of_degree(dim, d - e, out, cur, pos + 1);
  }
}

inline std::vector<std::vector<int>> exponents_of_degree(int dim, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(dim), 0);
  exponents_of_degree(dim, d, out, cur);
  return out;
}

// Dense polynomial with coefficients drawn so that f is Gaussian for the
// Weyl inner product: c_J ~ N(0, multinomial(J)).
inline Polynomial random_polynomial(std::mt19937_64& rng, int dim, int degree) {
  std::normal_distribution<double> normal;
  std::vector<Monomial> terms;
  for (auto& e : exponents_of_degree(dim, degree)) {
    const double w = static_cast<double>(multinomial(e));
    terms.push_back({e, normal(rng) * std::sqrt(w)});
  }
  return Polynomial(dim, degree, std::move(terms));
}

inline PolynomialSystem random_system(std::mt19937_64& rng, int n, int max_degree) {
  std::uniform_int_distribution<int> deg(1, max_degree);
  std::vector<int> degrees;
  std::vector<Polynomial> polys;
  for (int i = 0; i < n; ++i) {
    degrees.push_back(deg(rng));
    polys.push_back(random_polynomial(rng, n + 1, degrees.back()));
  }
  return PolynomialSystem(std::move(degrees), std::move(polys));
}

inline SpherePoint random_point(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (double& c : v) c = normal(rng);
  return SpherePoint::normalize(v);
}

// Random orthogonal matrix (row-major) by Gram-Schmidt on a Gaussian matrix.
inline std::vector<double> random_orthogonal(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  std::vector<double> q(static_cast<std::size_t>(dim * dim));
  for (double& c : q) c = normal(rng);
  for (int r = 0; r < dim; ++r) {
    double* row = q.data() + static_cast<std::size_t>(r) * dim;
    for (int pass = 0; pass < 2; ++pass) {
      for (int p = 0; p < r; ++p) {
        const double* prev = q.data() + static_cast<std::size_t>(p) * dim;
        double d = 0.0;
        for (int c = 0; c < dim; ++c) d += row[c] * prev[c];
        for (int c = 0; c < dim; ++c) row[c] -= d * prev[c];
      }
    }
    double s = 0.0;
    for (int c = 0; c < dim; ++c) s += row[c] * row[c];
    s = std::sqrt(s);
    for (int c = 0; c < dim; ++c) row[c] /= s;
  }
  return q;
}

// g(x) = f(Q x), expanded symbolically.
inline Polynomial compose(const Polynomial& f, const std::vector<double>& q) {
  const int dim = f.num_variables();
  using Poly = std::map<std::vector<int>, double>;
  auto multiply = [dim](const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ea, ca] : a) {
      for (const auto& [eb, cb] : b) {
        std::vector<int> e(static_cast<std::size_t>(dim));
        for (int k = 0; k < dim; ++k) e[static_cast<std::size_t>(k)] = ea[static_cast<std::size_t>(k)] + eb[static_cast<std::size_t>(k)];
        out[e] += ca * cb;
      }
    }
    return out;
  };
  std::vector<Poly> rows(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    for (int l = 0; l < dim; ++l) {
      std::vector<int> e(static_cast<std::size_t>(dim), 0);
      e[static_cast<std::size_t>(l)] = 1;
      rows[static_cast<std::size_t>(k)][e] = q[static_cast<std::size_t>(k * dim + l)];
    }
  }
  Poly total;
  for (const auto& t : f.terms()) {
    Poly term{{std::vector<int>(static_cast<std::size_t>(dim), 0), t.coefficient}};
    for (int k = 0; k < dim; ++k) {
      for (int p = 0; p < t.exponents[static_cast<std::size_t>(k)]; ++p) term = multiply(term, rows[static_cast<std::size_t>(k)]);
    }
    for (const auto& [e, c] : term) total[e] += c;
  }
  std::vector<Monomial> terms;
  for (const auto& [e, c] : total) {
    if (c != 0.0) terms.push_back({e, c});
  }
  return Polynomial(dim, f.degree(), std::move(terms));
}

}  // namespace realrays::testing
