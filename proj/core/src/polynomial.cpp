#include "realrays/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace realrays {

namespace {

std::string describe(const Monomial& m) {
  std::ostringstream os;
  os << m.coefficient << "*X^(";
  for (std::size_t k = 0; k < m.exponents.size(); ++k) {
    if (k) os << ',';
    os << m.exponents[k];
  }
  os << ')';
  return os.str();
}

}  // namespace

int Monomial::total_degree() const noexcept {
  return std::accumulate(exponents.begin(), exponents.end(), 0);
}

std::uint64_t multinomial(std::span<const int> exponents) {
  // Product of binomials C(J_0 + ... + J_k, J_k).
  std::uint64_t result = 1;
  std::uint64_t running = 0;
  for (int e : exponents) {
    if (e < 0) throw std::invalid_argument("multinomial: negative exponent");
    std::uint64_t binom = 1;
    for (std::uint64_t j = 1; j <= static_cast<std::uint64_t>(e); ++j) {
      binom = binom * (running + j) / j;  // C(running + j, j), exact
    }
    running += static_cast<std::uint64_t>(e);
    result *= binom;
  }
  return result;
}

Polynomial::Polynomial(int num_variables, int degree, std::vector<Monomial> terms)
    : num_variables_(num_variables), degree_(degree), terms_(std::move(terms)) {
  if (num_variables < 1) throw InputError("polynomial must have at least one variable");
  if (degree < 0) throw InputError("polynomial degree must be nonnegative");
  for (const auto& m : terms_) {
    if (static_cast<int>(m.exponents.size()) != num_variables) {
      throw InputError("monomial " + describe(m) + " has " + std::to_string(m.exponents.size()) +
                       " exponents, expected " + std::to_string(num_variables));
    }
    for (int e : m.exponents) {
      if (e < 0) throw InputError("negative exponent in monomial " + describe(m));
    }
    if (m.total_degree() != degree) {
      throw InputError("homogeneity violation: monomial " + describe(m) + " has degree " +
                       std::to_string(m.total_degree()) + ", expected " + std::to_string(degree));
    }
    if (!std::isfinite(m.coefficient)) {
      throw InputError("non-finite coefficient in monomial " + describe(m));
    }
  }
  std::sort(terms_.begin(), terms_.end(),
            [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; });
  for (std::size_t t = 1; t < terms_.size(); ++t) {
    if (terms_[t].exponents == terms_[t - 1].exponents) {
      throw InputError("duplicate monomial " + describe(terms_[t]));
    }
  }
  std::erase_if(terms_, [](const Monomial& m) { return m.coefficient == 0.0; });
  weights_.reserve(terms_.size());
  for (const auto& m : terms_) weights_.push_back(static_cast<double>(multinomial(m.exponents)));
}

Polynomial Polynomial::scaled(double factor) const {
  Polynomial out = *this;
  for (auto& m : out.terms_) m.coefficient *= factor;
  if (factor == 0.0) {
    out.terms_.clear();
    out.weights_.clear();
  }
  return out;
}

double weyl_inner(const Polynomial& g, const Polynomial& h) {
  if (g.degree() != h.degree() || g.num_variables() != h.num_variables()) {
    throw std::invalid_argument("weyl_inner: polynomials live in different spaces");
  }
  // Both term lists are sorted; merge.
  double acc = 0.0;
  std::size_t a = 0;
  std::size_t b = 0;
  const auto& gt = g.terms();
  const auto& ht = h.terms();
  while (a < gt.size() && b < ht.size()) {
    if (gt[a].exponents < ht[b].exponents) {
      ++a;
    } else if (ht[b].exponents < gt[a].exponents) {
      ++b;
    } else {
      acc += gt[a].coefficient * ht[b].coefficient / g.weights()[a];
      ++a;
      ++b;
    }
  }
  return acc;
}

double weyl_norm(const Polynomial& g) {
  double acc = 0.0;
  for (std::size_t t = 0; t < g.size(); ++t) {
    const double c = g.terms()[t].coefficient;
    acc += c * c / g.weights()[t];
  }
  return std::sqrt(acc);
}

PolynomialSystem::PolynomialSystem(std::vector<int> degrees, std::vector<Polynomial> polys)
    : degrees_(std::move(degrees)), polys_(std::move(polys)) {
  if (polys_.empty()) throw InputError("system must contain at least one polynomial (n >= 1)");
  if (degrees_.size() != polys_.size()) {
    throw InputError("degrees has " + std::to_string(degrees_.size()) + " entries but there are " +
                     std::to_string(polys_.size()) + " polynomials");
  }
  const int dim = static_cast<int>(polys_.size()) + 1;
  for (std::size_t i = 0; i < polys_.size(); ++i) {
    if (degrees_[i] < 1) {
      throw InputError("degree of polynomial " + std::to_string(i) + " must be positive");
    }
    if (polys_[i].num_variables() != dim || polys_[i].degree() != degrees_[i]) {
      throw InputError("polynomial " + std::to_string(i) + " does not match declared degree " +
                       std::to_string(degrees_[i]) + " in " + std::to_string(dim) + " variables");
    }
    if (polys_[i].size() == 0) {
      throw InputError("polynomial " + std::to_string(i) + " is identically zero");
    }
  }
  build_cache();
}

void PolynomialSystem::build_cache() {
  max_degree_ = *std::max_element(degrees_.begin(), degrees_.end());
  max_terms_ = 0;
  norm_ = 0.0;
  flat_ = Flat{};
  flat_.offsets.push_back(0);
  for (const auto& p : polys_) {
    max_terms_ = std::max(max_terms_, static_cast<int>(p.size()));
    norm_ = std::max(norm_, weyl_norm(p));
    for (const auto& m : p.terms()) {
      flat_.exponents.insert(flat_.exponents.end(), m.exponents.begin(), m.exponents.end());
      flat_.coefficients.push_back(m.coefficient);
    }
    flat_.offsets.push_back(flat_.coefficients.size());
  }
}

PolynomialSystem PolynomialSystem::normalized() const {
  std::vector<Polynomial> scaled;
  scaled.reserve(polys_.size());
  for (const auto& p : polys_) scaled.push_back(p.scaled(1.0 / norm_));
  return PolynomialSystem(degrees_, std::move(scaled));
}

PolynomialSystem round_coefficients(const PolynomialSystem& f, const PrecisionContext& ctx) {
  std::vector<Polynomial> polys;
  polys.reserve(f.polys().size());
  for (const auto& p : f.polys()) {
    auto terms = p.terms();
    for (auto& m : terms) m.coefficient = round_value(ctx, m.coefficient);
    polys.emplace_back(p.num_variables(), p.degree(), std::move(terms));
  }
  return PolynomialSystem(f.degrees(), std::move(polys));
}

Evaluation evaluate(const PolynomialSystem& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.dimension()) {
    throw std::invalid_argument("evaluate: point has wrong dimension");
  }
  Evaluation out;
  out.values.assign(static_cast<std::size_t>(f.n()), 0.0);
  EvalScratch scratch;
  out.sup_norm = evaluate_into(HostArithmetic{}, f, x, out.values, {}, scratch);
  return out;
}

std::vector<double> jacobian(const PolynomialSystem& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.dimension()) {
    throw std::invalid_argument("jacobian: point has wrong dimension");
  }
  std::vector<double> values(static_cast<std::size_t>(f.n()));
  std::vector<double> jac(static_cast<std::size_t>(f.n()) * f.dimension());
  EvalScratch scratch;
  evaluate_into(HostArithmetic{}, f, x, values, jac, scratch);
  return jac;
}

}  // namespace realrays
