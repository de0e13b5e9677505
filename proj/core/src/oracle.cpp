#include "realrays/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <utility>

#include "realrays/alpha.hpp"
#include "realrays/counting.hpp"

namespace realrays::oracle {

namespace {

int sign_of(const mpq_class& q) { return sgn(q); }

int sign_variations(const std::vector<int>& signs) {
  int count = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

// Sign of p at +inf (positive_side) or -inf.
int sign_at_infinity(const RationalPolynomial& p, bool positive_side) {
  if (p.is_zero()) return 0;
  const int s = sign_of(p.leading());
  return (positive_side || p.degree() % 2 == 0) ? s : -s;
}

using SparsePoly = std::map<std::vector<int>, mpq_class>;

SparsePoly multiply(const SparsePoly& a, const SparsePoly& b) {
  SparsePoly out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      out[e] += ca * cb;
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

SparsePoly linear_poly(const std::vector<mpq_class>& coeffs) {
  SparsePoly p;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0) continue;
    std::vector<int> e(coeffs.size(), 0);
    e[k] = 1;
    p[e] = coeffs[k];
  }
  return p;
}

double to_double(const mpq_class& q) { return q.get_d(); }

double norm_d(const std::vector<mpq_class>& v) {
  double s = 0.0;
  for (const auto& c : v) s += to_double(c) * to_double(c);
  return std::sqrt(s);
}

mpq_class dot(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
  mpq_class s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Rank of a rational matrix by Gaussian elimination.
int rank_of(std::vector<std::vector<mpq_class>> m) {
  const std::size_t rows = m.size();
  if (rows == 0) return 0;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      const mpq_class f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

RationalPolynomial poly_from_ints(std::initializer_list<long> cs) {
  std::vector<mpq_class> v;
  for (long c : cs) v.emplace_back(c);
  return RationalPolynomial(std::move(v));
}

}  // namespace

RationalPolynomial::RationalPolynomial(std::vector<mpq_class> coefficients) : coeffs_(std::move(coefficients)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

void RationalPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

mpq_class RationalPolynomial::operator()(const mpq_class& t) const {
  mpq_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

RationalPolynomial RationalPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<mpq_class> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<long>(i);
  return RationalPolynomial(std::move(d));
}

RationalPolynomial RationalPolynomial::operator*(const RationalPolynomial& other) const {
  if (is_zero() || other.is_zero()) return {};
  std::vector<mpq_class> out(coeffs_.size() + other.coeffs_.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * other.coeffs_[j];
  }
  return RationalPolynomial(std::move(out));
}

RationalPolynomial RationalPolynomial::operator-() const {
  RationalPolynomial out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

void RationalPolynomial::divide(const RationalPolynomial& num, const RationalPolynomial& den,
                                RationalPolynomial& quotient, RationalPolynomial& remainder) {
  if (den.is_zero()) throw std::invalid_argument("RationalPolynomial::divide: zero divisor");
  std::vector<mpq_class> rem = num.coeffs_;
  const int dd = den.degree();
  std::vector<mpq_class> quo(static_cast<std::size_t>(std::max(0, num.degree() - dd + 1)), mpq_class(0));
  for (int i = num.degree(); i >= dd; --i) {
    const mpq_class f = rem[static_cast<std::size_t>(i)] / den.leading();
    if (f == 0) continue;
    quo[static_cast<std::size_t>(i - dd)] = f;
    for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(i - dd + j)] -= f * den.coeffs_[static_cast<std::size_t>(j)];
  }
  quotient = RationalPolynomial(std::move(quo));
  if (static_cast<int>(rem.size()) > dd) rem.resize(static_cast<std::size_t>(std::max(dd, 0)));
  remainder = RationalPolynomial(std::move(rem));
}

RationalPolynomial RationalPolynomial::gcd(RationalPolynomial a, RationalPolynomial b) {
  while (!b.is_zero()) {
    RationalPolynomial q;
    RationalPolynomial r;
    divide(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  const mpq_class lead = a.leading();
  for (auto& c : a.coeffs_) c /= lead;
  return a;
}

RationalPolynomial RationalPolynomial::square_free_part() const {
  if (degree() <= 0) return *this;
  const RationalPolynomial g = gcd(*this, derivative());
  RationalPolynomial q;
  RationalPolynomial r;
  divide(*this, g, q, r);
  return q;
}

std::vector<RationalPolynomial> sturm_sequence(const RationalPolynomial& p) {
  std::vector<RationalPolynomial> seq;
  if (p.is_zero()) return seq;
  seq.push_back(p);
  RationalPolynomial d = p.derivative();
  if (d.is_zero()) return seq;
  seq.push_back(d);
  while (true) {
    RationalPolynomial q;
    RationalPolynomial r;
    RationalPolynomial::divide(seq[seq.size() - 2], seq.back(), q, r);
    if (r.is_zero()) break;
    seq.push_back(-r);
  }
  return seq;
}

int count_real_roots(const RationalPolynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("count_real_roots: zero polynomial");
  const auto seq = sturm_sequence(p.square_free_part());
  std::vector<int> lo;
  std::vector<int> hi;
  for (const auto& s : seq) {
    lo.push_back(sign_at_infinity(s, false));
    hi.push_back(sign_at_infinity(s, true));
  }
  return sign_variations(lo) - sign_variations(hi);
}

RationalPolynomial BinaryForm::dehomogenized() const { return RationalPolynomial(coefficients); }

PolynomialSystem BinaryForm::to_system() const {
  std::vector<Monomial> terms;
  for (int j = 0; j <= degree; ++j) {
    const mpq_class& c = coefficients[static_cast<std::size_t>(j)];
    if (c == 0) continue;
    terms.push_back(Monomial{{degree - j, j}, to_double(c)});
  }
  std::vector<Polynomial> polys;
  polys.emplace_back(2, degree, std::move(terms));
  return PolynomialSystem({degree}, std::move(polys));
}

int binary_form_ray_count(const BinaryForm& p) {
  const RationalPolynomial q = p.dehomogenized();
  if (q.is_zero()) throw std::invalid_argument("binary_form_ray_count: zero form");
  // p(0,1) = a_d; the ray (0,1) is a zero exactly when the t-degree drops.
  const bool ray_at_infinity = q.degree() < p.degree;
  return (q.degree() > 0 ? count_real_roots(q) : 0) + (ray_at_infinity ? 1 : 0);
}

bool has_simple_rays(const BinaryForm& p) {
  const RationalPolynomial q = p.dehomogenized();
  if (q.is_zero()) return false;
  if (p.degree - q.degree() > 1) return false;
  if (q.degree() <= 1) return true;
  return RationalPolynomial::gcd(q, q.derivative()).degree() == 0;
}

BinaryForm random_binary_form(int degree, std::uint64_t seed, int coefficient_bound) {
  if (degree < 1) throw std::invalid_argument("random_binary_form: degree must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coef(-coefficient_bound, coefficient_bound);
  std::bernoulli_distribution quadratic(0.4);

  RationalPolynomial product = poly_from_ints({1});
  int remaining = degree;
  while (remaining > 0) {
    const int fd = (remaining >= 2 && quadratic(rng)) ? 2 : 1;
    // Coefficient j multiplies X0^{fd-j} X1^j.  Factors through X0 or X1
    // are allowed; repeated rays are screened out by has_simple_rays.
    RationalPolynomial factor;
    while (factor.is_zero()) {
      std::vector<mpq_class> c;
      for (int j = 0; j <= fd; ++j) c.emplace_back(coef(rng));
      factor = RationalPolynomial(c);
    }
    // Pad to the nominal degree: trailing zero coefficients are dropped by
    // the dense representation but belong to the form.
    std::vector<mpq_class> padded = factor.coefficients();
    padded.resize(static_cast<std::size_t>(fd + 1), mpq_class(0));
    std::vector<mpq_class> prod(product.coefficients().size() + padded.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < product.coefficients().size(); ++i) {
      for (std::size_t j = 0; j < padded.size(); ++j) prod[i + j] += product.coefficients()[i] * padded[j];
    }
    product = RationalPolynomial(prod);
    remaining -= fd;
  }
  BinaryForm out;
  out.degree = degree;
  out.coefficients = product.coefficients();
  out.coefficients.resize(static_cast<std::size_t>(degree + 1), mpq_class(0));
  return out;
}

mpq_class evaluate(const RationalPoly& p, const std::vector<mpq_class>& x) {
  mpq_class acc = 0;
  for (const auto& t : p) {
    mpq_class term = t.coefficient;
    for (std::size_t k = 0; k < x.size(); ++k) {
      for (int e = 0; e < t.exponents[k]; ++e) term *= x[k];
    }
    acc += term;
  }
  return acc;
}

std::vector<mpq_class> kernel_vector(const std::vector<std::vector<mpq_class>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) return {};
  const std::size_t cols = rows[0].size();
  if (cols != n + 1) throw std::invalid_argument("kernel_vector: expected n x (n+1) matrix");
  // Reduced row echelon form.
  auto m = rows;
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < n; ++c) {
    std::size_t piv = r;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) continue;
    std::swap(m[piv], m[r]);
    const mpq_class lead = m[r][c];
    for (auto& v : m[r]) v /= lead;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const mpq_class f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  if (r < n) return {};
  std::size_t free_col = 0;
  while (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(free_col)) != pivot_col.end()) ++free_col;
  std::vector<mpq_class> v(cols, mpq_class(0));
  v[free_col] = 1;
  for (std::size_t i = 0; i < n; ++i) v[static_cast<std::size_t>(pivot_col[i])] = -m[i][free_col];

  // Scale to a primitive integer vector with positive first nonzero entry.
  mpz_class den = 1;
  for (const auto& c : v) den = lcm(den, c.get_den());
  mpz_class g = 0;
  for (auto& c : v) {
    c *= den;
    g = gcd(g, c.get_num());
  }
  for (auto& c : v) c /= g;
  const auto first = std::find_if(v.begin(), v.end(), [](const mpq_class& c) { return c != 0; });
  if (first != v.end() && *first < 0) {
    for (auto& c : v) c = -c;
  }
  return v;
}

LinearProductSystem make_linear_product_system(int n, const std::vector<int>& degrees, std::uint64_t seed,
                                               const LinearProductOptions& options) {
  if (n < 2) throw std::invalid_argument("make_linear_product_system: n must be >= 2");
  if (static_cast<int>(degrees.size()) != n) throw std::invalid_argument("make_linear_product_system: need n degrees");
  for (int d : degrees) {
    if (d < 1) throw std::invalid_argument("make_linear_product_system: degrees must be positive");
  }
  const int dim = n + 1;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coef(-options.coefficient_bound, options.coefficient_bound);

  for (int attempt = 0; attempt < options.max_retries; ++attempt) {
    LinearProductSystem out;
    out.forms.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < degrees[static_cast<std::size_t>(i)]; ++j) {
        std::vector<mpq_class> l(static_cast<std::size_t>(dim));
        bool nonzero = false;
        for (auto& c : l) {
          c = coef(rng);
          nonzero = nonzero || c != 0;
        }
        if (!nonzero) l[0] = 1;
        out.forms[static_cast<std::size_t>(i)].push_back(std::move(l));
      }
    }

    // Enumerate choice tuples (j_1, ..., j_n).
    bool ok = true;
    std::vector<int> choice(static_cast<std::size_t>(n), 0);
    while (ok) {
      std::vector<std::vector<mpq_class>> rows;
      for (int i = 0; i < n; ++i) {
        rows.push_back(out.forms[static_cast<std::size_t>(i)][static_cast<std::size_t>(choice[static_cast<std::size_t>(i)])]);
      }
      auto ray = kernel_vector(rows);
      if (ray.empty()) {
        ok = false;
        break;
      }
      // A ray on a second factor of the same equation is a singular zero.
      for (int i = 0; i < n && ok; ++i) {
        for (int j = 0; j < degrees[static_cast<std::size_t>(i)]; ++j) {
          if (j == choice[static_cast<std::size_t>(i)]) continue;
          const auto& l = out.forms[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          const mpq_class v = dot(l, ray);
          if (v == 0 || std::abs(to_double(v)) < options.min_factor_residual * norm_d(l) * norm_d(ray)) {
            ok = false;
            break;
          }
        }
      }
      if (!ok) break;
      for (const auto& other : out.rays) {
        if (other == ray) {
          ok = false;
          break;
        }
        const double c = std::abs(to_double(dot(other, ray))) / (norm_d(other) * norm_d(ray));
        if (std::acos(std::min(1.0, c)) < options.min_ray_angle) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      out.rays.push_back(std::move(ray));

      int pos = n - 1;
      while (pos >= 0 && ++choice[static_cast<std::size_t>(pos)] == degrees[static_cast<std::size_t>(pos)]) {
        choice[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
    if (!ok) continue;

    std::vector<Polynomial> polys;
    for (int i = 0; i < n; ++i) {
      SparsePoly p;
      p[std::vector<int>(static_cast<std::size_t>(dim), 0)] = 1;
      for (const auto& l : out.forms[static_cast<std::size_t>(i)]) p = multiply(p, linear_poly(l));
      RationalPoly exact;
      std::vector<Monomial> terms;
      for (const auto& [e, c] : p) {
        exact.push_back({e, c});
        terms.push_back(Monomial{e, to_double(c)});
      }
      out.exact_polys.push_back(std::move(exact));
      polys.emplace_back(dim, degrees[static_cast<std::size_t>(i)], std::move(terms));
    }
    out.system = PolynomialSystem(degrees, std::move(polys));
    out.known_count = out.rays.size();
    return out;
  }
  throw SeedExhausted("make_linear_product_system: no admissible system after " +
                      std::to_string(options.max_retries) + " attempts");
}

bool verify_zero(const PolynomialSystem& f, const SpherePoint& z, double tol) {
  const PolynomialSystem unit = f.normalized();
  const auto pd = point_data(unit, z);
  return pd.f_sup <= tol && pd.sigma_min > tol;
}

bool verify_zero_exact(const std::vector<RationalPoly>& f, const std::vector<mpq_class>& z) {
  for (const auto& p : f) {
    if (evaluate(p, z) != 0) return false;
  }
  // Euler's identity puts z in ker Df(z); full rank n means the restriction
  // to the orthogonal complement is invertible.
  std::vector<std::vector<mpq_class>> jac;
  for (const auto& p : f) {
    std::vector<mpq_class> row(z.size(), mpq_class(0));
    for (const auto& t : p) {
      for (std::size_t k = 0; k < z.size(); ++k) {
        if (t.exponents[k] == 0) continue;
        mpq_class term = t.coefficient * t.exponents[k];
        for (std::size_t l = 0; l < z.size(); ++l) {
          const int e = t.exponents[l] - (l == k ? 1 : 0);
          for (int r = 0; r < e; ++r) term *= z[l];
        }
        row[k] += term;
      }
    }
    jac.push_back(std::move(row));
  }
  return rank_of(std::move(jac)) == static_cast<int>(f.size());
}

std::vector<SuiteCase> univariate_suite(int size, double kappa_max) {
  std::vector<SuiteCase> out;
  for (std::uint64_t seed = 1; static_cast<int>(out.size()) < size; ++seed) {
    const int degree = 1 + static_cast<int>(seed % 6);
    const BinaryForm form = random_binary_form(degree, seed);
    if (!has_simple_rays(form)) continue;
    const PolynomialSystem f = form.to_system();
    if (!(estimate_kappa(f, CubeGridSpec{1, kScreeningLevel}) <= kappa_max)) continue;
    out.push_back({"binary-d" + std::to_string(degree) + "-s" + std::to_string(seed), f,
                   static_cast<std::uint64_t>(binary_form_ray_count(form))});
  }
  return out;
}

std::vector<SuiteCase> multivariate_suite(int size) {
  static constexpr int kShapes[][2] = {{1, 1}, {2, 1}, {1, 2}, {2, 2}, {3, 1}, {1, 3}, {3, 2}, {2, 3}, {3, 3}};
  std::vector<SuiteCase> out;
  for (int i = 0; i < size; ++i) {
    const auto& shape = kShapes[i % 9];
    const std::vector<int> degrees = {shape[0], shape[1]};
    const auto seed = static_cast<std::uint64_t>(i + 1);
    LinearProductSystem lp = make_linear_product_system(2, degrees, seed);
    out.push_back({"linprod-" + std::to_string(shape[0]) + std::to_string(shape[1]) + "-s" + std::to_string(seed),
                   std::move(lp.system), lp.known_count});
  }
  return out;
}

}  // namespace realrays::oracle
