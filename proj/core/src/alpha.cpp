#include "realrays/alpha.hpp"

#include <cmath>

namespace realrays {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_normalized(const PolynomialSystem& f, const char* where) {
  if (!(std::abs(f.norm() - 1.0) <= 1e-12)) {
    throw std::invalid_argument(std::string(where) + ": system must be normalized (||f|| = 1)");
  }
}

// Root of g in [lo, hi] with g(lo) > 0 > g(hi).
template <class F>
double bisect(F g, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TheoryConstants compute_constants() {
  TheoryConstants c{};
  double sigma = 0.0;
  for (int k = 0;; ++k) {
    const double term = std::ldexp(1.0, -(1 << std::min(k, 30)) + 1);
    if (term == 0.0 || sigma + term == sigma) break;
    sigma += term;
  }
  c.sigma = sigma;

  // psi is positive and decreasing on (0, 1 - sqrt2/2); both roots live there.
  const double upper = 1.0 - std::sqrt(2.0) / 2.0;
  c.nu_star = bisect([](double u) { return capital_psi(u, 4.0); }, 0.0, upper);
  c.nu_bullet = bisect([](double u) { return capital_psi(u, 6.0); }, 0.0, upper);
  c.alpha_star = c.nu_star / c.sigma;
  c.alpha_bullet = c.nu_bullet / c.sigma;

  // psi(u)^2 - 2u is 1 at u = 0 and negative at u = 0.2, decreasing between.
  c.alpha_0 = bisect([](double u) { return psi(u) * psi(u) - 2.0 * u; }, 0.0, 0.2);

  const double sa = c.sigma * c.alpha_0;
  c.s_0 = 1.0 / (c.sigma + (1.0 - sa) * (1.0 - sa) / psi(sa) * (1.0 + c.sigma / (1.0 - sa)));
  return c;
}

}  // namespace

double psi(double u) noexcept { return 1.0 - 4.0 * u + 2.0 * u * u; }

double capital_psi(double u, double slope) noexcept {
  return (3.0 - std::sqrt(7.0)) * (1.0 - u) * psi(u) - slope * u;
}

const TheoryConstants& theory_constants() {
  static const TheoryConstants constants = compute_constants();
  return constants;
}

std::vector<double> compute_M(const PolynomialSystem& f, const SpherePoint& x) {
  require_normalized(f, "compute_M");
  PointEvaluator<HostArithmetic> eval(HostArithmetic{}, f);
  eval(x.span());
  return {eval.M().begin(), eval.M().end()};
}

double sigma_min(std::span<const double> m, int n) {
  if (static_cast<int>(m.size()) != n * n) throw std::invalid_argument("sigma_min: matrix is not n x n");
  std::vector<double> work(m.begin(), m.end());
  return smallest_singular_value(HostArithmetic{}, std::span<double>(work), n);
}

PointData point_data(const PolynomialSystem& f, const SpherePoint& x) {
  require_normalized(f, "point_data");
  PointEvaluator<HostArithmetic> eval(HostArithmetic{}, f);
  const auto sample = eval(x.span());

  PointData pd;
  pd.M.assign(eval.M().begin(), eval.M().end());
  pd.sigma_min = sample.sigma_min;
  pd.f_sup = sample.f_sup;
  const double n = f.n();
  const double D = f.max_degree();
  const double half_d32 = 0.5 * std::pow(D, 1.5);

  if (pd.sigma_min > 0.0) {
    pd.mu_norm = std::sqrt(n) / pd.sigma_min;
    pd.beta_bar = pd.mu_norm * pd.f_sup;
    pd.gamma_bar = half_d32 * pd.mu_norm;
    pd.alpha_bar = pd.beta_bar * pd.gamma_bar;
  } else {
    // Singular tangent derivative: the point can never be certified.
    pd.mu_norm = kInf;
    pd.gamma_bar = kInf;
    pd.beta_bar = pd.f_sup == 0.0 ? 0.0 : kInf;
    pd.alpha_bar = kInf;
  }
  pd.exclusion_radius = std::min(pd.f_sup / std::sqrt(D), std::sqrt(2.0));
  return pd;
}

NewtonStep newton_step(const PolynomialSystem& f, const SpherePoint& x) {
  const int n = f.n();
  const int dim = f.dimension();
  PointEvaluator<HostArithmetic> eval(HostArithmetic{}, f);
  const auto sample = eval(x.span());
  if (!(sample.sigma_min > 0.0)) throw SingularJacobian("newton_step: singular tangent Jacobian");

  // A = diag(sqrt d_i) M = Df(x) H
  std::vector<double> a(eval.M().begin(), eval.M().end());
  for (int i = 0; i < n; ++i) {
    const double s = std::sqrt(static_cast<double>(f.degrees()[static_cast<std::size_t>(i)]));
    for (int c = 0; c < n; ++c) a[static_cast<std::size_t>(i) * n + c] *= s;
  }
  std::vector<double> w(eval.values().begin(), eval.values().end());
  if (!solve_qr_pivoted(a, n, w)) throw SingularJacobian("newton_step: singular tangent Jacobian");

  const auto h = tangent_basis(x);
  std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
  for (int r = 0; r < dim; ++r) {
    double s = 0.0;
    for (int c = 0; c < n; ++c) s += h[static_cast<std::size_t>(r) * n + c] * w[static_cast<std::size_t>(c)];
    v[static_cast<std::size_t>(r)] = -s;
  }
  // Remove the rounding residue along x so exp_map sees a tangent vector.
  double along = 0.0;
  for (int r = 0; r < dim; ++r) along += v[static_cast<std::size_t>(r)] * x[static_cast<std::size_t>(r)];
  double beta2 = 0.0;
  for (int r = 0; r < dim; ++r) {
    v[static_cast<std::size_t>(r)] -= along * x[static_cast<std::size_t>(r)];
    beta2 += v[static_cast<std::size_t>(r)] * v[static_cast<std::size_t>(r)];
  }
  return {exp_map(x, v), std::sqrt(beta2)};
}

bool satisfies_quadratic_envelope(std::span<const double> beta_trace, double slack) {
  if (beta_trace.empty()) return true;
  const double beta0 = beta_trace[0];
  for (std::size_t k = 1; k < beta_trace.size(); ++k) {
    const double exponent = std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(k, 60))) - 1.0;
    const double bound = std::ldexp(beta0, -static_cast<int>(std::min(exponent, 2000.0))) * slack;
    if (beta_trace[k] > bound) return false;
  }
  return true;
}

RefineResult newton_refine(const PolynomialSystem& f, const SpherePoint& x, int max_steps,
                           double beta_tol) {
  RefineResult out;
  out.point = x;
  for (int it = 0; it < max_steps; ++it) {
    NewtonStep step;
    try {
      step = newton_step(f, out.point);
    } catch (const SingularJacobian&) {
      out.singular = true;
      break;
    }
    out.beta_trace.push_back(step.beta);
    out.point = std::move(step.point);
    if (step.beta <= beta_tol) {
      out.converged = true;
      break;
    }
    ++out.steps;
  }
  out.envelope_satisfied = satisfies_quadratic_envelope(out.beta_trace);
  return out;
}

}  // namespace realrays
