#include "realrays/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>

#include "proximity.hpp"

namespace realrays {

namespace {

using detail::UnionFind;
using detail::CoincidentGroups;
using detail::VertexTree;

// Above this distance error (about 12 significand bits and fewer) tree
// pruning is ineffective and rounded coordinates coincide often, so pair
// searches work on groups of equal points instead.
constexpr double kGroupingSlack = 0.05;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs body(chunk, begin, end) over `workers` contiguous index ranges.
// Callers merge per-chunk results in chunk order, so the outcome does not
// depend on the worker count.
template <class Body>
void parallel_chunks(std::uint64_t total, int workers, Body&& body) {
  const int chunks = std::max(1, workers);
  if (chunks == 1 || total < 2) {
    body(0, std::uint64_t{0}, total);
    for (int c = 1; c < chunks; ++c) body(c, total, total);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(chunks));
  for (int c = 0; c < chunks; ++c) {
    const std::uint64_t begin = total * static_cast<std::uint64_t>(c) / static_cast<std::uint64_t>(chunks);
    const std::uint64_t end = total * static_cast<std::uint64_t>(c + 1) / static_cast<std::uint64_t>(chunks);
    pool.emplace_back([&body, c, begin, end] { body(c, begin, end); });
  }
}


// Mode-dependent constants, each already rounded into the mode's arithmetic.
template <class Arith>
struct ModeTests {
  double n_d32;         // n D^{3/2}                    (rounded: A' test lhs factor)
  double alpha_test;    // alpha_star (exact) / alpha_bullet (rounded)
  double radius_scale;  // sigma sqrt n  / (3/2) sigma sqrt n

  int n_;

  ModeTests(const Arith& ar, int n, int D) : n_(n) {
    const auto& tc = theory_constants();
    const double sqrt_n = ar.sqrt(ar.round(static_cast<double>(n)));
    const double dd = ar.round(static_cast<double>(D));
    const double d32 = ar.mul(dd, ar.sqrt(dd));
    if constexpr (Arith::kRounded) {
      n_d32 = ar.mul(ar.round(static_cast<double>(n)), d32);
      alpha_test = ar.round(tc.alpha_bullet);
      radius_scale = ar.mul(ar.mul(1.5, ar.round(tc.sigma)), sqrt_n);
    } else {
      // alpha_bar < alpha_star  <=>  (n D^{3/2} / 2) f_sup < alpha_star sigma_min^2
      n_d32 = 0.5 * n * d32;
      alpha_test = tc.alpha_star;
      radius_scale = tc.sigma * sqrt_n;
    }
  }

  // Membership in A(f) (exact) or fl(A'(f)) (rounded).
  bool accepts(const Arith& ar, double f_sup, double sigma_min) const {
    if (!(sigma_min > 0.0)) return false;
    const double lhs = ar.mul(n_d32, f_sup);
    const double rhs = ar.mul(alpha_test, ar.mul(sigma_min, sigma_min));
    return lhs < rhs;
  }

  // False only when the residual alone rules the point out, whatever
  // sigma_min is.  For normalized f, sigma_min <= ||M||_F <= sqrt n; the
  // emulated computation gets a factor-2 allowance and is not prefiltered
  // at all below 10 bits.
  bool may_accept(const Arith& ar, double f_sup) const {
    double sigma2_max = 0.0;
    double slack = 1e-6;
    if constexpr (Arith::kRounded) {
      const double u = ar.context().unit();
      if (u > 0x1p-10) return true;
      sigma2_max = 4.0 * n_;
      slack = 32.0 * u;
    } else {
      (void)ar;
      sigma2_max = n_;
    }
    return n_d32 * f_sup * (1.0 - slack) < alpha_test * sigma2_max * (1.0 + slack);
  }

  double radius(const Arith& ar, double f_sup, double sigma_min) const {
    return ar.div(ar.mul(radius_scale, f_sup), sigma_min);
  }
};

template <class Arith>
double unit_roundoff(const Arith& ar) {
  if constexpr (Arith::kRounded) {
    return ar.context().unit();
  } else {
    (void)ar;
    return 0x1p-53;
  }
}

// Bound on how far a computed distance may fall below the true angle between
// the stored points, covering the rounded inner product and arccos.  Since
// the angle is at least the chord |x - y| (up to the norm error of the
// stored points, also covered), pairs farther apart than threshold + slack
// in the chord can be skipped.
template <class Arith>
double distance_slack(const Arith& ar, int dim) {
  const double u = unit_roundoff(ar);
  return 4.0 * std::sqrt(dim * u) + 8.0 * (dim + 1) * u;
}


struct ChunkResult {
  std::vector<Vertex> vertices;
  double min_excluded = kInf;
  std::uint64_t excluded = 0;
  double kappa_hat = 0.0;
};

template <class Arith>
ProximityGraph build_graph_impl(const Arith& ar, const PolynomialSystem& f, const CubeGridSpec& spec,
                                const EngineOptions& options, double kappa_floor) {
  const CubeGrid grid(spec, options.grid_cap);
  const int n = f.n();
  const int dim = f.dimension();
  const ModeTests<Arith> tests(ar, n, f.max_degree());
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  const int workers = std::max(1, options.workers);
  std::vector<ChunkResult> chunks(static_cast<std::size_t>(workers));

  // Only positive faces are evaluated.  With the tangent frame of x reused
  // at -x, M(-x) = diag(+-1) M(x) and f(-x) = +-f(x), so the antipode has
  // the same residual, sigma_min, test outcome and radius.
  parallel_chunks(grid.half_size(), workers, [&](int c, std::uint64_t begin, std::uint64_t end) {
    ChunkResult& out = chunks[static_cast<std::size_t>(c)];
    if (begin >= end) return;
    PointEvaluator<Arith> eval(ar, f);
    std::vector<double> y(static_cast<std::size_t>(dim));
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (std::uint64_t h = begin; h < end; ++h) {
      const std::uint64_t index = grid.positive_index(h);
      grid.point(index, y);
      double ss = 0.0;
      for (int i = 0; i < dim; ++i) {
        y[static_cast<std::size_t>(i)] = ar.round(y[static_cast<std::size_t>(i)]);
        ss = ar.add(ss, ar.mul(y[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(i)]));
      }
      const double len = ar.sqrt(ss);
      for (int i = 0; i < dim; ++i) x[static_cast<std::size_t>(i)] = ar.div(y[static_cast<std::size_t>(i)], len);

      // kappa_floor is a value the grid maximum is known to reach, so a
      // point with 1/f_sup at or below it cannot raise kappa_hat; if it also
      // cannot be a vertex, sigma_min is never needed.
      const double res = eval.residual(x);
      if (!tests.may_accept(ar, res) && res > 0.0 && 1.0 / res <= std::max(kappa_floor, out.kappa_hat)) {
        out.min_excluded = std::min(out.min_excluded, res);
        ++out.excluded;
        continue;
      }
      const auto s = eval(x);
      const double mu = s.sigma_min > 0.0 ? sqrt_n / s.sigma_min : kInf;
      const double inv_res = s.f_sup > 0.0 ? 1.0 / s.f_sup : kInf;
      out.kappa_hat = std::max(out.kappa_hat, std::min(mu, inv_res));

      if (tests.accepts(ar, s.f_sup, s.sigma_min)) {
        Vertex v;
        v.grid_index = index;
        v.x = x;
        v.radius = tests.radius(ar, s.f_sup, s.sigma_min);
        v.f_sup = s.f_sup;
        v.sigma_min = s.sigma_min;
        out.vertices.push_back(std::move(v));
      } else {
        out.min_excluded = std::min(out.min_excluded, s.f_sup);
        ++out.excluded;
      }
    }
  });

  ProximityGraph g;
  g.spec = spec;
  g.kappa_hat = kappa_floor;
  g.grid_size = grid.size();
  for (auto& c : chunks) {
    g.min_excluded_fsup = std::min(g.min_excluded_fsup, c.min_excluded);
    g.excluded_count += 2 * c.excluded;
    g.kappa_hat = std::max(g.kappa_hat, c.kappa_hat);
    for (auto& v : c.vertices) {
      Vertex mirror = v;
      mirror.grid_index = grid.antipode(v.grid_index);
      for (double& e : mirror.x) e = -e;
      g.vertices.push_back(std::move(v));
      g.vertices.push_back(std::move(mirror));
    }
  }
  std::sort(g.vertices.begin(), g.vertices.end(),
            [](const Vertex& a, const Vertex& b) { return a.grid_index < b.grid_index; });

  // Closed caps of radii r_x, r_y (r_x + r_y < pi) meet iff d(x,y) <= r_x + r_y.
  // Only a spanning forest is kept; pairs already joined are not tested.
  UnionFind uf(g.vertices.size());
  const double slack = distance_slack(ar, dim);
  if (slack < kGroupingSlack) {
    VertexTree(g.vertices).connect(ar, slack, unit_roundoff(ar), uf, g.edges);
  } else {
    CoincidentGroups(g.vertices).connect(ar, uf, g.edges);
  }
  return g;
}

template <class Arith>
HaltCheck check_halt_impl(const Arith& ar, const ProximityGraph& graph, const ComponentSet& components,
                          int max_degree) {
  const int n = graph.spec.n;
  const double eta = graph.spec.eta();
  const double pi = ar.round(std::numbers::pi);
  const double sqrt_dim = ar.sqrt(ar.round(static_cast<double>(n + 1)));
  const double sqrt_dim_d = ar.sqrt(ar.round(static_cast<double>((n + 1) * max_degree)));

  HaltCheck hc;
  if constexpr (Arith::kRounded) {
    // fl((3/2) pi eta sqrt(n+1)) and fl((sqrt2/2) pi eta sqrt((n+1)D) ||f||), ||f|| = 1
    hc.distance_threshold = ar.mul(ar.mul(ar.mul(1.5, pi), eta), sqrt_dim);
    const double half_sqrt2 = ar.div(ar.sqrt(2.0), 2.0);
    hc.residual_threshold = ar.mul(ar.mul(ar.mul(half_sqrt2, pi), eta), sqrt_dim_d);
  } else {
    hc.distance_threshold = pi * eta * sqrt_dim;
    hc.residual_threshold = 0.5 * pi * eta * sqrt_dim_d;
  }

  // (i) closest cross-component pair.
  const auto& vs = graph.vertices;
  if (!vs.empty()) {
    const double slack = distance_slack(ar, static_cast<int>(vs[0].x.size()));
    hc.min_intercomponent_distance = slack < kGroupingSlack
                                         ? VertexTree(vs).min_cross_distance(ar, components.component_of, slack)
                                         : CoincidentGroups(vs).min_cross_distance(ar, components.component_of);
  }
  hc.condition_i = hc.min_intercomponent_distance > hc.distance_threshold;

  // (ii)
  hc.min_excluded_fsup = graph.min_excluded_fsup;
  hc.condition_ii = graph.min_excluded_fsup > hc.residual_threshold;
  return hc;
}

template <class F>
decltype(auto) with_arithmetic(const ArithmeticMode& mode, F&& fn) {
  if (mode.is_rounded()) return fn(RoundedArithmetic(mode.context()));
  return fn(HostArithmetic{});
}

}  // namespace

std::string ArithmeticMode::name() const {
  return is_rounded() ? "rounded(t=" + std::to_string(ctx_->bits()) + ")" : "exact";
}

ProximityGraph build_graph(const PolynomialSystem& f, const CubeGridSpec& spec, const ArithmeticMode& mode,
                           const EngineOptions& options, double kappa_floor) {
  if (spec.n != f.n()) throw std::invalid_argument("build_graph: grid dimension does not match system");
  if (!(std::abs(f.norm() - 1.0) <= 1e-12)) {
    throw std::invalid_argument("build_graph: system must be normalized (||f|| = 1)");
  }
  if (mode.is_rounded()) {
    const PolynomialSystem rounded = round_coefficients(f, mode.context());
    return build_graph_impl(RoundedArithmetic(mode.context()), rounded, spec, options, kappa_floor);
  }
  return build_graph_impl(HostArithmetic{}, f, spec, options, kappa_floor);
}

ComponentSet connected_components(const ProximityGraph& graph) {
  const std::size_t nv = graph.vertices.size();
  UnionFind uf(nv);
  for (const auto& [a, b] : graph.edges) uf.unite(a, b);
  ComponentSet cs;
  cs.component_of.resize(nv);
  std::vector<int> id_of_root(nv, -1);
  for (std::size_t v = 0; v < nv; ++v) {
    const std::uint32_t root = uf.find(static_cast<std::uint32_t>(v));
    if (id_of_root[root] < 0) {
      id_of_root[root] = cs.count();
      cs.representatives.push_back(static_cast<int>(v));
    }
    cs.component_of[v] = id_of_root[root];
  }
  return cs;
}

HaltCheck check_halt(const ProximityGraph& graph, const ComponentSet& components, const ArithmeticMode& mode,
                     int max_degree) {
  return with_arithmetic(mode, [&](const auto& ar) { return check_halt_impl(ar, graph, components, max_degree); });
}

int initial_level(int n) {
  const double eta0 = 2.0 * std::numbers::sqrt2 / (std::numbers::pi * std::sqrt(static_cast<double>(n + 1)));
  int k = 1;
  while (std::ldexp(1.0, -k) > eta0) ++k;
  return k;
}

std::string to_string(CountStatus status) {
  return status == CountStatus::Converged ? "converged" : "iteration-cap-reached";
}

CountResult count_roots(const PolynomialSystem& f, const CountOptions& options) {
  if (options.max_iterations < 1) throw std::invalid_argument("count_roots: max_iterations must be >= 1");
  CountResult result;
  result.original_norm = f.norm();
  const PolynomialSystem unit = f.normalized();

  const int k0 = initial_level(f.n());
  for (int it = 0; it < options.max_iterations; ++it) {
    const CubeGridSpec spec{f.n(), k0 + it};
    ProximityGraph graph;
    try {
      // Grids nest, so the previous level's kappa_hat is reached here too.
      graph = build_graph(unit, spec, options.mode, options.engine, result.kappa_lower_bound);
    } catch (const GridTooLarge&) {
      if (it == 0) throw;
      result.grid_cap_hit = true;
      break;
    }
    const ComponentSet comps = connected_components(graph);
    const HaltCheck halt = check_halt(graph, comps, options.mode, f.max_degree());

    IterationReport rep;
    rep.k = spec.k;
    rep.eta = spec.eta();
    rep.grid_size = graph.grid_size;
    rep.vertex_count = graph.vertices.size();
    rep.component_count = comps.count();
    rep.condition_i_pass = halt.condition_i;
    rep.condition_ii_pass = halt.condition_ii;
    rep.min_intercomponent_distance = halt.min_intercomponent_distance;
    rep.min_excluded_fsup = halt.min_excluded_fsup;
    result.iterations.push_back(rep);
    result.kappa_lower_bound = graph.kappa_hat;
    if (options.on_iteration) options.on_iteration(rep);

    if (!halt.halts()) continue;

    if (comps.count() % 2 != 0) {
      throw std::logic_error("count_roots: odd number of components (" + std::to_string(comps.count()) +
                             ") at halt; antipodal symmetry is broken");
    }
    result.status = CountStatus::Converged;
    result.count = static_cast<std::uint64_t>(comps.count() / 2);

    const CubeGrid grid(spec, options.engine.grid_cap);
    std::vector<double> y(static_cast<std::size_t>(f.dimension()));
    for (int rep_vertex : comps.representatives) {
      grid.point(graph.vertices[static_cast<std::size_t>(rep_vertex)].grid_index, y);
      const SpherePoint start = project(y);
      const RefineResult refined = newton_refine(unit, start, options.refine_max_steps, options.refine_beta_tol);
      ComponentZero z;
      z.representative = start.coords();
      z.zero = refined.point.coords();
      z.beta = refined.beta_trace.empty() ? 0.0 : refined.beta_trace.back();
      z.beta_trace = refined.beta_trace;
      z.envelope_satisfied = refined.envelope_satisfied;
      z.refined = !refined.singular;
      result.components.push_back(std::move(z));
    }
    return result;
  }
  result.status = CountStatus::IterationCapReached;
  return result;
}

double estimate_kappa(const PolynomialSystem& f, const CubeGridSpec& spec, const EngineOptions& options) {
  const PolynomialSystem unit = f.normalized();
  return build_graph(unit, spec, ArithmeticMode::exact(), options).kappa_hat;
}

}  // namespace realrays
