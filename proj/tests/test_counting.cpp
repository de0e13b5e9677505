#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "proximity.hpp"
#include "realrays/counting.hpp"
#include "support.hpp"

using namespace realrays;
using realrays::testing::make_system;

namespace {

using Edges = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// Canonical labels: components numbered by their smallest member.
template <class Arith>
std::vector<int> brute_force_labels(const Arith& ar, const std::vector<Vertex>& vs) {
  detail::UnionFind uf(vs.size());
  for (std::size_t a = 0; a < vs.size(); ++a) {
    for (std::size_t b = a + 1; b < vs.size(); ++b) {
      if (distance_with(ar, vs[a].x, vs[b].x) <= ar.add(vs[a].radius, vs[b].radius)) {
        uf.unite(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
      }
    }
  }
  std::vector<int> label(vs.size());
  std::vector<int> id(vs.size(), -1);
  int next = 0;
  for (std::size_t v = 0; v < vs.size(); ++v) {
    auto r = uf.find(static_cast<std::uint32_t>(v));
    if (id[r] < 0) id[r] = next++;
    label[v] = id[r];
  }
  return label;
}

template <class Arith>
double brute_force_cross(const Arith& ar, const std::vector<Vertex>& vs, const std::vector<int>& label) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < vs.size(); ++a) {
    for (std::size_t b = a + 1; b < vs.size(); ++b) {
      if (label[a] != label[b]) best = std::min(best, distance_with(ar, vs[a].x, vs[b].x));
    }
  }
  return best;
}

std::vector<int> labels_from_edges(std::size_t nv, const Edges& edges) {
  ProximityGraph g;
  g.vertices.resize(nv);
  g.edges = edges;
  return connected_components(g).component_of;
}

double slack_for(double u, int dim) { return 4 * std::sqrt(dim * u) + 8 * (dim + 1) * u; }

// Random caps, with clusters of bitwise-equal points.
std::vector<Vertex> random_vertices(std::mt19937_64& rng, int dim, int count, double max_radius, int bits) {
  RoundedArithmetic ar{PrecisionContext(bits)};
  std::uniform_real_distribution<double> radius(0.0, max_radius);
  std::vector<Vertex> vs;
  while (static_cast<int>(vs.size()) < count) {
    auto p = testing::random_point(rng, dim);
    Vertex v;
    for (double c : p.coords()) v.x.push_back(ar.round(c));
    const int copies = 1 + static_cast<int>(rng() % 3);
    for (int c = 0; c < copies; ++c) {
      v.radius = ar.round(radius(rng));
      vs.push_back(v);
    }
  }
  return vs;
}

template <class Arith>
void compare_pair_searches(const Arith& ar, const std::vector<Vertex>& vs, double u) {
  const int dim = static_cast<int>(vs[0].x.size());
  const auto expected = brute_force_labels(ar, vs);

  detail::UnionFind uf_tree(vs.size());
  Edges tree_edges;
  detail::VertexTree(vs).connect(ar, slack_for(u, dim), u, uf_tree, tree_edges);
  CHECK(labels_from_edges(vs.size(), tree_edges) == expected);

  detail::UnionFind uf_groups(vs.size());
  Edges group_edges;
  detail::CoincidentGroups(vs).connect(ar, uf_groups, group_edges);
  CHECK(labels_from_edges(vs.size(), group_edges) == expected);

  CHECK(tree_edges.size() + 1 + static_cast<std::size_t>(*std::max_element(expected.begin(), expected.end())) ==
        vs.size());

  const double bf = brute_force_cross(ar, vs, expected);
  CHECK(detail::VertexTree(vs).min_cross_distance(ar, expected, slack_for(u, dim)) == bf);
  CHECK(detail::CoincidentGroups(vs).min_cross_distance(ar, expected) == bf);
}

}  // namespace

TEST_CASE("connected_components examples") {
  ProximityGraph empty;
  CHECK(connected_components(empty).count() == 0);

  ProximityGraph three;
  three.vertices.resize(3);
  three.edges = {{0, 1}};
  auto c3 = connected_components(three);
  CHECK(c3.count() == 2);
  CHECK(c3.representatives == std::vector<int>{0, 2});

  ProximityGraph path;
  path.vertices.resize(5);
  path.edges = {{3, 4}, {0, 1}, {2, 3}, {1, 2}};
  CHECK(connected_components(path).count() == 1);
}

TEST_CASE("pair searches agree with all-pairs loops") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 12; ++trial) {
    const int dim = 2 + trial % 3;
    const double max_radius = (trial % 4 == 0) ? 0.3 : 0.05;
    SUBCASE("host") {
      auto vs = random_vertices(rng, dim, 300, max_radius, 53);
      compare_pair_searches(HostArithmetic{}, vs, std::ldexp(1.0, -53));
    }
    SUBCASE("rounded") {
      for (int bits : {24, 10, 4, 3}) {
        RoundedArithmetic ar{PrecisionContext(bits)};
        auto vs = random_vertices(rng, dim, 200, max_radius, bits);
        compare_pair_searches(ar, vs, ar.context().unit());
      }
    }
  }
}

TEST_CASE("build_graph examples") {
  auto circle = make_system({2}, {{{{2, 0}, 1.0}, {{0, 2}, 1.0}}}).normalized();
  auto g = build_graph(circle, CubeGridSpec{1, 3}, ArithmeticMode::exact());
  CHECK(g.vertices.empty());
  CHECK(g.excluded_count == g.grid_size);
  CHECK(g.min_excluded_fsup == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(connected_components(g).count() == 0);

  auto line = make_system({1}, {{{{0, 1}, 1.0}, {{1, 0}, -0.5}}}).normalized();
  auto lg = build_graph(line, CubeGridSpec{1, 4}, ArithmeticMode::exact());
  auto comps = connected_components(lg);
  CHECK(comps.count() == 2);
  auto zero = SpherePoint::normalize(std::vector<double>{1.0, 0.5});
  for (const auto& v : lg.vertices) {
    auto r = newton_refine(line, SpherePoint::normalize(v.x));
    CHECK(std::min(distance(r.point, zero), distance(r.point, -zero)) < 1e-12);
  }
  // Antipodal closure.
  for (const auto& v : lg.vertices) {
    bool found = false;
    for (const auto& w : lg.vertices) {
      bool opposite = true;
      for (std::size_t i = 0; i < v.x.size(); ++i) opposite = opposite && (w.x[i] == -v.x[i]);
      found = found || opposite;
    }
    CHECK(found);
  }
  CHECK_THROWS_AS(build_graph(make_system({1}, {{{{0, 1}, 2.0}}}), CubeGridSpec{1, 2}, ArithmeticMode::exact()),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_graph(line, CubeGridSpec{2, 2}, ArithmeticMode::exact()), std::invalid_argument);
}

TEST_CASE("build_graph agrees with brute force and across worker counts") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + trial % 2;
    auto f = testing::random_system(rng, n, 3).normalized();
    for (auto mode : {ArithmeticMode::exact(), ArithmeticMode::rounded(24), ArithmeticMode::rounded(6)}) {
      const CubeGridSpec spec{n, n == 1 ? 7 : 4};
      auto g1 = build_graph(f, spec, mode, {1});
      auto g4 = build_graph(f, spec, mode, {4});
      auto c1 = connected_components(g1);
      CHECK(c1.component_of == connected_components(g4).component_of);
      CHECK(g1.kappa_hat == g4.kappa_hat);
      CHECK(g1.min_excluded_fsup == g4.min_excluded_fsup);
      CHECK(g1.edges == g4.edges);
      if (mode.is_rounded()) {
        RoundedArithmetic ar(mode.context());
        CHECK(c1.component_of == brute_force_labels(ar, g1.vertices));
        auto h = check_halt(g1, c1, mode, f.max_degree());
        CHECK(h.min_intercomponent_distance == brute_force_cross(ar, g1.vertices, c1.component_of));
      } else {
        CHECK(c1.component_of == brute_force_labels(HostArithmetic{}, g1.vertices));
        auto h = check_halt(g1, c1, mode, f.max_degree());
        CHECK(h.min_intercomponent_distance == brute_force_cross(HostArithmetic{}, g1.vertices, c1.component_of));
      }
      // The kappa floor only skips work.
      auto floored = build_graph(f, CubeGridSpec{n, spec.k + 1}, mode, {1}, g1.kappa_hat);
      auto plain = build_graph(f, CubeGridSpec{n, spec.k + 1}, mode, {1});
      CHECK(floored.kappa_hat == plain.kappa_hat);
      CHECK(floored.edges == plain.edges);
      CHECK(floored.vertices.size() == plain.vertices.size());
      CHECK(floored.min_excluded_fsup == plain.min_excluded_fsup);
    }
  }
}

TEST_CASE("check_halt thresholds") {
  auto circle = make_system({2}, {{{{2, 0}, 1.0}, {{0, 2}, 1.0}}}).normalized();
  auto g = build_graph(circle, CubeGridSpec{1, 3}, ArithmeticMode::exact());
  auto h = check_halt(g, connected_components(g), ArithmeticMode::exact(), 2);
  CHECK(h.residual_threshold == doctest::Approx(std::numbers::pi / 2 / 8 * 2));
  CHECK(h.condition_ii);
  CHECK(h.condition_i);
  CHECK(h.halts());

  // Two single-vertex components 0.1 apart at eta = 1/8: pi eta sqrt2 ~ 0.555.
  ProximityGraph two;
  two.spec = CubeGridSpec{1, 3};
  Vertex a;
  a.x = {1.0, 0.0};
  Vertex b;
  b.x = {std::cos(0.1), std::sin(0.1)};
  two.vertices = {a, b};
  auto h2 = check_halt(two, connected_components(two), ArithmeticMode::exact(), 1);
  CHECK(h2.distance_threshold == doctest::Approx(std::numbers::pi / 8 * std::sqrt(2.0)));
  CHECK(h2.min_intercomponent_distance == doctest::Approx(0.1));
  CHECK_FALSE(h2.condition_i);

  auto hr = check_halt(two, connected_components(two), ArithmeticMode::rounded(53), 1);
  CHECK(hr.distance_threshold == doctest::Approx(1.5 * std::numbers::pi / 8 * std::sqrt(2.0)));
  CHECK(hr.residual_threshold == doctest::Approx(std::sqrt(2.0) / 2 * std::numbers::pi / 8 * std::sqrt(2.0)));
}

TEST_CASE("initial level") {
  CHECK(initial_level(1) == 1);
  CHECK(initial_level(2) == 1);
  for (int n = 1; n <= 8; ++n) {
    const double eta0 = 2 * std::sqrt(2.0) / (std::numbers::pi * std::sqrt(n + 1.0));
    const int k = initial_level(n);
    CHECK(std::ldexp(1.0, -k) <= eta0);
    if (k > 1) CHECK(std::ldexp(1.0, -(k - 1)) > eta0);
  }
}

TEST_CASE("count_roots examples") {
  auto run = [](const PolynomialSystem& f) { return count_roots(f); };
  auto r1 = run(make_system({1}, {{{{0, 1}, 1.0}, {{1, 0}, -0.5}}}));
  CHECK(r1.status == CountStatus::Converged);
  CHECK(r1.count == 1);
  auto r2 = run(make_system({2}, {{{{0, 2}, 1.0}, {{2, 0}, -0.25}}}));
  CHECK(r2.count == 2);
  CHECK(r2.status == CountStatus::Converged);
  auto r0 = run(make_system({2}, {{{{2, 0}, 1.0}, {{0, 2}, 1.0}}}));
  CHECK(r0.count == 0);
  CHECK(r0.status == CountStatus::Converged);
  auto r3 = run(make_system({1, 1}, {{{{0, 1, 0}, 1.0}, {{1, 0, 0}, -0.3}}, {{{0, 0, 1}, 1.0}, {{1, 0, 0}, -0.7}}}));
  CHECK(r3.count == 1);
  CHECK(r3.status == CountStatus::Converged);
  REQUIRE(r3.components.size() == 2);
  auto ray = SpherePoint::normalize(std::vector<double>{1.0, 0.3, 0.7});
  for (const auto& c : r3.components) {
    auto z = SpherePoint(c.zero);
    CHECK(std::min(distance(z, ray), distance(z, -ray)) < 1e-10);
  }

  for (const auto& r : {r1, r2, r3}) {
    for (std::size_t i = 0; i < r.iterations.size(); ++i) {
      const auto& it = r.iterations[i];
      CHECK(it.eta == std::ldexp(1.0, -it.k));
      CHECK(it.grid_size == CubeGridSpec{static_cast<int>(r.components.empty() ? 1 : r.components[0].zero.size() - 1), it.k}.point_count());
      if (i > 0) CHECK(it.k == r.iterations[i - 1].k + 1);
    }
    CHECK(r.components.size() == 2 * r.count);
    CHECK(r.kappa_lower_bound >= 1.0 - 1e-9);
  }
}

TEST_CASE("count_roots at halt: antipodal pairing and one zero per component") {
  auto f = make_system({3}, {{{{3, 0}, 1.0}, {{1, 2}, -2.0}, {{0, 3}, 0.3}}});
  auto r = count_roots(f);
  REQUIRE(r.status == CountStatus::Converged);
  CHECK(r.count == 3);
  for (const auto& a : r.components) {
    double best = 10.0;
    for (const auto& b : r.components) best = std::min(best, distance(SpherePoint(a.zero), -SpherePoint(b.zero)));
    CHECK(best <= 1e-8);
  }
  // Newton from every vertex of each component reaches that component's zero.
  auto unit = f.normalized();
  const auto& last = r.iterations.back();
  auto g = build_graph(unit, CubeGridSpec{1, last.k}, ArithmeticMode::exact());
  auto comps = connected_components(g);
  REQUIRE(comps.count() == static_cast<int>(r.components.size()));
  std::vector<SpherePoint> zeros;
  for (int c = 0; c < comps.count(); ++c) {
    zeros.push_back(newton_refine(unit, SpherePoint::normalize(g.vertices[static_cast<std::size_t>(comps.representatives[static_cast<std::size_t>(c)])].x)).point);
  }
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    auto z = newton_refine(unit, SpherePoint::normalize(g.vertices[v].x)).point;
    CHECK(distance(z, zeros[static_cast<std::size_t>(comps.component_of[v])]) <= 1e-8);
  }
  // Separation of distinct zeros with the grid kappa estimate.
  const double bound = 2 * (3 - std::sqrt(7.0)) * std::pow(3.0, -1.5) / r.kappa_lower_bound;
  for (std::size_t a = 0; a < zeros.size(); ++a) {
    for (std::size_t b = a + 1; b < zeros.size(); ++b) CHECK(distance(zeros[a], zeros[b]) >= bound);
  }
}

TEST_CASE("ill-posed systems do not converge") {
  CountOptions opts;
  opts.max_iterations = 8;
  auto r = count_roots(make_system({2}, {{{{0, 2}, 1.0}}}), opts);
  CHECK(r.status == CountStatus::IterationCapReached);
  CHECK(r.iterations.size() == 8);
}

TEST_CASE("grid cap on a later level ends the run without a count") {
  CountOptions opts;
  opts.engine.grid_cap = 1000;
  auto r = count_roots(make_system({2}, {{{{0, 2}, 1.0}}}), opts);
  CHECK(r.status == CountStatus::IterationCapReached);
  CHECK(r.grid_cap_hit);
  opts.engine.grid_cap = 10;
  CHECK_THROWS_AS(count_roots(make_system({2}, {{{{0, 2}, 1.0}}}), opts), GridTooLarge);
}

TEST_CASE("estimate_kappa") {
  auto x1 = make_system({1}, {{{{0, 1}, 1.0}}});
  double prev = 0.0;
  for (int k = 1; k <= 12; ++k) {
    const double est = estimate_kappa(x1, CubeGridSpec{1, k});
    CHECK(est <= std::sqrt(2.0) + 1e-12);
    CHECK(est >= prev);
    prev = est;
  }
  CHECK(prev == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = testing::random_system(rng, 1 + trial % 2, 3).normalized();
    CHECK(estimate_kappa(f, CubeGridSpec{f.n(), 3}) >= 1.0 - 1e-9);
  }
}

TEST_CASE("rounded mode counts simple systems") {
  for (int bits : {53, 24, 12}) {
    CountOptions opts;
    opts.mode = ArithmeticMode::rounded(bits);
    auto r = count_roots(make_system({2}, {{{{0, 2}, 1.0}, {{2, 0}, -0.25}}}), opts);
    CHECK(r.status == CountStatus::Converged);
    CHECK(r.count == 2);
  }
  CHECK(ArithmeticMode::rounded(24).name() == "rounded(t=24)");
  CHECK(ArithmeticMode::exact().name() == "exact");
}
