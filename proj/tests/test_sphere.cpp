#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "realrays/sphere.hpp"
#include "support.hpp"

using namespace realrays;

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("grid sizes") {
  CHECK(CubeGridSpec{1, 1}.point_count() == 16);
  CHECK(CubeGridSpec{1, 2}.point_count() == 32);
  CHECK(CubeGridSpec{2, 1}.point_count() == 98);
  CHECK(CubeGridSpec{3, 2}.eta() == 0.25);
  CHECK(CubeGrid(CubeGridSpec{2, 3}).size() == CubeGridSpec{2, 3}.point_count());
  CHECK_THROWS_AS(CubeGrid(CubeGridSpec{2, 11}), GridTooLarge);
  CHECK_THROWS_AS(CubeGrid(CubeGridSpec{1, 0}), std::invalid_argument);
}

TEST_CASE("grid enumeration covers the cube surface once, with antipodes") {
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 3; ++k) {
      CubeGrid grid(CubeGridSpec{n, k});
      std::set<std::vector<std::int64_t>> seen;
      std::vector<std::int64_t> p(static_cast<std::size_t>(n + 1));
      std::vector<std::int64_t> q(p.size());
      for (std::uint64_t i = 0; i < grid.size(); ++i) {
        grid.lattice_point(i, p);
        std::int64_t mx = 0;
        for (auto c : p) mx = std::max(mx, std::abs(c));
        REQUIRE(mx == grid.scale());
        seen.insert(p);
        grid.lattice_point(grid.antipode(i), q);
        for (std::size_t c = 0; c < p.size(); ++c) REQUIRE(q[c] == -p[c]);
      }
      CHECK(seen.size() == grid.size());
      std::set<std::uint64_t> positive;
      for (std::uint64_t h = 0; h < grid.half_size(); ++h) positive.insert(grid.positive_index(h));
      for (auto i : positive) CHECK(positive.count(grid.antipode(i)) == 0);
    }
  }
}

TEST_CASE("projection examples") {
  auto x = project(std::vector<double>{1.0, 1.0});
  CHECK(x[0] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(x[1] == doctest::Approx(1 / std::sqrt(2.0)));
  auto e0 = SpherePoint({1.0, 0.0, 0.0});
  CHECK(project_inverse(e0) == std::vector<double>{1.0, 0.0, 0.0});
  auto y = project(std::vector<double>{1.0, 0.5});
  CHECK(y[0] == doctest::Approx(2 / std::sqrt(5.0)));
  CHECK(y[1] == doctest::Approx(1 / std::sqrt(5.0)));
  auto back = project_inverse(y);
  CHECK(back[0] == doctest::Approx(1.0));
  CHECK(back[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(project(std::vector<double>{0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SpherePoint({1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("distance examples") {
  SpherePoint e0({1.0, 0.0});
  SpherePoint e1({0.0, 1.0});
  CHECK(distance(e0, e1) == doctest::Approx(std::numbers::pi / 2));
  CHECK(distance(e0, e0) == 0.0);
  CHECK(distance(e0, -e0) == doctest::Approx(std::numbers::pi));
  auto x = project(std::vector<double>{1.0, 0.5});
  CHECK(distance(e0, x) == doctest::Approx(std::acos(2 / std::sqrt(5.0))));
  CHECK(distance(e0, x) == doctest::Approx(0.46365).epsilon(1e-5));
}

TEST_CASE("host distance agrees with arccos away from the ends and is symmetric") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    auto a = testing::random_point(rng, 3);
    auto b = testing::random_point(rng, 3);
    double dot = 0.0;
    for (int i = 0; i < 3; ++i) dot += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
    CHECK(distance(a, b) == doctest::Approx(std::acos(dot)).epsilon(1e-9));
    CHECK(distance(a, b) == distance(b, a));
  }
}

TEST_CASE("grid separation: distinct projected grid points are at least eta / (2 sqrt(n+1)) apart") {
  auto check = [](int n, int k) {
    CubeGrid grid(CubeGridSpec{n, k});
    const int dim = n + 1;
    std::vector<SpherePoint> pts;
    std::vector<double> y(static_cast<std::size_t>(dim));
    for (std::uint64_t i = 0; i < grid.size(); ++i) {
      grid.point(i, y);
      pts.push_back(project(y));
    }
    double closest = 10.0;
    for (std::size_t a = 0; a < pts.size(); ++a) {
      for (std::size_t b = a + 1; b < pts.size(); ++b) closest = std::min(closest, distance(pts[a], pts[b]));
    }
    CHECK(closest >= grid.spec().eta() / (2 * std::sqrt(dim)));
  };
  for (int k = 1; k <= 4; ++k) check(1, k);
  for (int k = 1; k <= 2; ++k) check(2, k);
}

TEST_CASE("exp_map") {
  SpherePoint x({0.6, 0.8});
  auto same = exp_map(x, std::vector<double>{0.0, 0.0});
  CHECK(same[0] == x[0]);
  CHECK(same[1] == x[1]);
  SpherePoint e0({1.0, 0.0});
  auto r = exp_map(e0, std::vector<double>{0.0, 0.1});
  CHECK(r[0] == doctest::Approx(std::cos(0.1)));
  CHECK(r[1] == doctest::Approx(std::sin(0.1)));
  CHECK(distance(e0, r) == doctest::Approx(0.1));
  CHECK_THROWS_AS(exp_map(e0, std::vector<double>{0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("tangent basis") {
  auto h = tangent_basis(SpherePoint({0.0, 0.0, 1.0}));
  CHECK(h == std::vector<double>{1, 0, 0, 1, 0, 0});
  auto h1 = tangent_basis(SpherePoint({1.0, 0.0}));
  CHECK(h1[0] == doctest::Approx(0.0));
  CHECK(h1[1] == doctest::Approx(1.0));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + trial % 3;
    const int n = dim - 1;
    auto x = testing::random_point(rng, dim);
    auto b = tangent_basis(x);
    for (int a = 0; a < n; ++a) {
      double dx = 0.0;
      for (int r = 0; r < dim; ++r) dx += b[static_cast<std::size_t>(r * n + a)] * x[static_cast<std::size_t>(r)];
      CHECK(std::abs(dx) < 1e-13);
      for (int c = 0; c < n; ++c) {
        double g = 0.0;
        for (int r = 0; r < dim; ++r) g += b[static_cast<std::size_t>(r * n + a)] * b[static_cast<std::size_t>(r * n + c)];
        CHECK(std::abs(g - (a == c ? 1.0 : 0.0)) < 1e-13);
      }
    }
    std::vector<double> col(static_cast<std::size_t>(dim));
    for (int r = 0; r < dim; ++r) col[static_cast<std::size_t>(r)] = b[static_cast<std::size_t>(r * n)];
    CHECK(norm2(col) == doctest::Approx(1.0));
  }
}
