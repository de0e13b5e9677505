#include <random>

#include "doctest.h"
#include "realrays/oracle.hpp"

using namespace realrays;
using namespace realrays::oracle;

namespace {

BinaryForm form(std::vector<mpq_class> c) {
  BinaryForm p;
  p.degree = static_cast<int>(c.size()) - 1;
  p.coefficients = std::move(c);
  return p;
}

// Roots of a square-free p in (-B, B) by bisection on sign changes over a
// fine rational mesh, refined until intervals separate.  Independent of the
// Sturm machinery.
int bisection_count(const RationalPolynomial& p) {
  // Cauchy bound.
  mpq_class bound = 0;
  for (const auto& c : p.coefficients()) bound = std::max(bound, mpq_class(abs(c / p.leading())));
  bound += 1;
  int count = 0;
  // Count sign changes on an increasingly fine mesh until stable twice.
  int prev = -1;
  int stable = 0;
  for (int cells = 64; cells <= (1 << 16); cells *= 2) {
    count = 0;
    mpq_class step = 2 * bound / cells;
    mpq_class t = -bound;
    mpq_class v = p(t);
    for (int i = 0; i < cells; ++i) {
      mpq_class t2 = t + step;
      mpq_class v2 = p(t2);
      if (v2 == 0) {
        ++count;
        // Skip past the exact root.
        t2 += step / 2;
        v2 = p(t2);
      } else if (sgn(v) * sgn(v2) < 0) {
        ++count;
      }
      t = t2;
      v = v2;
    }
    stable = (count == prev) ? stable + 1 : 0;
    prev = count;
    if (stable >= 2) break;
  }
  return count;
}

}  // namespace

TEST_CASE("Sturm counts on hand examples") {
  CHECK(binary_form_ray_count(form({mpq_class(-1, 4), 0, 1})) == 2);
  CHECK(binary_form_ray_count(form({1, 0, 1})) == 0);
  CHECK(binary_form_ray_count(form({0, 1, 0})) == 2);
  CHECK(binary_form_ray_count(form({0, 0, 1})) == 1);
  CHECK(binary_form_ray_count(form({mpq_class(-1, 2), 1})) == 1);
  CHECK_THROWS_AS(binary_form_ray_count(form({0, 0})), std::invalid_argument);
  CHECK(has_simple_rays(form({mpq_class(-1, 4), 0, 1})));
  CHECK_FALSE(has_simple_rays(form({0, 0, 1})));
  CHECK_FALSE(has_simple_rays(form({1, 2, 1})));
  CHECK(count_real_roots(RationalPolynomial({1, 2, 1})) == 1);
  CHECK(count_real_roots(RationalPolynomial({-2, 0, 1})) == 2);
}

TEST_CASE("Sturm count agrees with bisection on random forms") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const int degree = 1 + static_cast<int>(seed % 6);
    auto p = random_binary_form(degree, seed);
    REQUIRE(p.degree == degree);
    auto sf = p.dehomogenized().square_free_part();
    if (sf.degree() < 1) continue;
    CHECK(count_real_roots(sf) == bisection_count(sf));
  }
}

TEST_CASE("kernel vectors") {
  std::vector<std::vector<mpq_class>> rows{{1, 0, -1}, {0, 1, -2}};
  CHECK(kernel_vector(rows) == std::vector<mpq_class>{1, 2, 1});
  std::vector<std::vector<mpq_class>> deficient{{1, 2, 3}, {2, 4, 6}};
  CHECK(kernel_vector(deficient).empty());
}

TEST_CASE("linear-product systems") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    auto s11 = make_linear_product_system(2, {1, 1}, seed);
    CHECK(s11.known_count == 1);
    auto s22 = make_linear_product_system(2, {2, 2}, seed);
    CHECK(s22.known_count == 4);
    auto s21 = make_linear_product_system(2, {2, 1}, seed);
    CHECK(s21.known_count == 2);
    for (const auto* s : {&s11, &s22, &s21}) {
      REQUIRE(s->rays.size() == s->known_count);
      for (const auto& ray : s->rays) {
        for (const auto& p : s->exact_polys) CHECK(oracle::evaluate(p, ray) == 0);
        CHECK(verify_zero_exact(s->exact_polys, ray));
      }
    }
  }
  CHECK_THROWS_AS(make_linear_product_system(1, {1}, 1), std::invalid_argument);
  LinearProductOptions impossible;
  impossible.min_ray_angle = 4.0;
  impossible.max_retries = 3;
  CHECK_THROWS_AS(make_linear_product_system(2, {2, 2}, 1, impossible), SeedExhausted);
}

TEST_CASE("verify_zero") {
  auto f = form({mpq_class(-1, 2), 1}).to_system();
  auto z = SpherePoint::normalize(std::vector<double>{1.0, 0.5});
  CHECK(verify_zero(f, z, 1e-10));
  CHECK_FALSE(verify_zero(f, SpherePoint({1.0, 0.0}), 1e-10));

  std::vector<RationalPoly> exact{{{{1, 0}, mpq_class(-1, 2)}, {{0, 1}, 1}}};
  CHECK(verify_zero_exact(exact, {2, 1}));
  CHECK_FALSE(verify_zero_exact(exact, {1, 0}));
}

TEST_CASE("suites are deterministic and well formed") {
  auto a = univariate_suite(5);
  auto b = univariate_suite(5);
  REQUIRE(a.size() == 5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    CHECK(a[i].expected_count == b[i].expected_count);
    CHECK(a[i].system.n() == 1);
    CHECK(a[i].system.max_degree() <= 6);
  }
  auto m = multivariate_suite(3);
  REQUIRE(m.size() == 3);
  CHECK(m[0].name == "linprod-11-s1");
  CHECK(m[0].expected_count == 1);
  CHECK(m[1].expected_count == 2);
}
