#include <doctest.h>

#include <random>

#include "quadmap/algebra.hpp"

using namespace quadmap;

namespace {

QuadraticMap random_map(std::mt19937_64& rng, double lo = -3, double hi = 3) {
  std::uniform_real_distribution<double> U(lo, hi);
  std::array<double, 12> c;
  for (auto& v : c) v = U(rng);
  return QuadraticMap::from_coeffs(c);
}

AffineMap2 random_affine(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-2, 2);
  AffineMap2 a;
  do {
    a = {U(rng), U(rng), U(rng), U(rng), U(rng), U(rng)};
  } while (std::abs(a.det()) < 0.1);
  return a;
}

}  // namespace

TEST_CASE("jacobian matches finite differences") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-2, 2);
  const double eps = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    const QuadraticMap q = random_map(rng);
    const Vec2 p{U(rng), U(rng)};
    const Mat2 J = jacobian(q, p);
    const Vec2 fx1 = evaluate(q, {p.x + eps, p.y}), fx0 = evaluate(q, {p.x - eps, p.y});
    const Vec2 fy1 = evaluate(q, {p.x, p.y + eps}), fy0 = evaluate(q, {p.x, p.y - eps});
    CHECK(J.m11 == doctest::Approx((fx1.x - fx0.x) / (2 * eps)).epsilon(1e-6));
    CHECK(J.m12 == doctest::Approx((fy1.x - fy0.x) / (2 * eps)).epsilon(1e-6));
    CHECK(J.m21 == doctest::Approx((fx1.y - fx0.y) / (2 * eps)).epsilon(1e-6));
    CHECK(J.m22 == doctest::Approx((fy1.y - fy0.y) / (2 * eps)).epsilon(1e-6));
  }
}

TEST_CASE("compose agrees with pointwise evaluation") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const QuadraticMap q = random_map(rng);
    const AffineMap2 h = random_affine(rng), k = random_affine(rng);
    const QuadraticMap g = compose(k, q, h);
    const AffineMap2 hinv = affine_invert(h);
    for (int i = 0; i < 10; ++i) {
      const Vec2 p{U(rng), U(rng)};
      const Vec2 lhs = evaluate(g, p);
      const Vec2 rhs = k(evaluate(q, hinv(p)));
      CHECK(lhs.x == doctest::Approx(rhs.x).epsilon(1e-9));
      CHECK(lhs.y == doctest::Approx(rhs.y).epsilon(1e-9));
    }
  }
}

TEST_CASE("compose action is associative over affine pairs") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const QuadraticMap q = random_map(rng);
    const AffineMap2 h1 = random_affine(rng), k1 = random_affine(rng);
    const AffineMap2 h2 = random_affine(rng), k2 = random_affine(rng);
    const QuadraticMap a = compose(k2, compose(k1, q, h1), h2);
    const QuadraticMap b = compose(affine_compose(k2, k1), q, affine_compose(h2, h1));
    CHECK(max_coeff_deviation(a, b) < 1e-9 * std::max(map_scale(a), 1.0));
  }
}

TEST_CASE("affine inverse round-trips") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const AffineMap2 a = random_affine(rng);
    const AffineMap2 id = affine_compose(a, affine_invert(a));
    CHECK(id.m11 == doctest::Approx(1).epsilon(1e-10));
    CHECK(id.m22 == doctest::Approx(1).epsilon(1e-10));
    CHECK(std::abs(id.m12) < 1e-10);
    CHECK(std::abs(id.m21) < 1e-10);
    CHECK(std::abs(id.t1) < 1e-9);
    CHECK(std::abs(id.t2) < 1e-9);
  }
}

TEST_CASE("homogeneous part is a projection compatible with scaling") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const QuadraticMap q = random_map(rng);
    const QuadraticMap h = as_map(homogeneous_part(q));
    const Vec2 p{U(rng), U(rng)};
    const double t = U(rng);
    // homogeneous degree 2: H(t p) = t^2 H(p)
    const Vec2 a = evaluate(h, {t * p.x, t * p.y});
    const Vec2 b = evaluate(h, p);
    CHECK(a.x == doctest::Approx(t * t * b.x).epsilon(1e-9));
    CHECK(a.y == doctest::Approx(t * t * b.y).epsilon(1e-9));
    // projection: taking the part twice changes nothing
    CHECK(max_coeff_deviation(h, as_map(homogeneous_part(h))) == 0);
  }
}

TEST_CASE("is_quadratic flags affine maps") {
  QuadraticMap aff;
  aff.a10 = 1;
  aff.b01 = 2;
  aff.a00 = 5;
  CHECK_FALSE(is_quadratic(aff));
  aff.b20 = 1e-3;
  CHECK(is_quadratic(aff));
}
