#include <doctest.h>

#include <cmath>
#include <random>

#include "quadmap/conic.hpp"
#include "quadmap/roots.hpp"

using namespace quadmap;

TEST_CASE("conic tags of hand-built conics") {
  auto tag = [](double A, double B, double C, double D, double E, double F) {
    return classify_conic_tag(ConicCoefficients{A, B, C, D, E, F});
  };
  CHECK(tag(1, 0, 1, 0, 0, -1) == ConicTag::Ellipse);     // unit circle
  CHECK(tag(1, 0, -1, 0, 0, -1) == ConicTag::Hyperbola);  // x^2 - y^2 = 1
  CHECK(tag(1, 0, 0, 0, -1, 0) == ConicTag::Parabola);    // y = x^2
  CHECK(tag(1, 0, 1, 0, 0, 0) == ConicTag::Point);
  CHECK(tag(1, 0, 1, 0, 0, 1) == ConicTag::Empty);
  CHECK(tag(1, 0, -1, 0, 0, 0) == ConicTag::IntersectingLines);
  CHECK(tag(1, 0, 0, 0, 0, -1) == ConicTag::ParallelLines);  // x^2 = 1
  CHECK(tag(1, 0, 0, 0, 0, 1) == ConicTag::Empty);           // x^2 = -1
  CHECK(tag(1, 0, 0, 0, 0, 0) == ConicTag::CoincidentLines); // x^2 = 0
  CHECK(tag(0, 0, 0, 1, 1, 0) == ConicTag::SingleLine);
  CHECK(tag(0, 0, 0, 0, 0, 0) == ConicTag::AllPlane);
}

TEST_CASE("tag invariant under rotation and scaling") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-2, 2);
  std::uniform_real_distribution<double> ang(0, 6.28);
  const ConicCoefficients samples[] = {
      {1, 0, 2, 1, -1, -3},  // ellipse
      {1, 0, -2, 0, 1, 1},   // hyperbola
      {1, 2, 1, 0, 1, 0},    // parabola (B^2 = 4AC, not degenerate)
  };
  for (const auto& c : samples) {
    const ConicTag base = classify_conic_tag(c);
    for (int trial = 0; trial < 20; ++trial) {
      const double th = ang(rng), s = std::exp(U(rng) / 2);
      const double co = std::cos(th), si = std::sin(th);
      // substitute (x,y) -> s R (x,y)
      auto sub = [&](const ConicCoefficients& q) {
        ConicCoefficients r;
        const double a = s * co, b = -s * si, cc = s * si, d = s * co;
        r.A = q.A * a * a + q.B * a * cc + q.C * cc * cc;
        r.B = 2 * q.A * a * b + q.B * (a * d + b * cc) + 2 * q.C * cc * d;
        r.C = q.A * b * b + q.B * b * d + q.C * d * d;
        r.D = q.D * a + q.E * cc;
        r.E = q.D * b + q.E * d;
        r.F = q.F;
        return r;
      };
      CHECK(classify_conic_tag(sub(c)) == base);
    }
  }
}

TEST_CASE("exact tag agrees with float tag on rational conics") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> N(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    ConicCoefficientsT<Rational> ce;
    ConicCoefficients cd;
    int vals[6];
    for (auto& v : vals) v = N(rng);
    ce = {Rational(vals[0]), Rational(vals[1]), Rational(vals[2]),
          Rational(vals[3]), Rational(vals[4]), Rational(vals[5])};
    cd = {double(vals[0]), double(vals[1]), double(vals[2]),
          double(vals[3]), double(vals[4]), double(vals[5])};
    CHECK(classify_conic_tag_exact(ce) == classify_conic_tag(cd));
  }
}

TEST_CASE("real_roots recovers planted roots") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-4, 4);
  for (int trial = 0; trial < 200; ++trial) {
    // build (x - r1)(x - r2)(x - r3)(x - r4) from sorted distinct roots
    double r[4];
    for (auto& v : r) v = U(rng);
    std::sort(r, r + 4);
    bool distinct = true;
    for (int i = 0; i < 3; ++i)
      if (r[i + 1] - r[i] < 1e-2) distinct = false;
    if (!distinct) continue;
    std::vector<double> p = {1};
    for (double root : r) {
      std::vector<double> q(p.size() + 1, 0.0);
      for (std::size_t i = 0; i < p.size(); ++i) {
        q[i + 1] += p[i];
        q[i] -= root * p[i];
      }
      p = q;
    }
    const auto roots = real_roots(p);
    REQUIRE(roots.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(roots[i] == doctest::Approx(r[i]).epsilon(1e-7));
  }
}

TEST_CASE("real_roots reports touch roots once") {
  // (x - 1)^2 (x + 2) = x^3 - 3x + 2
  const auto roots = real_roots({2, -3, 0, 1});
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(-2));
  CHECK(roots[1] == doctest::Approx(1));
}

TEST_CASE("positive cubic root solver") {
  // 4p^3 - 3p - 1 has root exactly 1
  CHECK(find_positive_cubic_root(4, -3, -1) == 1.0);
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> U(0.1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const double c3 = U(rng), c1 = U(rng) - 2.5, c0 = -U(rng);
    const double x = find_positive_cubic_root(c3, c1, c0);
    CHECK(x > 0);
    CHECK(std::abs(c3 * x * x * x + c1 * x + c0) < 1e-9 * (std::abs(c3) * x * x * x + std::abs(c1) * x + std::abs(c0) + 1));
  }
}
