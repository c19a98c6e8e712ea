#include <doctest.h>

#include <random>

#include "quadmap/normalize.hpp"

using namespace quadmap;

TEST_CASE("labels round-trip through strings") {
  for (ClassLabel l : kAllLabels) CHECK(label_from_string(to_string(l)) == l);
  CHECK_FALSE(label_from_string("nope").has_value());
}

TEST_CASE("normal forms classify as themselves with zero residual") {
  for (ClassLabel l : kAllLabels) {
    const ClassificationResult r = classify(normal_form(l));
    CHECK(r.label == l);
    CHECK(r.residual <= 1e-15);
  }
}

TEST_CASE("long case solutions satisfy their coefficient equations") {
  for (double b : {0.0, 0.1, -0.7, 3.0, -10.0}) {
    const LongCaseSolution s = solve_elliptic_longcase(b);
    CHECK(s.p0 > 0);
    CHECK(s.max_residual < 1e-10);
  }
  for (double b : {0.1, -0.3, 0.7, 5.0}) {
    const LongCaseSolution s = solve_hyperbolic_longcase(b);
    CHECK(s.p0 > 0);
    CHECK(s.max_residual < 1e-10);
  }
  CHECK_THROWS_AS(solve_hyperbolic_longcase(0.5), wrong_branch_error);
}

TEST_CASE("classification of specific maps") {
  // complex squaring z^2 = (x^2 - y^2, 2xy): elliptic, no linear part -> E2
  QuadraticMap zsq;
  zsq.a20 = 1;
  zsq.a02 = -1;
  zsq.b11 = 2;
  CHECK(classify(zsq).label == ClassLabel::E2);

  // Henon map (1 - 1.4 x^2 + y, 0.3 x): constant nonzero Jacobian -> DP1
  QuadraticMap henon;
  henon.a20 = -1.4;
  henon.a01 = 1;
  henon.a00 = 1;
  henon.b10 = 0.3;
  CHECK(classify(henon).label == ClassLabel::DP1);

  // (x^2, y^2): det DJ = 4xy, intersecting lines, no b11 route -> hyperbolic family
  QuadraticMap sq;
  sq.a20 = 1;
  sq.b02 = 1;
  const ClassLabel l = classify(sq).label;
  CHECK((l == ClassLabel::H3));
}

TEST_CASE("classification rejects maps without quadratic part") {
  QuadraticMap aff;
  aff.a10 = 1;
  aff.b01 = 1;
  CHECK_THROWS_AS(classify(aff), not_quadratic_error);
}

TEST_CASE("verify_witness rejects singular witnesses") {
  const QuadraticMap q = normal_form(ClassLabel::E1);
  WitnessPair w;  // defaults are identity
  w.h.m11 = 0;
  w.h.m22 = 0;
  CHECK_THROWS_AS(verify_witness(q, ClassLabel::E1, w), invalid_witness_error);
}

TEST_CASE("witnesses survive random conjugation") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  auto rand_affine = [&]() {
    AffineMap2 a;
    do {
      a = {U(rng), U(rng), U(rng), U(rng), U(rng), U(rng)};
    } while (std::abs(a.det()) < 0.2);
    return a;
  };
  for (ClassLabel l : kAllLabels)
    for (int i = 0; i < 5; ++i) {
      const QuadraticMap g = compose(rand_affine(), normal_form(l), rand_affine());
      const ClassificationResult r = classify(g);
      CHECK(r.label == l);
      CHECK(verify_witness(g, r.label, r.witness) <= 1e-6 * std::max(map_scale(g), 1.0));
    }
}
