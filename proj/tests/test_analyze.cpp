#include <doctest.h>

#include <cmath>

#include "quadmap/analyze.hpp"
#include "quadmap/critical.hpp"

using namespace quadmap;

TEST_CASE("preimage counts of hand-checked targets") {
  // E2 = (x^2 - y^2, xy): (1, 0) has preimages (+-1, 0)
  {
    const auto c = preimage_count(normal_form(ClassLabel::E2), {1, 0});
    REQUIRE_FALSE(c.is_infinite);
    CHECK(c.count == 2);
  }
  // H3 = (x^2 + y^2, xy): (1, 0) has preimages (+-1, 0), (0, +-1)
  {
    const auto c = preimage_count(normal_form(ClassLabel::H3), {1, 0});
    REQUIRE_FALSE(c.is_infinite);
    CHECK(c.count == 4);
  }
  // H3: origin is the image of the origin only
  {
    const auto c = preimage_count(normal_form(ClassLabel::H3), {0, 0});
    REQUIRE_FALSE(c.is_infinite);
    CHECK(c.count == 1);
  }
  // DH2 = (x^2 + y^2, 0): fiber over (1, 0) is the unit circle
  {
    const auto c = preimage_count(normal_form(ClassLabel::DH2), {1, 0});
    REQUIRE(c.is_infinite);
    CHECK(c.kind == InfiniteKind::Circle);
  }
  // DH2: targets off the x axis, or with negative x, have no preimage
  {
    const auto c = preimage_count(normal_form(ClassLabel::DH2), {-1, 0});
    REQUIRE_FALSE(c.is_infinite);
    CHECK(c.count == 0);
  }
  // DP5 = (x^2, 0): fiber over (1, 0) is a pair of vertical lines
  {
    const auto c = preimage_count(normal_form(ClassLabel::DP5), {1, 0});
    REQUIRE(c.is_infinite);
    CHECK(c.kind == InfiniteKind::PairOfLines);
  }
  // DP1 = (x^2 + y, x) is a bijection
  {
    const auto c = preimage_count(normal_form(ClassLabel::DP1), {0.3, -1.2});
    REQUIRE_FALSE(c.is_infinite);
    CHECK(c.count == 1);
  }
}

TEST_CASE("preimage points returned are genuine preimages") {
  const QuadraticMap q = normal_form(ClassLabel::E1);
  const auto c = preimage_count(q, {0.7, 0.2});
  REQUIRE_FALSE(c.is_infinite);
  CHECK(c.count == static_cast<int>(c.points.size()));
  for (const Vec2& p : c.points) {
    const Vec2 im = evaluate(q, p);
    CHECK(std::hypot(im.x - 0.7, im.y - 0.2) < 1e-8);
  }
}

TEST_CASE("profiles of the normal forms match the reference table") {
  for (ClassLabel l : kAllLabels) {
    const PreimageProfile p = preimage_profile(normal_form(l), 240, 2);
    CHECK_MESSAGE(profiles_match(p, reference_profile(l)),
                  (to_string(l) + ": " + to_string(p) + " vs " +
                   to_string(reference_profile(l))));
  }
}

TEST_CASE("range convexity separates DE1 from DH1") {
  CHECK_FALSE(range_convexity(normal_form(ClassLabel::DE1), 150, 5).convex_consistent);
  CHECK(range_convexity(normal_form(ClassLabel::DH1), 150, 5).convex_consistent);
}

TEST_CASE("every pair of labels is separated by some invariant") {
  for (std::size_t i = 0; i < kAllLabels.size(); ++i)
    for (std::size_t j = i + 1; j < kAllLabels.size(); ++j) {
      const auto rep = distinguishing_invariant(kAllLabels[i], kAllLabels[j]);
      CHECK_MESSAGE(rep.invariant != "none",
                    (to_string(kAllLabels[i]) + " vs " + to_string(kAllLabels[j])));
    }
}

TEST_CASE("collapse maps and witnesses") {
  CHECK(critical_set_class_of(ClassLabel::E1) == CriticalSetClass::Case3_EllipseThreeCusps);
  CHECK(critical_set_class_of(ClassLabel::DE1) == critical_set_class_of(ClassLabel::DH1));
  CHECK(smooth_class_of(ClassLabel::DP2) == ClassLabel::DE1);
  CHECK(smooth_class_of(ClassLabel::DP4) == ClassLabel::DP3);
  CHECK(verify_smooth_collapse(100, 1) < 1e-12);
}

TEST_CASE("quadratic inverse exists exactly for DP1") {
  const QuadraticMap q = normal_form(ClassLabel::DP1);
  const QuadraticMap qi = quadratic_inverse(q);
  for (double x : {-1.5, 0.0, 2.0})
    for (double y : {-2.0, 0.5}) {
      const Vec2 r = evaluate(qi, evaluate(q, {x, y}));
      CHECK(r.x == doctest::Approx(x).epsilon(1e-10));
      CHECK(r.y == doctest::Approx(y).epsilon(1e-10));
    }
  CHECK_THROWS_AS(quadratic_inverse(normal_form(ClassLabel::E1)), not_invertible_error);
}

TEST_CASE("injectivity on the critical set") {
  CHECK(injective_on_critical_set(normal_form(ClassLabel::E1)));
  CHECK(injective_on_critical_set(normal_form(ClassLabel::DE1)));
  // P2 = (x^2, xy + y): J0 lines fold to the same image point pairs
  CHECK_FALSE(injective_on_critical_set(normal_form(ClassLabel::H3)));
  CHECK_THROWS_AS(injective_on_critical_set(normal_form(ClassLabel::DP1)), not_applicable_error);
  CHECK_THROWS_AS(injective_on_critical_set(normal_form(ClassLabel::DP5)), not_applicable_error);
}

TEST_CASE("critical set classes computed from the maps agree with the table") {
  for (ClassLabel l : kAllLabels)
    CHECK_MESSAGE(j0j1_class(normal_form(l)) == critical_set_class_of(l), to_string(l));
}

TEST_CASE("cusp count of the standard elliptic critical image") {
  const QuadraticMap q = normal_form(ClassLabel::E1);
  const auto sample = sample_critical_image(q, 2048);
  const auto [n, cusps] = count_cusps(q, sample);
  CHECK(n == 3);
}
