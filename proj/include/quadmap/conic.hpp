#pragma once

// The Jacobian-determinant conic of a quadratic map and the classification of
// (possibly degenerate) conics Ax^2 + Bxy + Cy^2 + Dx + Ey + F = 0, with the
// geometric data needed to parametrize each outcome.

#include <optional>
#include <string>
#include <vector>

#include "quadmap/algebra.hpp"

namespace quadmap {

template <typename T>
struct ConicCoefficientsT {
  T A{}, B{}, C{}, D{}, E{}, F{};

  T operator()(T x, T y) const {
    return A * x * x + B * x * y + C * y * y + D * x + E * y + F;
  }

  T scale() const {
    T s{};
    for (const T& c : {A, B, C, D, E, F})
      if (qm_abs(c) > s) s = qm_abs(c);
    return s;
  }
};
using ConicCoefficients = ConicCoefficientsT<double>;

// Coefficients of det(DQ)(x,y) expressed through the 2x2 minors
// X_{ij:kl} = a_ij b_kl - a_kl b_ij of the coefficient matrix.
template <typename T>
ConicCoefficientsT<T> det_jacobian_conic(const QuadraticMapT<T>& q) {
  auto X = [&](T aij, T bij, T akl, T bkl) { return aij * bkl - akl * bij; };
  ConicCoefficientsT<T> c;
  c.A = T(2) * X(q.a20, q.b20, q.a11, q.b11);
  c.B = T(4) * X(q.a20, q.b20, q.a02, q.b02);
  c.C = T(2) * X(q.a11, q.b11, q.a02, q.b02);
  c.D = T(2) * X(q.a20, q.b20, q.a01, q.b01) - X(q.a11, q.b11, q.a10, q.b10);
  c.E = X(q.a11, q.b11, q.a01, q.b01) - T(2) * X(q.a02, q.b02, q.a10, q.b10);
  c.F = X(q.a10, q.b10, q.a01, q.b01);
  return c;
}

enum class ConicTag {
  Ellipse,
  Hyperbola,
  Parabola,
  Point,
  IntersectingLines,
  ParallelLines,
  CoincidentLines,
  SingleLine,
  AllPlane,
  Empty,
};

std::string to_string(ConicTag t);

struct Line2 {
  Vec2 point;
  Vec2 dir;  // unit
};

// Geometric data for the non-empty outcomes; which fields are populated
// depends on the tag.
struct ConicClass {
  ConicTag tag = ConicTag::Empty;
  std::optional<Vec2> center;       // ellipse/hyperbola/intersecting-lines/point
  Vec2 axis_u{1, 0}, axis_v{0, 1};  // principal directions (unit)
  double semi_a = 0, semi_b = 0;    // ellipse semi-axes / hyperbola a,b
  std::vector<Line2> lines;         // line outcomes (1 or 2 entries)
  // Parabola: point = vertex-ish base, axis = opening direction,
  // param(t) = base + t * tangent + quad_coeff * t^2 * axis.
  Vec2 parab_base{0, 0}, parab_tangent{1, 0}, parab_axis{0, 1};
  double parab_coeff = 0;
};

// Tag decision by the standard invariants: sign of B^2 - 4AC and the
// determinant/rank of the bordered 3x3 matrix, all sign tests relative to the
// coefficient scale (tol_rel = 0 gives exact decisions).
ConicTag classify_conic_tag(const ConicCoefficients& c, double tol_rel = kTol);
ConicTag classify_conic_tag_exact(const ConicCoefficientsT<Rational>& c);

// Full classification with geometry.
ConicClass classify_conic(const ConicCoefficients& c, double tol_rel = kTol);

}  // namespace quadmap
