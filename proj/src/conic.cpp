#include "quadmap/conic.hpp"

#include <algorithm>
#include <cmath>

namespace quadmap {

std::string to_string(ConicTag t) {
  switch (t) {
    case ConicTag::Ellipse: return "ellipse";
    case ConicTag::Hyperbola: return "hyperbola";
    case ConicTag::Parabola: return "parabola";
    case ConicTag::Point: return "point";
    case ConicTag::IntersectingLines: return "intersecting_lines";
    case ConicTag::ParallelLines: return "parallel_lines";
    case ConicTag::CoincidentLines: return "coincident_lines";
    case ConicTag::SingleLine: return "single_line";
    case ConicTag::AllPlane: return "all_plane";
    case ConicTag::Empty: return "empty";
  }
  return "?";
}

namespace {

template <typename T>
ConicTag classify_tag_impl(const ConicCoefficientsT<T>& c, double tol_rel) {
  const T s = c.scale();
  if (s == T(0)) return ConicTag::AllPlane;
  const T tol_s = T(tol_rel) * s;

  T qs{};
  for (const T& v : {c.A, c.B, c.C})
    if (qm_abs(v) > qs) qs = qm_abs(v);
  T ls{};
  for (const T& v : {c.D, c.E})
    if (qm_abs(v) > ls) ls = qm_abs(v);

  if (qs <= tol_s) {
    // No quadratic part: a line, the whole plane, or nothing.
    if (ls <= tol_s) return qm_abs(c.F) <= tol_s ? ConicTag::AllPlane : ConicTag::Empty;
    return ConicTag::SingleLine;
  }

  const T disc = c.B * c.B - T(4) * c.A * c.C;
  // det of [[A,B/2,D/2],[B/2,C,E/2],[D/2,E/2,F]], scaled by 8 to stay
  // polynomial in the inputs.
  const T delta8 = T(8) * c.A * c.C * c.F + T(2) * c.B * c.E * c.D -
                   T(2) * c.A * c.E * c.E - T(2) * c.C * c.D * c.D -
                   T(2) * c.F * c.B * c.B;
  const T tol_disc = T(tol_rel) * qs * qs;
  const T tol_delta = T(tol_rel) * s * s * s;

  if (qm_abs(delta8) > tol_delta) {
    if (disc > tol_disc) return ConicTag::Hyperbola;
    if (disc < -tol_disc) {
      return delta8 * (c.A + c.C) < T(0) ? ConicTag::Ellipse : ConicTag::Empty;
    }
    return ConicTag::Parabola;
  }

  // Degenerate conic.
  if (disc > tol_disc) return ConicTag::IntersectingLines;
  if (disc < -tol_disc) return ConicTag::Point;

  // Rank-1 quadratic part: sigma * u^2 + linear. Reduce against the larger of
  // A, C to keep the discriminant well scaled.
  const T tol_lin = T(tol_rel) * s * s;
  if (qm_abs(c.A) >= qm_abs(c.C)) {
    const T d2 = c.D * c.D - T(4) * c.A * c.F;
    if (d2 > tol_lin) return ConicTag::ParallelLines;
    if (d2 < -tol_lin) return ConicTag::Empty;
    return ConicTag::CoincidentLines;
  }
  const T d2 = c.E * c.E - T(4) * c.C * c.F;
  if (d2 > tol_lin) return ConicTag::ParallelLines;
  if (d2 < -tol_lin) return ConicTag::Empty;
  return ConicTag::CoincidentLines;
}

Vec2 unit(Vec2 v) {
  const double n = std::hypot(v.x, v.y);
  return {v.x / n, v.y / n};
}

// Eigen-decomposition of [[A, B/2], [B/2, C]]; lam1 has the larger magnitude.
void principal_axes(const ConicCoefficients& c, double& lam1, double& lam2, Vec2& u,
                    Vec2& v) {
  const double a = c.A, b = c.B / 2.0, d = c.C;
  const double tr = a + d;
  const double det = a * d - b * b;
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  double l1 = tr / 2.0 + disc;
  double l2 = tr / 2.0 - disc;
  if (std::abs(l2) > std::abs(l1)) std::swap(l1, l2);
  lam1 = l1;
  lam2 = l2;
  if (std::abs(b) > 1e-300) {
    u = unit({l1 - d, b});
  } else {
    u = (std::abs(a - l1) <= std::abs(d - l1)) ? Vec2{1, 0} : Vec2{0, 1};
  }
  v = {-u.y, u.x};
}

}  // namespace

ConicTag classify_conic_tag(const ConicCoefficients& c, double tol_rel) {
  return classify_tag_impl(c, tol_rel);
}

ConicTag classify_conic_tag_exact(const ConicCoefficientsT<Rational>& c) {
  return classify_tag_impl(c, 0.0);
}

ConicClass classify_conic(const ConicCoefficients& c, double tol_rel) {
  ConicClass out;
  out.tag = classify_conic_tag(c, tol_rel);

  double lam1 = 0, lam2 = 0;
  Vec2 u{1, 0}, v{0, 1};
  principal_axes(c, lam1, lam2, u, v);
  out.axis_u = u;
  out.axis_v = v;

  // Rotated linear coefficients and (when it exists) the center.
  const double Dp = c.D * u.x + c.E * u.y;
  const double Ep = c.D * v.x + c.E * v.y;

  auto center_from = [&]() {
    const double X0 = -Dp / (2.0 * lam1);
    const double Y0 = -Ep / (2.0 * lam2);
    return Vec2{X0 * u.x + Y0 * v.x, X0 * u.y + Y0 * v.y};
  };
  auto value_at_center = [&]() {
    const double X0 = -Dp / (2.0 * lam1);
    const double Y0 = -Ep / (2.0 * lam2);
    return c.F - lam1 * X0 * X0 - lam2 * Y0 * Y0;
  };

  switch (out.tag) {
    case ConicTag::Ellipse: {
      out.center = center_from();
      const double g = value_at_center();
      out.semi_a = std::sqrt(std::max(0.0, -g / lam1));
      out.semi_b = std::sqrt(std::max(0.0, -g / lam2));
      break;
    }
    case ConicTag::Point:
      out.center = center_from();
      break;
    case ConicTag::Hyperbola: {
      out.center = center_from();
      const double g = value_at_center();
      if (-g / lam1 > 0) {
        out.semi_a = std::sqrt(-g / lam1);
        out.semi_b = std::sqrt(std::max(0.0, g / lam2));
      } else {
        // Transverse axis along v; swap the roles.
        out.axis_u = v;
        out.axis_v = u;
        out.semi_a = std::sqrt(std::max(0.0, -g / lam2));
        out.semi_b = std::sqrt(std::max(0.0, g / lam1));
      }
      break;
    }
    case ConicTag::IntersectingLines: {
      out.center = center_from();
      const double slope = std::sqrt(-lam1 / lam2);
      const Vec2 d1 = unit({u.x + slope * v.x, u.y + slope * v.y});
      const Vec2 d2 = unit({u.x - slope * v.x, u.y - slope * v.y});
      out.lines.push_back({*out.center, d1});
      out.lines.push_back({*out.center, d2});
      break;
    }
    case ConicTag::Parabola: {
      // lam2 ~ 0: lam1 X^2 + Dp X + Ep Y + F = 0 with Ep != 0.
      const double X0 = -Dp / (2.0 * lam1);
      const double Y0 = -(c.F - Dp * Dp / (4.0 * lam1)) / Ep;
      out.parab_base = {X0 * u.x + Y0 * v.x, X0 * u.y + Y0 * v.y};
      out.parab_tangent = u;
      out.parab_axis = v;
      out.parab_coeff = -lam1 / Ep;
      break;
    }
    case ConicTag::ParallelLines:
    case ConicTag::CoincidentLines: {
      // lam1 X^2 + Dp X + F = 0 (Ep ~ 0); roots give the lines, dir = v.
      const double disc2 = std::max(0.0, Dp * Dp - 4.0 * lam1 * c.F);
      const double rt = std::sqrt(disc2);
      const double x1 = (-Dp + rt) / (2.0 * lam1);
      const double x2 = (-Dp - rt) / (2.0 * lam1);
      out.lines.push_back({{x1 * u.x, x1 * u.y}, v});
      if (out.tag == ConicTag::ParallelLines) out.lines.push_back({{x2 * u.x, x2 * u.y}, v});
      break;
    }
    case ConicTag::SingleLine: {
      const double n2 = c.D * c.D + c.E * c.E;
      out.lines.push_back({{-c.F * c.D / n2, -c.F * c.E / n2}, unit({-c.E, c.D})});
      break;
    }
    case ConicTag::AllPlane:
    case ConicTag::Empty:
      break;
  }
  return out;
}

}  // namespace quadmap
