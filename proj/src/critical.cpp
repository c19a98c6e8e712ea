#include "quadmap/critical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace quadmap {

namespace {

double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

double j0_data_scale(const ConicClass& c) {
  double s = 0;
  if (c.center) s = std::max({s, std::abs(c.center->x), std::abs(c.center->y)});
  s = std::max({s, c.semi_a, c.semi_b});
  for (const auto& l : c.lines) s = std::max({s, std::abs(l.point.x), std::abs(l.point.y)});
  s = std::max({s, std::abs(c.parab_base.x), std::abs(c.parab_base.y)});
  return s;
}

std::vector<Vec2> sample_ellipse(const ConicClass& c, int n) {
  std::vector<Vec2> pts;
  pts.reserve(n);
  // Half-step offset keeps structurally placed cusps (normal forms put one at
  // angle 0) away from the wrap seam of the closed sampling.
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * M_PI * (i + 0.5) / n;
    const double X = c.semi_a * std::cos(th), Y = c.semi_b * std::sin(th);
    pts.push_back({c.center->x + X * c.axis_u.x + Y * c.axis_v.x,
                   c.center->y + X * c.axis_u.y + Y * c.axis_v.y});
  }
  return pts;
}

std::vector<Vec2> sample_hyperbola_branch(const ConicClass& c, int n, double R, int sign) {
  const double a = std::max(c.semi_a, 1e-12);
  const double T = std::log(2.0 * (R / a + 1.0));
  std::vector<Vec2> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = -T + 2.0 * T * i / (n - 1);
    const double X = sign * c.semi_a * std::cosh(t), Y = c.semi_b * std::sinh(t);
    pts.push_back({c.center->x + X * c.axis_u.x + Y * c.axis_v.x,
                   c.center->y + X * c.axis_u.y + Y * c.axis_v.y});
  }
  return pts;
}

std::vector<Vec2> sample_parabola(const ConicClass& c, int n, double R) {
  const double T = std::sqrt(R / std::max(std::abs(c.parab_coeff), 1.0 / R));
  std::vector<Vec2> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = -T + 2.0 * T * i / (n - 1);
    pts.push_back({c.parab_base.x + t * c.parab_tangent.x + c.parab_coeff * t * t * c.parab_axis.x,
                   c.parab_base.y + t * c.parab_tangent.y + c.parab_coeff * t * t * c.parab_axis.y});
  }
  return pts;
}

std::vector<Vec2> sample_line(const Line2& l, int n, double R) {
  std::vector<Vec2> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = -R + 2.0 * R * i / (n - 1);
    pts.push_back({l.point.x + t * l.dir.x, l.point.y + t * l.dir.y});
  }
  return pts;
}

std::vector<Vec2> sample_grid(int n, double R) {
  const int m = std::max(3, static_cast<int>(std::sqrt(static_cast<double>(n))));
  std::vector<Vec2> pts;
  pts.reserve(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      pts.push_back({-R + 2.0 * R * i / (m - 1), -R + 2.0 * R * j / (m - 1)});
  return pts;
}

// Kernel direction of a (numerically) singular 2x2 matrix.
Vec2 kernel_dir(const Mat2& m) {
  const double n1 = std::hypot(m.m11, m.m12);
  const double n2 = std::hypot(m.m21, m.m22);
  Vec2 v = n1 >= n2 ? Vec2{m.m12, -m.m11} : Vec2{m.m22, -m.m21};
  const double nv = norm(v);
  return nv > 0 ? Vec2{v.x / nv, v.y / nv} : Vec2{1, 0};
}

bool is_curve_tag(ConicTag t) {
  switch (t) {
    case ConicTag::Ellipse:
    case ConicTag::Hyperbola:
    case ConicTag::Parabola:
    case ConicTag::IntersectingLines:
    case ConicTag::ParallelLines:
    case ConicTag::CoincidentLines:
    case ConicTag::SingleLine:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string to_string(CriticalSetClass c) {
  switch (c) {
    case CriticalSetClass::Case1_EmptyEmpty: return "1: empty -> empty";
    case CriticalSetClass::Case2_PointPoint: return "2: point -> point";
    case CriticalSetClass::Case3_EllipseThreeCusps: return "3: ellipse -> closed curve with 3 cusps";
    case CriticalSetClass::Case4_HyperbolaTwoCurves: return "4: hyperbola -> two curves, one with cusp";
    case CriticalSetClass::Case5a_TwoRays: return "5a: intersecting lines -> ray U ray";
    case CriticalSetClass::Case5b_RayParabola: return "5b: intersecting lines -> ray U parabola";
    case CriticalSetClass::Case6_ParabolaCusp: return "6: parabola -> curve with cusp";
    case CriticalSetClass::Case7a_LineAndPoint: return "7a: parallel lines -> line U point";
    case CriticalSetClass::Case7b_DoubleLineToPoint: return "7b: coincident lines -> point";
    case CriticalSetClass::Case8a_LineToPoint: return "8a: line -> point";
    case CriticalSetClass::Case8b_LineToLine: return "8b: line -> line";
    case CriticalSetClass::Case8c_LineToParabola: return "8c: line -> parabola";
    case CriticalSetClass::Case9a_PlaneToLine: return "9a: plane -> line";
    case CriticalSetClass::Case9b_PlaneToRay: return "9b: plane -> ray";
    case CriticalSetClass::Case9c_PlaneToParabola: return "9c: plane -> parabola";
  }
  return "?";
}

std::string to_string(ImageKind k) {
  switch (k) {
    case ImageKind::Point: return "point";
    case ImageKind::Ray: return "ray";
    case ImageKind::Line: return "line";
    case ImageKind::Parabola: return "parabola";
  }
  return "?";
}

std::pair<ConicClass, CurveSample> critical_set(const QuadraticMap& q, int n) {
  const ConicCoefficients c = det_jacobian_conic(q);
  const ConicClass cls = classify_conic(c);
  const double R = 10.0 * (1.0 + j0_data_scale(cls));

  CurveSample s;
  switch (cls.tag) {
    case ConicTag::Ellipse:
      s.components.push_back(sample_ellipse(cls, n));
      break;
    case ConicTag::Hyperbola:
      s.components.push_back(sample_hyperbola_branch(cls, n, R, +1));
      s.components.push_back(sample_hyperbola_branch(cls, n, R, -1));
      break;
    case ConicTag::Parabola:
      s.components.push_back(sample_parabola(cls, n, R));
      break;
    case ConicTag::IntersectingLines:
    case ConicTag::ParallelLines:
      s.components.push_back(sample_line(cls.lines[0], n, R));
      s.components.push_back(sample_line(cls.lines[1], n, R));
      break;
    case ConicTag::CoincidentLines:
    case ConicTag::SingleLine:
      s.components.push_back(sample_line(cls.lines[0], n, R));
      break;
    case ConicTag::Point:
      s.components.push_back({*cls.center});
      break;
    case ConicTag::AllPlane:
      s.components.push_back(sample_grid(n, R));
      break;
    case ConicTag::Empty:
      break;
  }
  for (const auto& comp : s.components) {
    std::vector<Vec2> img;
    img.reserve(comp.size());
    for (const auto& p : comp) img.push_back(evaluate(q, p));
    s.images.push_back(std::move(img));
  }
  if (is_curve_tag(cls.tag)) {
    auto [cnt, locs] = count_cusps(q, s);
    (void)cnt;
    s.cusps = locs;
  }
  return {cls, s};
}

CurveSample sample_critical_image(const QuadraticMap& q, int n) {
  auto [cls, s] = critical_set(q, n);
  if (cls.tag == ConicTag::Empty) throw empty_set_error("J0 is empty");
  return s;
}

std::pair<int, std::vector<Vec2>> count_cusps(const QuadraticMap& q,
                                              const CurveSample& sample) {
  if (sample.components.empty()) throw not_a_curve_error("J0 has no curve component");
  const ConicTag tag = classify_conic(det_jacobian_conic(q)).tag;
  if (!is_curve_tag(tag)) throw not_a_curve_error("J0 is not a 1-dimensional curve");
  const bool closed = tag == ConicTag::Ellipse;

  int count = 0;
  std::vector<Vec2> locs;
  for (const auto& comp : sample.components) {
    if (comp.size() < 5) continue;
    std::vector<Vec2> pts = comp;
    if (closed) pts.push_back(comp.front());
    const std::size_t m = pts.size();

    // Tangency functional phi = det([tangent, kernel]) with the kernel sign
    // propagated for continuity.
    std::vector<double> phi(m);
    Vec2 prev_v{0, 0};
    for (std::size_t i = 0; i < m; ++i) {
      const Vec2& p = pts[i];
      const Vec2& pa = pts[i == 0 ? 0 : i - 1];
      const Vec2& pb = pts[std::min(m - 1, i + 1)];
      Vec2 t{pb.x - pa.x, pb.y - pa.y};
      const double nt = norm(t);
      if (nt > 0) t = {t.x / nt, t.y / nt};
      Vec2 v = kernel_dir(jacobian(q, p));
      if (i > 0 && dot(v, prev_v) < 0) v = {-v.x, -v.y};
      prev_v = v;
      phi[i] = cross(t, v);
    }
    // A cusp landing exactly on a sample point gives phi = 0 there instead of
    // a sign change across it.
    double phimax = 0;
    for (double v : phi) phimax = std::max(phimax, std::abs(v));
    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (std::abs(phi[i]) <= 1e-12 * std::max(phimax, 1e-300)) {
        locs.push_back(pts[i]);
        ++count;
      }
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (phi[i] == 0 || phi[i + 1] == 0) continue;
      if ((phi[i] < 0) == (phi[i + 1] < 0)) continue;
      // Bisection along the segment.
      Vec2 a = pts[i], b = pts[i + 1];
      Vec2 seg{b.x - a.x, b.y - a.y};
      const double ns = norm(seg);
      if (ns > 0) seg = {seg.x / ns, seg.y / ns};
      Vec2 ref = kernel_dir(jacobian(q, a));
      double lo = 0, hi = 1;
      double flo = phi[i];
      for (int it = 0; it < 60 && (hi - lo) * ns > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Vec2 pm{a.x + mid * (b.x - a.x), a.y + mid * (b.y - a.y)};
        Vec2 v = kernel_dir(jacobian(q, pm));
        if (dot(v, ref) < 0) v = {-v.x, -v.y};
        const double fm = cross(seg, v);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double t = 0.5 * (lo + hi);
      locs.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
      ++count;
    }
  }
  // Merge near-duplicates.
  std::vector<Vec2> merged;
  for (const auto& p : locs) {
    bool dup = false;
    for (const auto& qp : merged)
      if (std::hypot(p.x - qp.x, p.y - qp.y) < 1e-6 * (1.0 + norm(p))) dup = true;
    if (!dup) merged.push_back(p);
  }
  return {static_cast<int>(merged.size()), merged};
}

ImageKind line_image_kind(const QuadraticMap& q, const Line2& line) {
  const Vec2& p = line.point;
  const Vec2& d = line.dir;
  // Q(p + t d) = c0 + c1 t + c2 t^2 componentwise.
  const Vec2 c2{q.a20 * d.x * d.x + q.a11 * d.x * d.y + q.a02 * d.y * d.y,
                q.b20 * d.x * d.x + q.b11 * d.x * d.y + q.b02 * d.y * d.y};
  const Mat2 J = jacobian(q, p);
  const Vec2 c1{J.m11 * d.x + J.m12 * d.y, J.m21 * d.x + J.m22 * d.y};
  const double s = std::max(map_scale(q), 1e-300) * (1.0 + norm(p)) * (1.0 + norm(p));
  const double tol = 1e2 * kTol * s;
  const bool z2 = norm(c2) <= tol;
  const bool z1 = norm(c1) <= tol;
  if (z2 && z1) return ImageKind::Point;
  if (z2) return ImageKind::Line;
  if (std::abs(cross(c2, c1)) <= tol * (norm(c2) + norm(c1))) return ImageKind::Ray;
  return ImageKind::Parabola;
}

ImageKind plane_image_kind(const QuadraticMap& q) {
  const double R = 8.0;
  auto images_for = [&](double radius) {
    std::vector<Vec2> img;
    const int m = 25;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Vec2 p{-radius + 2 * radius * i / (m - 1), -radius + 2 * radius * j / (m - 1)};
        img.push_back(evaluate(q, p));
      }
    return img;
  };
  const auto img = images_for(R);
  // Total-least-squares line through the image points.
  double mx = 0, my = 0;
  for (const auto& p : img) {
    mx += p.x;
    my += p.y;
  }
  mx /= img.size();
  my /= img.size();
  double sxx = 0, sxy = 0, syy = 0, spread = 0;
  for (const auto& p : img) {
    const double dx = p.x - mx, dy = p.y - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
    spread = std::max({spread, std::abs(dx), std::abs(dy)});
  }
  const double tr = sxx + syy, det = sxx * syy - sxy * sxy;
  const double l1 = tr / 2 + std::sqrt(std::max(0.0, tr * tr / 4 - det));
  Vec2 dir = std::abs(sxy) > 1e-300 ? Vec2{l1 - syy, sxy} : (sxx >= syy ? Vec2{1, 0} : Vec2{0, 1});
  const double nd = norm(dir);
  dir = {dir.x / nd, dir.y / nd};
  double max_perp = 0;
  for (const auto& p : img)
    max_perp = std::max(max_perp, std::abs(-(p.x - mx) * dir.y + (p.y - my) * dir.x));
  if (max_perp > 1e-6 * std::max(spread, 1.0)) return ImageKind::Parabola;

  // Linear support: ray iff the 1-d projections are bounded on one side as the
  // sampled disk grows.
  auto trange = [&](double radius) {
    double lo = 1e300, hi = -1e300;
    for (const auto& p : images_for(radius)) {
      const double t = (p.x - mx) * dir.x + (p.y - my) * dir.y;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    return std::pair{lo, hi};
  };
  // A ray keeps one endpoint fixed while the other side extends; a line
  // extends on both sides (possibly at different rates).
  const auto [lo1, hi1] = trange(R);
  const auto [lo2, hi2] = trange(2 * R);
  const double span = std::max(hi1 - lo1, 1e-12);
  const bool grows_lo = lo2 < lo1 - 0.02 * span;
  const bool grows_hi = hi2 > hi1 + 0.02 * span;
  if (grows_lo && grows_hi) return ImageKind::Line;
  return ImageKind::Ray;
}

CriticalSetClass j0j1_class(const QuadraticMap& q) {
  const ConicClass cls = classify_conic(det_jacobian_conic(q));
  switch (cls.tag) {
    case ConicTag::Empty:
      return CriticalSetClass::Case1_EmptyEmpty;
    case ConicTag::Point:
      return CriticalSetClass::Case2_PointPoint;
    case ConicTag::Ellipse:
      return CriticalSetClass::Case3_EllipseThreeCusps;
    case ConicTag::Hyperbola:
      return CriticalSetClass::Case4_HyperbolaTwoCurves;
    case ConicTag::IntersectingLines: {
      int rays = 0;
      for (const auto& l : cls.lines)
        if (line_image_kind(q, l) != ImageKind::Parabola) ++rays;
      return rays == 2 ? CriticalSetClass::Case5a_TwoRays
                       : CriticalSetClass::Case5b_RayParabola;
    }
    case ConicTag::Parabola:
      return CriticalSetClass::Case6_ParabolaCusp;
    case ConicTag::ParallelLines:
      return CriticalSetClass::Case7a_LineAndPoint;
    case ConicTag::CoincidentLines:
      return CriticalSetClass::Case7b_DoubleLineToPoint;
    case ConicTag::SingleLine:
      switch (line_image_kind(q, cls.lines[0])) {
        case ImageKind::Point: return CriticalSetClass::Case8a_LineToPoint;
        case ImageKind::Line: return CriticalSetClass::Case8b_LineToLine;
        default: return CriticalSetClass::Case8c_LineToParabola;
      }
    case ConicTag::AllPlane:
      switch (plane_image_kind(q)) {
        case ImageKind::Line: return CriticalSetClass::Case9a_PlaneToLine;
        case ImageKind::Ray: return CriticalSetClass::Case9b_PlaneToRay;
        default: return CriticalSetClass::Case9c_PlaneToParabola;
      }
  }
  return CriticalSetClass::Case1_EmptyEmpty;
}

}  // namespace quadmap
