#include "quadmap/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>

#include "quadmap/roots.hpp"

namespace quadmap {

namespace {

double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

Vec2 unit_or(const Vec2& v, const Vec2& fallback) {
  const double n = norm(v);
  return n > 0 ? Vec2{v.x / n, v.y / n} : fallback;
}

// ---- small dense polynomials in x (ascending coefficients) ----
using Poly = std::vector<double>;

Poly pmul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly psub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return a;
}

Poly padd(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

Poly psq(const Poly& a) { return pmul(a, a); }

// The three y-coefficients of a component polynomial viewed in y:
// P(x, y) = Ay(x) y^2 + By(x) y + Cy(x).
Poly y2_coeff(const QuadPolyT<double>& p) { return {p.c02}; }
Poly y1_coeff(const QuadPolyT<double>& p) { return {p.c01, p.c11}; }
Poly y0_coeff(const QuadPolyT<double>& p) { return {p.c00, p.c10, p.c20}; }

double poly_scale(const QuadPolyT<double>& p) {
  double s = 0;
  for (double c : {p.c20, p.c11, p.c02, p.c10, p.c01, p.c00}) s = std::max(s, std::abs(c));
  return s;
}

bool poly_zero(const QuadPolyT<double>& p, double tol) { return poly_scale(p) <= tol; }

int ydeg(const QuadPolyT<double>& p, double tol) {
  if (std::abs(p.c02) > tol) return 2;
  if (std::abs(p.c11) > tol || std::abs(p.c01) > tol) return 1;
  return 0;
}

ConicCoefficients to_conic(const QuadPolyT<double>& p) {
  return {p.c20, p.c11, p.c02, p.c10, p.c01, p.c00};
}

InfiniteKind kind_from_tag(ConicTag t) {
  switch (t) {
    case ConicTag::Ellipse: return InfiniteKind::Circle;
    case ConicTag::Hyperbola: return InfiniteKind::Hyperbola;
    case ConicTag::Parabola: return InfiniteKind::Parabola;
    case ConicTag::IntersectingLines:
    case ConicTag::ParallelLines: return InfiniteKind::PairOfLines;
    case ConicTag::AllPlane: return InfiniteKind::Plane;
    default: return InfiniteKind::Line;
  }
}

bool same_line(const Line2& a, const Line2& b) {
  if (std::abs(cross(a.dir, b.dir)) > 1e-6) return false;
  const Vec2 d{b.point.x - a.point.x, b.point.y - a.point.y};
  return std::abs(cross(a.dir, d)) <= 1e-6 * (1.0 + norm(d));
}

// Shape of the common zero set of two conics whose resultant vanishes
// identically (an infinite solution set).
InfiniteKind classify_common(const QuadPolyT<double>& p1, const QuadPolyT<double>& p2,
                             double tol_rel) {
  const ConicClass c1 = classify_conic(to_conic(p1), tol_rel);
  const ConicClass c2 = classify_conic(to_conic(p2), tol_rel);
  auto nondeg = [](ConicTag t) {
    return t == ConicTag::Ellipse || t == ConicTag::Hyperbola || t == ConicTag::Parabola;
  };
  // A shared component of a nondegenerate conic is the whole conic.
  if (nondeg(c1.tag)) return kind_from_tag(c1.tag);
  if (nondeg(c2.tag)) return kind_from_tag(c2.tag);
  if (c1.lines.empty() || c2.lines.empty()) return InfiniteKind::Line;
  int shared = 0;
  for (const auto& la : c1.lines)
    for (const auto& lb : c2.lines)
      if (same_line(la, lb)) ++shared;
  return shared >= 2 ? InfiniteKind::PairOfLines : InfiniteKind::Line;
}

std::vector<double> cluster(std::vector<double> xs, double tol_rel) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs)
    if (out.empty() || x - out.back() > tol_rel * (1.0 + std::abs(x))) out.push_back(x);
  return out;
}

struct Candidate {
  Vec2 p;
  bool ok;
};

Candidate polish_and_validate(const QuadraticMap& q, const QuadPolyT<double>& p1,
                              const QuadPolyT<double>& p2, double s, Vec2 p) {
  // Damped Gauss-Newton to full convergence: a candidate left part-way (e.g.
  // one seeded from the wrong back-substituted branch) would otherwise survive
  // as a near-duplicate outside the deduplication radius.  The damping keeps
  // the iteration going where the Jacobian is singular (tangency points, and
  // the degenerate classes whose Jacobian vanishes identically).
  double lambda = 1e-12;
  for (int it = 0; it < 60; ++it) {
    const Mat2 J = jacobian(q, p);
    const double f1 = p1(p.x, p.y), f2 = p2(p.x, p.y);
    const double g11 = J.m11 * J.m11 + J.m21 * J.m21;
    const double g12 = J.m11 * J.m12 + J.m21 * J.m22;
    const double g22 = J.m12 * J.m12 + J.m22 * J.m22;
    const double gm = std::max({g11, g22, 1e-300});
    const double b1 = J.m11 * f1 + J.m21 * f2;
    const double b2 = J.m12 * f1 + J.m22 * f2;
    const double a11 = g11 + lambda * gm, a22 = g22 + lambda * gm;
    const double d = a11 * a22 - g12 * g12;
    if (!(d > 0)) break;
    const double dx = (a22 * b1 - g12 * b2) / d;
    const double dy = (-g12 * b1 + a11 * b2) / d;
    if (!std::isfinite(dx) || !std::isfinite(dy)) break;
    const Vec2 cand{p.x - dx, p.y - dy};
    const double c1 = p1(cand.x, cand.y), c2 = p2(cand.x, cand.y);
    if (c1 * c1 + c2 * c2 <= f1 * f1 + f2 * f2) {
      p = cand;
      lambda = std::max(lambda * 0.25, 1e-12);
      if (std::hypot(dx, dy) <= 1e-14 * (1.0 + norm(p))) break;
    } else {
      lambda *= 8.0;
      if (lambda > 1e10) break;
    }
  }
  const double m = 1.0 + std::abs(p.x) + std::abs(p.y);
  const double res = std::max(std::abs(p1(p.x, p.y)), std::abs(p2(p.x, p.y)));
  // Converged candidates sit at near-machine residual relative to the local
  // polynomial magnitude s*m^2; spurious least-squares minima do not get
  // anywhere near this, even in the badly conditioned far field.
  return {p, res <= 1e-12 * s * m * m};
}

PreimageCardinality finite_result(const QuadraticMap& q, std::vector<Vec2> sols) {
  // Geometric deduplication: eliminant roots that split off a tangency merge
  // back into one preimage here.  At a critical preimage the Newton polish
  // stalls (singular Jacobian) and a tangency cluster can be ~1e-5 wide, so
  // near-singular points get a wider merge radius.
  auto near_singular = [&](const Vec2& p) {
    const Mat2 J = jacobian(q, p);
    const double js = std::max({std::abs(J.m11), std::abs(J.m12), std::abs(J.m21),
                                std::abs(J.m22), 1e-300});
    return std::abs(J.det()) <= 1e-6 * js * js;
  };
  std::vector<Vec2> kept;
  std::vector<bool> kept_sing;
  for (const auto& p : sols) {
    const bool ps = near_singular(p);
    bool dup = false;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const double r = (ps && kept_sing[i]) ? 1e-3 : 1e-6;
      if (std::hypot(p.x - kept[i].x, p.y - kept[i].y) <= r * (1.0 + norm(p))) dup = true;
    }
    if (!dup) {
      kept.push_back(p);
      kept_sing.push_back(ps);
    }
  }
  PreimageCardinality r;
  r.count = static_cast<int>(kept.size());
  r.points = std::move(kept);
  return r;
}

PreimageCardinality infinite_result(InfiniteKind k) {
  PreimageCardinality r;
  r.is_infinite = true;
  r.kind = k;
  return r;
}

}  // namespace

std::string to_string(InfiniteKind k) {
  switch (k) {
    case InfiniteKind::Line: return "line";
    case InfiniteKind::PairOfLines: return "pair-of-lines";
    case InfiniteKind::Circle: return "circle";
    case InfiniteKind::Parabola: return "parabola";
    case InfiniteKind::Hyperbola: return "hyperbola";
    case InfiniteKind::Plane: return "plane";
  }
  return "?";
}

std::string to_string(const PreimageCardinality& c) {
  if (c.is_infinite) return "inf (" + to_string(c.kind) + ")";
  return std::to_string(c.count);
}

std::string to_string(const PreimageProfile& p) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int v : p.finite) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  if (p.has_infinite) {
    if (!first) os << ',';
    os << "inf";
  }
  os << '}';
  return os.str();
}

bool profiles_match(const PreimageProfile& a, const PreimageProfile& b) {
  return a.finite == b.finite && a.has_infinite == b.has_infinite;
}

PreimageCardinality preimage_count(const QuadraticMap& q, const Vec2& target) {
  QuadPolyT<double> p1 = q.first();
  p1.c00 -= target.x;
  QuadPolyT<double> p2 = q.second();
  p2.c00 -= target.y;
  const double s = std::max({poly_scale(p1), poly_scale(p2), 1e-300});
  const double tol = kTol * s;

  const bool z1 = poly_zero(p1, tol), z2 = poly_zero(p2, tol);
  if (z1 && z2) return infinite_result(InfiniteKind::Plane);
  if (z1 || z2) {
    // One equation is trivial; the solution set is the other conic.
    const ConicClass cc = classify_conic(to_conic(z1 ? p2 : p1));
    if (cc.tag == ConicTag::Empty) return finite_result(q, {});
    if (cc.tag == ConicTag::Point) return finite_result(q, {*cc.center});
    return infinite_result(kind_from_tag(cc.tag));
  }

  const int d1 = ydeg(p1, tol), d2 = ydeg(p2, tol);

  auto local_tol = [&](double x) { return tol * (1.0 + std::abs(x)) * (1.0 + std::abs(x)); };

  auto xroots = [&](const QuadPolyT<double>& p) {
    return cluster(real_roots({p.c00, p.c10, p.c20}), 1e-8);
  };

  // Solve P(x*, y) = 0 in y; returns false when P(x*, .) vanishes identically
  // (a vertical solution line).
  auto yroots_at = [&](const QuadPolyT<double>& p, double x, std::vector<double>& ys) {
    const double a = p.c02, b = p.c11 * x + p.c01, c = p(x, 0.0);
    const double tl = local_tol(x);
    if (std::abs(a) <= tl && std::abs(b) <= tl && std::abs(c) <= tl) return false;
    for (double y : real_roots({c, b, a})) ys.push_back(y);
    return true;
  };

  if (d1 == 0 && d2 == 0) {
    // Two families of vertical lines; solutions are the common ones.
    int lines = 0;
    for (double r1 : xroots(p1))
      for (double r2 : xroots(p2))
        if (std::abs(r1 - r2) <= 1e-6 * (1.0 + std::abs(r1))) ++lines;
    if (lines > 0)
      return infinite_result(lines >= 2 ? InfiniteKind::PairOfLines : InfiniteKind::Line);
    return finite_result(q, {});
  }

  if (d1 == 0 || d2 == 0) {
    const QuadPolyT<double>& pure = d1 == 0 ? p1 : p2;
    const QuadPolyT<double>& other = d1 == 0 ? p2 : p1;
    int lines = 0;
    std::vector<Vec2> sols;
    for (double x : xroots(pure)) {
      std::vector<double> ys;
      if (!yroots_at(other, x, ys)) {
        ++lines;
        continue;
      }
      for (double y : ys) {
        const Candidate c = polish_and_validate(q, p1, p2, s, {x, y});
        if (c.ok) sols.push_back(c.p);
      }
    }
    if (lines > 0)
      return infinite_result(lines >= 2 ? InfiniteKind::PairOfLines : InfiniteKind::Line);
    return finite_result(q, std::move(sols));
  }

  // Sylvester resultant in y, case split by the actual y-degrees.  The
  // identically-zero test needs a scale built from the same coefficient
  // products as the resultant itself: when the y-leading coefficients are
  // structurally small (a nearly axis-aligned degenerate map), the resultant
  // carries those small factors and a bare power of the map scale would
  // misread a plainly nonzero resultant as zero.
  Poly R;
  double rscale = 0;
  const Poly a1 = y2_coeff(p1), b1 = y1_coeff(p1), c1 = y0_coeff(p1);
  const Poly a2 = y2_coeff(p2), b2 = y1_coeff(p2), c2 = y0_coeff(p2);
  auto nrm = [](const Poly& p) {
    double m = 0;
    for (double v : p) m = std::max(m, std::abs(v));
    return m;
  };
  const double na1 = nrm(a1), nb1 = nrm(b1), nc1 = nrm(c1);
  const double na2 = nrm(a2), nb2 = nrm(b2), nc2 = nrm(c2);
  if (d1 == 2 && d2 == 2) {
    R = psub(psq(psub(pmul(a1, c2), pmul(a2, c1))),
             pmul(psub(pmul(a1, b2), pmul(a2, b1)), psub(pmul(b1, c2), pmul(b2, c1))));
    const double t1 = na1 * nc2 + na2 * nc1;
    rscale = t1 * t1 + (na1 * nb2 + na2 * nb1) * (nb1 * nc2 + nb2 * nc1);
  } else if (d1 == 2 && d2 == 1) {
    R = padd(psub(pmul(a1, psq(c2)), pmul(b1, pmul(b2, c2))), pmul(c1, psq(b2)));
    rscale = na1 * nc2 * nc2 + nb1 * nb2 * nc2 + nc1 * nb2 * nb2;
  } else if (d1 == 1 && d2 == 2) {
    R = padd(psub(pmul(a2, psq(c1)), pmul(b2, pmul(b1, c1))), pmul(c2, psq(b1)));
    rscale = na2 * nc1 * nc1 + nb2 * nb1 * nc1 + nc2 * nb1 * nb1;
  } else {
    R = psub(pmul(b1, c2), pmul(b2, c1));
    rscale = nb1 * nc2 + nb2 * nc1;
  }

  double rmax = 0;
  for (double c : R) rmax = std::max(rmax, std::abs(c));
  if (rmax <= kTol * std::max(rscale, 1e-300))
    return infinite_result(classify_common(p1, p2, kTol));

  int lines = 0;
  std::vector<Vec2> sols;
  for (double x : cluster(real_roots(R), 1e-8)) {
    std::vector<double> ys;
    const bool n1 = yroots_at(p1, x, ys);
    const bool n2 = yroots_at(p2, x, ys);
    if (!n1 && !n2) {
      // Both components vanish on the whole vertical line x = x*.
      ++lines;
      continue;
    }
    for (double y : ys) {
      const Candidate c = polish_and_validate(q, p1, p2, s, {x, y});
      if (c.ok) sols.push_back(c.p);
    }
  }
  if (lines > 0)
    return infinite_result(lines >= 2 ? InfiniteKind::PairOfLines : InfiniteKind::Line);
  return finite_result(q, std::move(sols));
}

namespace {

// Stratified target points: J1 samples, offsets around them, distinguished
// points, images of random domain points, and random targets.
std::vector<Vec2> profile_targets(const QuadraticMap& q, int n, unsigned seed) {
  std::vector<Vec2> targets;
  auto [cls, sample] = critical_set(q, 96);

  std::vector<Vec2> jpts;
  const bool bounded = cls.tag == ConicTag::Ellipse || cls.tag == ConicTag::Point;
  for (std::size_t ci = 0; ci < sample.images.size(); ++ci) {
    const auto& img = sample.images[ci];
    if (img.empty()) continue;
    std::size_t lo = 0, hi = img.size();
    if (!bounded && cls.tag != ConicTag::AllPlane && img.size() > 8) {
      lo = img.size() / 4;  // stay in the moderate-|t| middle of the component
      hi = img.size() - img.size() / 4;
    }
    const std::size_t stride = std::max<std::size_t>(1, (hi - lo) / 24);
    for (std::size_t i = lo; i < hi; i += stride) jpts.push_back(img[i]);
  }

  double iscale = 0;
  for (const auto& p : jpts) iscale = std::max({iscale, std::abs(p.x), std::abs(p.y)});
  iscale = std::max(iscale, norm(evaluate(q, {0, 0})));

  for (const auto& p : jpts) targets.push_back(p);

  // Offset directions: compass plus directions read off the line geometry
  // (image directions of J0 lines and of the family of parallel lines through
  // a collapsed J0 line — the latter spans the "missing line" of case 8a).
  // Exact axis components keep axis-aligned offsets exactly on coordinate
  // lines (cos(pi/2) != 0 in floating point, which matters for normal forms
  // whose zero-count region is bounded by an axis).
  const double rt = std::sqrt(0.5);
  std::vector<Vec2> dirs = {{1, 0},  {rt, rt},   {0, 1},  {-rt, rt},
                            {-1, 0}, {-rt, -rt}, {0, -1}, {rt, -rt}};
  for (const auto& l : cls.lines) {
    const Mat2 J = jacobian(q, l.point);
    const Vec2 c1{J.m11 * l.dir.x + J.m12 * l.dir.y, J.m21 * l.dir.x + J.m22 * l.dir.y};
    if (norm(c1) > 1e-9) {
      const Vec2 d = unit_or(c1, {1, 0});
      dirs.push_back(d);
      dirs.push_back({-d.x, -d.y});
    } else {
      const Vec2 nvec{-l.dir.y, l.dir.x};
      const double eps = 1e-3;
      const Vec2 po{l.point.x + eps * nvec.x, l.point.y + eps * nvec.y};
      const Mat2 Jo = jacobian(q, po);
      const Vec2 cm{Jo.m11 * l.dir.x + Jo.m12 * l.dir.y,
                    Jo.m21 * l.dir.x + Jo.m22 * l.dir.y};
      const Vec2 d = unit_or(cm, {1, 0});
      dirs.push_back(d);
      dirs.push_back({-d.x, -d.y});
    }
  }

  const std::size_t astride = std::max<std::size_t>(1, jpts.size() / 6);
  for (std::size_t i = 0; i < jpts.size(); i += astride) {
    const Vec2& a = jpts[i];
    for (const auto& d : dirs)
      for (double r : {2e-3, 0.3, 1.0}) {
        const double rr = r * (1.0 + norm(a));
        targets.push_back({a.x + rr * d.x, a.y + rr * d.y});
      }
  }

  // Distinguished points.
  if (cls.center) targets.push_back(evaluate(q, *cls.center));
  for (const auto& c : sample.cusps) targets.push_back(evaluate(q, c));
  if (cls.tag == ConicTag::AllPlane) {
    // Endpoint of a ray image: minimize the image's projection on its
    // supporting direction — an exactly solvable quadratic problem.
    double mx = 0, my = 0, sxx = 0, sxy = 0, syy = 0;
    std::vector<Vec2> img;
    const int m = 13;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        img.push_back(evaluate(q, {-8.0 + 16.0 * i / (m - 1), -8.0 + 16.0 * j / (m - 1)}));
    for (const auto& p : img) {
      mx += p.x;
      my += p.y;
    }
    mx /= img.size();
    my /= img.size();
    for (const auto& p : img) {
      sxx += (p.x - mx) * (p.x - mx);
      sxy += (p.x - mx) * (p.y - my);
      syy += (p.y - my) * (p.y - my);
    }
    const double tr = sxx + syy, det = sxx * syy - sxy * sxy;
    const double l1 = tr / 2 + std::sqrt(std::max(0.0, tr * tr / 4 - det));
    Vec2 dir = std::abs(sxy) > 1e-300 ? Vec2{l1 - syy, sxy}
                                      : (sxx >= syy ? Vec2{1, 0} : Vec2{0, 1});
    dir = unit_or(dir, {1, 0});
    for (double sgn : {1.0, -1.0}) {
      const double g20 = sgn * (dir.x * q.a20 + dir.y * q.b20);
      const double g11 = sgn * (dir.x * q.a11 + dir.y * q.b11);
      const double g02 = sgn * (dir.x * q.a02 + dir.y * q.b02);
      const double g10 = sgn * (dir.x * q.a10 + dir.y * q.b10);
      const double g01 = sgn * (dir.x * q.a01 + dir.y * q.b01);
      const double H11 = 2 * g20, H12 = g11, H22 = 2 * g02;
      const double dH = H11 * H22 - H12 * H12;
      if (dH > 1e-12 * std::max(map_scale(q), 1.0) && H11 + H22 > 0) {
        const Vec2 pstar{(-g10 * H22 + g01 * H12) / dH, (-H11 * g01 + H12 * g10) / dH};
        targets.push_back(evaluate(q, pstar));
      }
    }
  }

  std::mt19937_64 rng(seed);
  const double Rbox = 1.0 + 2.0 * iscale;
  std::uniform_real_distribution<double> U(-Rbox, Rbox);
  std::uniform_real_distribution<double> Ud(-4.0, 4.0);
  const int want = std::max(n, 200);
  const int nr = std::max(20, (want - static_cast<int>(targets.size())) / 2);
  for (int i = 0; i < nr; ++i) targets.push_back(evaluate(q, {Ud(rng), Ud(rng)}));
  for (int i = 0; i < nr; ++i) targets.push_back({U(rng), U(rng)});
  return targets;
}

}  // namespace

PreimageProfile preimage_profile(const QuadraticMap& q, int n, unsigned seed) {
  PreimageProfile prof;
  for (const auto& t : profile_targets(q, n, seed)) {
    const PreimageCardinality c = preimage_count(q, t);
    if (c.is_infinite) {
      prof.has_infinite = true;
      prof.kinds.insert(c.kind);
    } else {
      prof.finite.insert(c.count);
    }
  }
  return prof;
}

PreimageProfile reference_profile(ClassLabel l) {
  auto make = [](std::set<int> f, bool inf_) {
    PreimageProfile p;
    p.finite = std::move(f);
    p.has_infinite = inf_;
    return p;
  };
  switch (l) {
    case ClassLabel::E1: return make({2, 3, 4}, false);
    case ClassLabel::E2: return make({1, 2}, false);
    case ClassLabel::H1: return make({0, 1, 2, 3, 4}, false);
    case ClassLabel::H2: return make({0, 1, 2, 3, 4}, false);
    case ClassLabel::H3: return make({0, 1, 2, 4}, false);
    case ClassLabel::P1: return make({1, 2, 3}, false);
    case ClassLabel::P2: return make({0, 1, 2}, true);
    case ClassLabel::P3: return make({0, 2}, true);
    case ClassLabel::DE1: return make({0, 1, 2}, false);
    case ClassLabel::DE2: return make({0, 1}, true);
    case ClassLabel::DE3: return make({0}, true);
    case ClassLabel::DH1: return make({0, 1, 2}, false);
    case ClassLabel::DH2: return make({0, 1}, true);
    case ClassLabel::DP1: return make({1}, false);
    case ClassLabel::DP2: return make({0, 1, 2}, false);
    case ClassLabel::DP3: return make({0}, true);
    case ClassLabel::DP4: return make({0}, true);
    case ClassLabel::DP5: return make({0}, true);
  }
  return {};
}

ConvexityReport range_convexity(const QuadraticMap& q, int n, unsigned seed) {
  std::vector<Vec2> dom;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      dom.push_back({-3.0 + i, -3.0 + j});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-4.0, 4.0);
  while (static_cast<int>(dom.size()) < std::max(n, 100)) dom.push_back({U(rng), U(rng)});

  std::vector<Vec2> img;
  img.reserve(dom.size());
  for (const auto& p : dom) img.push_back(evaluate(q, p));

  auto member = [&](const Vec2& t) {
    const PreimageCardinality c = preimage_count(q, t);
    return c.is_infinite || c.count >= 1;
  };

  std::uniform_int_distribution<std::size_t> pick(0, img.size() - 1);
  const int pairs = 1500;
  for (int it = 0; it < pairs; ++it) {
    std::size_t i, j;
    if (it < 48 * 48 && it / 48 < static_cast<int>(img.size()) &&
        it % 48 < static_cast<int>(img.size())) {
      i = it / 48;
      j = it % 48;
    } else {
      i = pick(rng);
      j = pick(rng);
    }
    if (i == j) continue;
    const Vec2 mid{0.5 * (img[i].x + img[j].x), 0.5 * (img[i].y + img[j].y)};
    if (!member(mid)) return {false, img[i], img[j], mid};
  }
  return {};
}

CriticalSetClass critical_set_class_of(ClassLabel l) {
  switch (l) {
    case ClassLabel::E1: return CriticalSetClass::Case3_EllipseThreeCusps;
    case ClassLabel::E2: return CriticalSetClass::Case2_PointPoint;
    case ClassLabel::H1: return CriticalSetClass::Case4_HyperbolaTwoCurves;
    case ClassLabel::H2: return CriticalSetClass::Case5b_RayParabola;
    case ClassLabel::H3: return CriticalSetClass::Case5a_TwoRays;
    case ClassLabel::P1: return CriticalSetClass::Case6_ParabolaCusp;
    case ClassLabel::P2: return CriticalSetClass::Case7a_LineAndPoint;
    case ClassLabel::P3: return CriticalSetClass::Case7b_DoubleLineToPoint;
    case ClassLabel::DE1: return CriticalSetClass::Case8c_LineToParabola;
    case ClassLabel::DE2: return CriticalSetClass::Case8a_LineToPoint;
    case ClassLabel::DE3: return CriticalSetClass::Case9a_PlaneToLine;
    case ClassLabel::DH1: return CriticalSetClass::Case8c_LineToParabola;
    case ClassLabel::DH2: return CriticalSetClass::Case9b_PlaneToRay;
    case ClassLabel::DP1: return CriticalSetClass::Case1_EmptyEmpty;
    case ClassLabel::DP2: return CriticalSetClass::Case8b_LineToLine;
    case ClassLabel::DP3: return CriticalSetClass::Case9a_PlaneToLine;
    case ClassLabel::DP4: return CriticalSetClass::Case9c_PlaneToParabola;
    case ClassLabel::DP5: return CriticalSetClass::Case9b_PlaneToRay;
  }
  return CriticalSetClass::Case1_EmptyEmpty;
}

ClassLabel smooth_class_of(ClassLabel l) {
  switch (l) {
    case ClassLabel::DH1:
    case ClassLabel::DP2: return ClassLabel::DE1;
    case ClassLabel::DP4: return ClassLabel::DP3;
    default: return l;
  }
}

QuadraticMap smooth_witness_k1() {
  QuadraticMap m;
  m.a10 = 1;
  m.a02 = 1;
  m.b01 = 1;
  return m;
}

QuadraticMap smooth_witness_k2() {
  QuadraticMap m;
  m.a10 = 1;
  m.a02 = -1;
  m.b01 = 1;
  return m;
}

QuadraticMap smooth_witness_h() {
  QuadraticMap m;
  m.a01 = 1;
  m.b10 = 1;
  m.b02 = -1;
  return m;
}

double verify_smooth_collapse(int n_points, unsigned seed) {
  const QuadraticMap de1 = normal_form(ClassLabel::DE1);
  const QuadraticMap dh1 = normal_form(ClassLabel::DH1);
  const QuadraticMap dp2 = normal_form(ClassLabel::DP2);
  const QuadraticMap dp3 = normal_form(ClassLabel::DP3);
  const QuadraticMap dp4 = normal_form(ClassLabel::DP4);
  const QuadraticMap k1 = smooth_witness_k1(), k2 = smooth_witness_k2(),
                     h = smooth_witness_h();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  double worst = 0;
  auto upd = [&](const Vec2& a, const Vec2& b) {
    worst = std::max({worst, std::abs(a.x - b.x), std::abs(a.y - b.y)});
  };
  for (int i = 0; i < n_points; ++i) {
    const Vec2 p{U(rng), U(rng)};
    upd(evaluate(k1, evaluate(de1, p)), evaluate(dp2, p));
    upd(evaluate(k2, evaluate(dh1, p)), evaluate(dp2, p));
    upd(evaluate(dp3, evaluate(h, p)), {p.x, 0.0});
    upd(evaluate(h, evaluate(dp4, p)), {p.x, 0.0});
  }
  return worst;
}

namespace {

struct LabelData {
  ConicTag j0;
  CriticalSetClass csc;
  PreimageProfile profile;
  bool convex;
};

const LabelData& label_data(ClassLabel l) {
  static std::mutex mu;
  static std::array<std::unique_ptr<LabelData>, 18> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[static_cast<std::size_t>(l)];
  if (!slot) {
    const QuadraticMap nf = normal_form(l);
    auto d = std::make_unique<LabelData>();
    d->j0 = classify_conic_tag(det_jacobian_conic(nf));
    d->csc = critical_set_class_of(l);
    d->profile = preimage_profile(nf, 240, 3);
    d->convex = range_convexity(nf, 120, 7).convex_consistent;
    slot = std::move(d);
  }
  return *slot;
}

std::string kinds_string(const PreimageProfile& p) {
  std::string s = "{";
  for (auto k : p.kinds) {
    if (s.size() > 1) s += ",";
    s += to_string(k);
  }
  return s + "}";
}

}  // namespace

InvariantReport distinguishing_invariant(ClassLabel l1, ClassLabel l2) {
  if (l1 == l2) throw std::invalid_argument("labels must differ");
  const LabelData& a = label_data(l1);
  const LabelData& b = label_data(l2);

  if (a.j0 != b.j0) {
    const bool single_vs_double =
        (a.j0 == ConicTag::SingleLine && b.j0 == ConicTag::CoincidentLines) ||
        (a.j0 == ConicTag::CoincidentLines && b.j0 == ConicTag::SingleLine);
    return {single_vs_double ? "J0 single vs double line" : "J0 conic class",
            to_string(a.j0), to_string(b.j0)};
  }
  if (a.csc != b.csc)
    return {"critical set class (J0 -> J1)", to_string(a.csc), to_string(b.csc)};
  if (a.profile.has_infinite && b.profile.has_infinite &&
      a.profile.kinds != b.profile.kinds)
    return {"preimage topology", kinds_string(a.profile), kinds_string(b.profile)};
  if (!profiles_match(a.profile, b.profile))
    return {"preimage profile", to_string(a.profile), to_string(b.profile)};
  if (a.convex != b.convex)
    return {"range convexity", a.convex ? "convex" : "not convex",
            b.convex ? "convex" : "not convex"};
  return {"none", "", ""};
}

QuadraticMap quadratic_inverse(const QuadraticMap& q) {
  const ClassificationResult res = classify(q);
  if (res.label != ClassLabel::DP1)
    throw not_invertible_error("map is of class " + to_string(res.label) +
                               "; only DP1 maps have a (quadratic) inverse");
  QuadraticMap ninv;  // (y, x - y^2)
  ninv.a01 = 1;
  ninv.b10 = 1;
  ninv.b02 = -1;
  return compose(affine_invert(res.witness.h), ninv, affine_invert(res.witness.k));
}

bool injective_on_critical_set(const QuadraticMap& q, int n) {
  auto [cls, sample] = critical_set(q, std::min(n, 400));
  if (cls.tag == ConicTag::Empty) throw not_applicable_error("J0 is empty");
  if (cls.tag == ConicTag::AllPlane)
    throw not_applicable_error("J0 is the whole plane");

  std::vector<Vec2> dom, img;
  for (std::size_t c = 0; c < sample.components.size(); ++c)
    for (std::size_t i = 0; i < sample.components[c].size(); ++i) {
      dom.push_back(sample.components[c][i]);
      img.push_back(sample.images[c][i]);
    }
  double dscale = 0, iscale = 0;
  for (const auto& p : dom) dscale = std::max(dscale, norm(p));
  for (const auto& p : img) iscale = std::max(iscale, norm(p));

  for (std::size_t i = 0; i < dom.size(); ++i)
    for (std::size_t j = i + 1; j < dom.size(); ++j) {
      const double dd = std::hypot(dom[i].x - dom[j].x, dom[i].y - dom[j].y);
      const double di = std::hypot(img[i].x - img[j].x, img[i].y - img[j].y);
      // di threshold well below the dd^3 image separation of near-cusp pairs
      if (dd >= 1e-2 * (1.0 + dscale) && di <= 1e-8 * (1.0 + iscale)) return false;
    }
  return true;
}

}  // namespace quadmap
