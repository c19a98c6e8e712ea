#include "quadmap/roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quadmap {

namespace {

double poly_eval(const std::vector<double>& c, double x) {
  double r = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

std::vector<double> poly_deriv(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
  return d;
}

std::vector<double> trim_leading(const std::vector<double>& c) {
  double mx = 0;
  for (double v : c) mx = std::max(mx, std::abs(v));
  if (mx == 0) return {};
  std::vector<double> r = c;
  while (r.size() > 1 && std::abs(r.back()) <= 1e-13 * mx) r.pop_back();
  return r;
}

double bisect(const std::vector<double>& c, double lo, double hi) {
  double flo = poly_eval(c, lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = poly_eval(c, mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  // Newton polish.
  const auto d = poly_deriv(c);
  for (int i = 0; i < 4; ++i) {
    const double fp = poly_eval(d, x);
    if (fp == 0) break;
    const double step = poly_eval(c, x) / fp;
    const double nx = x - step;
    if (nx < lo || nx > hi) break;
    x = nx;
  }
  return x;
}

std::vector<double> real_roots_monic_scaled(const std::vector<double>& c) {
  const std::size_t deg = c.size() - 1;
  if (deg == 0) return {};
  if (deg == 1) return {-c[0] / c[1]};

  // Breakpoints: critical points of the polynomial plus a root bound.
  std::vector<double> breaks = real_roots(poly_deriv(c));
  double bound = 1.0;
  for (std::size_t i = 0; i < deg; ++i)
    bound = std::max(bound, std::abs(c[i] / c[deg]));
  bound = 1.0 + bound;
  breaks.insert(breaks.begin(), -bound);
  breaks.push_back(bound);

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    if (!(lo < hi)) continue;
    const double flo = poly_eval(c, lo), fhi = poly_eval(c, hi);
    if ((flo < 0) != (fhi < 0)) roots.push_back(bisect(c, lo, hi));
  }
  // Even-multiplicity roots: the polynomial touches zero at a critical point
  // without a sign change.  "Zero" is judged two ways: against the term
  // magnitude at the point, and against the polynomial's variation a small
  // step away.  The second test matters for monomial-like polynomials
  // (e.g. x^4 near 0), where the pointwise term magnitude is just |f| itself.
  for (std::size_t i = 1; i + 1 < breaks.size(); ++i) {
    const double x = breaks[i];
    double local = 0, xp = 1;
    for (double v : c) {
      local += std::abs(v) * xp;
      xp *= std::abs(x);
    }
    const double fx = std::abs(poly_eval(c, x));
    const double dx = 1e-3 * (1.0 + std::abs(x));
    const double fnear = std::max(std::abs(poly_eval(c, x - dx)), std::abs(poly_eval(c, x + dx)));
    if (fx <= 1e-10 * std::max(local, 1e-300) || fx <= 1e-7 * fnear) roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (out.empty() || r - out.back() > 1e-9 * (1.0 + std::abs(r))) out.push_back(r);
  }
  return out;
}

}  // namespace

std::vector<double> real_roots(const std::vector<double>& coeffs) {
  const std::vector<double> c = trim_leading(coeffs);
  if (c.size() <= 1) return {};
  return real_roots_monic_scaled(c);
}

double find_positive_cubic_root(double c3, double c1, double c0) {
  if (!(c3 > 0) || !(c0 < 0))
    throw no_guaranteed_root_error("cubic preconditions violated: need c3 > 0, f(0) < 0");
  const std::vector<double> c = {c0, c1, 0.0, c3};
  double hi = 1.0;
  while (poly_eval(c, hi) <= 0) hi *= 2.0;
  // All real roots in (0, hi]; take the smallest positive one.
  double best = -1;
  for (double r : real_roots(c)) {
    if (r > 0 && (best < 0 || r < best)) best = r;
  }
  if (best < 0) best = bisect(c, 0.0, hi);
  // Final Newton polish to drive |f| toward machine zero.
  for (int i = 0; i < 8; ++i) {
    const double f = ((c3 * best * best) * best) + c1 * best + c0;
    const double fp = 3 * c3 * best * best + c1;
    if (fp == 0 || f == 0) break;
    best -= f / fp;
  }
  return best;
}

}  // namespace quadmap
