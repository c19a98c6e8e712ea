#pragma once

// Planar quadratic maps, invertible affine changes of coordinates, and the
// coefficient-level algebra connecting them: evaluation, Jacobians,
// composition k.Q.h^-1, projection to the homogeneous quadratic part.
//
// Everything is templated on the scalar type.  double is the working type;
// Rational (exact) is used where branch predicates or cross-checks must be
// decided without rounding.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace quadmap {

using Rational = boost::multiprecision::cpp_rational;

// Module-wide relative zero tolerance. Every "= 0" branch predicate in float
// mode is |x| <= kTol * scale.  Mutable so the CLI --tol flag (and the
// tolerance sensitivity check in the self test) can adjust it process-wide.
inline double kTol = 1e-9;

template <typename T>
inline T qm_abs(const T& v) {
  return v < T(0) ? T(-v) : v;
}

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return static_cast<double>(v); }

template <typename T>
struct Vec2T {
  T x{}, y{};
};
using Vec2 = Vec2T<double>;

template <typename T>
struct Mat2T {
  T m11{}, m12{}, m21{}, m22{};
  T det() const { return m11 * m22 - m12 * m21; }
};
using Mat2 = Mat2T<double>;

// Invertible affine map of the plane: p -> M p + t.
template <typename T>
struct AffineMap2T {
  T m11{1}, m12{0}, m21{0}, m22{1};
  T t1{0}, t2{0};

  static AffineMap2T identity() { return {}; }

  static AffineMap2T linear(T a, T b, T c, T d) { return {a, b, c, d, T(0), T(0)}; }

  static AffineMap2T translation(T tx, T ty) { return {T(1), T(0), T(0), T(1), tx, ty}; }

  T det() const { return m11 * m22 - m12 * m21; }

  Vec2T<T> operator()(const Vec2T<T>& p) const {
    return {m11 * p.x + m12 * p.y + t1, m21 * p.x + m22 * p.y + t2};
  }
};
using AffineMap2 = AffineMap2T<double>;

inline AffineMap2 rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return AffineMap2::linear(c, -s, s, c);
}

struct singular_affine_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct not_quadratic_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename T>
AffineMap2T<T> affine_invert(const AffineMap2T<T>& h) {
  const T d = h.det();
  if (d == T(0)) throw singular_affine_error("affine map is singular");
  AffineMap2T<T> r;
  r.m11 = h.m22 / d;
  r.m12 = -h.m12 / d;
  r.m21 = -h.m21 / d;
  r.m22 = h.m11 / d;
  r.t1 = -(r.m11 * h.t1 + r.m12 * h.t2);
  r.t2 = -(r.m21 * h.t1 + r.m22 * h.t2);
  return r;
}

inline AffineMap2 affine_invert_checked(const AffineMap2& h, double tol) {
  const double scale = std::max({std::abs(h.m11), std::abs(h.m12), std::abs(h.m21),
                                 std::abs(h.m22), 1.0});
  if (std::abs(h.det()) <= tol * scale * scale)
    throw singular_affine_error("affine map is numerically singular");
  return affine_invert(h);
}

template <typename T>
AffineMap2T<T> affine_compose(const AffineMap2T<T>& a, const AffineMap2T<T>& b) {
  // a after b: p -> a(b(p))
  AffineMap2T<T> r;
  r.m11 = a.m11 * b.m11 + a.m12 * b.m21;
  r.m12 = a.m11 * b.m12 + a.m12 * b.m22;
  r.m21 = a.m21 * b.m11 + a.m22 * b.m21;
  r.m22 = a.m21 * b.m12 + a.m22 * b.m22;
  r.t1 = a.m11 * b.t1 + a.m12 * b.t2 + a.t1;
  r.t2 = a.m21 * b.t1 + a.m22 * b.t2 + a.t2;
  return r;
}

// One polynomial component c20 x^2 + c11 xy + c02 y^2 + c10 x + c01 y + c00.
template <typename T>
struct QuadPolyT {
  T c20{}, c11{}, c02{}, c10{}, c01{}, c00{};

  T operator()(T x, T y) const {
    return c20 * x * x + c11 * x * y + c02 * y * y + c10 * x + c01 * y + c00;
  }
};

// General quadratic map of the plane; coefficient order follows the monomials
// x^2, xy, y^2, x, y, 1 in each component.
template <typename T>
struct QuadraticMapT {
  T a20{}, a11{}, a02{}, a10{}, a01{}, a00{};
  T b20{}, b11{}, b02{}, b10{}, b01{}, b00{};

  std::array<T, 12> coeffs() const {
    return {a20, a11, a02, a10, a01, a00, b20, b11, b02, b10, b01, b00};
  }

  static QuadraticMapT from_coeffs(const std::array<T, 12>& c) {
    return {c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7], c[8], c[9], c[10], c[11]};
  }

  QuadPolyT<T> first() const { return {a20, a11, a02, a10, a01, a00}; }
  QuadPolyT<T> second() const { return {b20, b11, b02, b10, b01, b00}; }
};
using QuadraticMap = QuadraticMapT<double>;

template <typename T>
struct HomogeneousPartT {
  T a20{}, a11{}, a02{};
  T b20{}, b11{}, b02{};
};
using HomogeneousPart = HomogeneousPartT<double>;

template <typename T>
T map_scale(const QuadraticMapT<T>& q) {
  T s{};
  for (const T& c : q.coeffs())
    if (qm_abs(c) > s) s = qm_abs(c);
  return s;
}

inline double map_tol(const QuadraticMap& q) { return kTol * std::max(map_scale(q), 1e-300); }

template <typename T>
T quad_coeff_scale(const QuadraticMapT<T>& q) {
  T s{};
  for (const T& c : {q.a20, q.a11, q.a02, q.b20, q.b11, q.b02})
    if (qm_abs(c) > s) s = qm_abs(c);
  return s;
}

template <typename T>
bool is_quadratic(const QuadraticMapT<T>& q, double tol_rel = kTol) {
  return to_double(quad_coeff_scale(q)) > tol_rel * to_double(map_scale(q));
}

template <typename T>
Vec2T<T> evaluate(const QuadraticMapT<T>& q, const Vec2T<T>& p) {
  return {q.first()(p.x, p.y), q.second()(p.x, p.y)};
}

template <typename T>
Mat2T<T> jacobian(const QuadraticMapT<T>& q, const Vec2T<T>& p) {
  return {T(2) * q.a20 * p.x + q.a11 * p.y + q.a10,
          q.a11 * p.x + T(2) * q.a02 * p.y + q.a01,
          T(2) * q.b20 * p.x + q.b11 * p.y + q.b10,
          q.b11 * p.x + T(2) * q.b02 * p.y + q.b01};
}

template <typename T>
T det_jacobian(const QuadraticMapT<T>& q, const Vec2T<T>& p) {
  return jacobian(q, p).det();
}

template <typename T>
HomogeneousPartT<T> homogeneous_part(const QuadraticMapT<T>& q) {
  return {q.a20, q.a11, q.a02, q.b20, q.b11, q.b02};
}

template <typename T>
QuadraticMapT<T> as_map(const HomogeneousPartT<T>& h) {
  QuadraticMapT<T> q;
  q.a20 = h.a20;
  q.a11 = h.a11;
  q.a02 = h.a02;
  q.b20 = h.b20;
  q.b11 = h.b11;
  q.b02 = h.b02;
  return q;
}

// Substitute an affine map into one polynomial component: P(A(x,y)).
template <typename T>
QuadPolyT<T> substitute(const QuadPolyT<T>& p, const AffineMap2T<T>& A) {
  const T a = A.m11, b = A.m12, e = A.t1;
  const T c = A.m21, d = A.m22, f = A.t2;
  QuadPolyT<T> r;
  // X = ax+by+e, Y = cx+dy+f; expand c20 X^2 + c11 XY + c02 Y^2 + c10 X + c01 Y + c00
  r.c20 = p.c20 * a * a + p.c11 * a * c + p.c02 * c * c;
  r.c11 = T(2) * p.c20 * a * b + p.c11 * (a * d + b * c) + T(2) * p.c02 * c * d;
  r.c02 = p.c20 * b * b + p.c11 * b * d + p.c02 * d * d;
  r.c10 = T(2) * p.c20 * a * e + p.c11 * (a * f + c * e) + T(2) * p.c02 * c * f + p.c10 * a + p.c01 * c;
  r.c01 = T(2) * p.c20 * b * e + p.c11 * (b * f + d * e) + T(2) * p.c02 * d * f + p.c10 * b + p.c01 * d;
  r.c00 = p.c20 * e * e + p.c11 * e * f + p.c02 * f * f + p.c10 * e + p.c01 * f + p.c00;
  return r;
}

template <typename T>
QuadraticMapT<T> from_components(const QuadPolyT<T>& p1, const QuadPolyT<T>& p2) {
  return {p1.c20, p1.c11, p1.c02, p1.c10, p1.c01, p1.c00,
          p2.c20, p2.c11, p2.c02, p2.c10, p2.c01, p2.c00};
}

// Q . A, coefficient-wise.
template <typename T>
QuadraticMapT<T> precompose(const QuadraticMapT<T>& q, const AffineMap2T<T>& A) {
  return from_components(substitute(q.first(), A), substitute(q.second(), A));
}

// k . Q, coefficient-wise (k affine).
template <typename T>
QuadraticMapT<T> postcompose(const AffineMap2T<T>& k, const QuadraticMapT<T>& q) {
  QuadraticMapT<T> r;
  r.a20 = k.m11 * q.a20 + k.m12 * q.b20;
  r.a11 = k.m11 * q.a11 + k.m12 * q.b11;
  r.a02 = k.m11 * q.a02 + k.m12 * q.b02;
  r.a10 = k.m11 * q.a10 + k.m12 * q.b10;
  r.a01 = k.m11 * q.a01 + k.m12 * q.b01;
  r.a00 = k.m11 * q.a00 + k.m12 * q.b00 + k.t1;
  r.b20 = k.m21 * q.a20 + k.m22 * q.b20;
  r.b11 = k.m21 * q.a11 + k.m22 * q.b11;
  r.b02 = k.m21 * q.a02 + k.m22 * q.b02;
  r.b10 = k.m21 * q.a10 + k.m22 * q.b10;
  r.b01 = k.m21 * q.a01 + k.m22 * q.b01;
  r.b00 = k.m21 * q.a00 + k.m22 * q.b00 + k.t2;
  return r;
}

// The equivalence action: compose(k, Q, h) = k . Q . h^-1.
template <typename T>
QuadraticMapT<T> compose(const AffineMap2T<T>& k, const QuadraticMapT<T>& q,
                         const AffineMap2T<T>& h) {
  return postcompose(k, precompose(q, affine_invert(h)));
}

template <typename T>
QuadraticMapT<T> map_sub(const QuadraticMapT<T>& a, const QuadraticMapT<T>& b) {
  auto ca = a.coeffs();
  auto cb = b.coeffs();
  std::array<T, 12> r;
  for (std::size_t i = 0; i < 12; ++i) r[i] = ca[i] - cb[i];
  return QuadraticMapT<T>::from_coeffs(r);
}

template <typename T>
T max_coeff_deviation(const QuadraticMapT<T>& a, const QuadraticMapT<T>& b) {
  return map_scale(map_sub(a, b));
}

// Strips the constant terms; the final step of every reduction is a
// post-composed translation doing exactly this.
template <typename T>
QuadraticMapT<T> drop_constants(const QuadraticMapT<T>& q) {
  QuadraticMapT<T> r = q;
  r.a00 = T(0);
  r.b00 = T(0);
  return r;
}

}  // namespace quadmap
