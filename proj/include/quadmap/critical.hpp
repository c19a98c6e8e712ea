#pragma once

// Critical set J0 = {det DQ = 0}, its image J1 = Q(J0), cusp detection, and
// the 15-way J0-J1 classification.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quadmap/conic.hpp"

namespace quadmap {

enum class CriticalSetClass {
  Case1_EmptyEmpty,        // J0 empty
  Case2_PointPoint,        // J0 point
  Case3_EllipseThreeCusps, // J0 ellipse, J1 closed curve with three cusps
  Case4_HyperbolaTwoCurves,
  Case5a_TwoRays,          // intersecting lines -> ray U ray
  Case5b_RayParabola,      // intersecting lines -> ray U parabola
  Case6_ParabolaCusp,
  Case7a_LineAndPoint,     // distinct parallel lines -> line U point
  Case7b_DoubleLineToPoint,
  Case8a_LineToPoint,
  Case8b_LineToLine,
  Case8c_LineToParabola,
  Case9a_PlaneToLine,
  Case9b_PlaneToRay,
  Case9c_PlaneToParabola,
};

std::string to_string(CriticalSetClass c);

// Qualitative image of a line or of the whole plane under Q.
enum class ImageKind { Point, Ray, Line, Parabola };
std::string to_string(ImageKind k);

struct CurveSample {
  // One entry per J0 component; AllPlane stores a reference grid as a single
  // component.
  std::vector<std::vector<Vec2>> components;
  std::vector<std::vector<Vec2>> images;  // evaluate(Q, .) of each component
  std::vector<Vec2> cusps;
};

struct not_a_curve_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct empty_set_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// J0 classification plus a sampled parametrization of each component.
std::pair<ConicClass, CurveSample> critical_set(const QuadraticMap& q, int n = 2048);

// Image polylines J1 = Q(J0); for AllPlane J0 this samples the image of a
// reference grid (the range is itself a curve there).
CurveSample sample_critical_image(const QuadraticMap& q, int n = 2048);

// Cusps: points of J0 where ker(DQ) is tangent to J0, found by sign change of
// the tangency functional along the sample and refined by bisection.
std::pair<int, std::vector<Vec2>> count_cusps(const QuadraticMap& q,
                                              const CurveSample& sample);

// Image kind of the line {p + t d}.
ImageKind line_image_kind(const QuadraticMap& q, const Line2& line);

// Image kind of the whole plane (valid when det DQ vanishes identically).
ImageKind plane_image_kind(const QuadraticMap& q);

CriticalSetClass j0j1_class(const QuadraticMap& q);

}  // namespace quadmap
