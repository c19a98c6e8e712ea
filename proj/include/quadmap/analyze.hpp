#pragma once

// Invariant-based analysis on top of classification: preimage cardinalities
// and profiles, range convexity, pairwise class separators, the two coarser
// collapses (critical-set and smooth/polynomial equivalence), the quadratic
// inverse of DP1 maps, and injectivity on the critical set.

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadmap/critical.hpp"
#include "quadmap/normalize.hpp"

namespace quadmap {

// Component shape of an infinite preimage set.
enum class InfiniteKind { Line, PairOfLines, Circle, Parabola, Hyperbola, Plane };
std::string to_string(InfiniteKind k);

struct PreimageCardinality {
  bool is_infinite = false;
  int count = 0;                           // finite case
  InfiniteKind kind = InfiniteKind::Line;  // infinite case
  std::vector<Vec2> points;                // finite case: the preimages found
};
std::string to_string(const PreimageCardinality& c);

struct PreimageProfile {
  std::set<int> finite;
  bool has_infinite = false;
  std::set<InfiniteKind> kinds;
};
std::string to_string(const PreimageProfile& p);

// Equality on the data a cardinality table records: the finite counts and
// whether an infinite fiber occurs.
bool profiles_match(const PreimageProfile& a, const PreimageProfile& b);

PreimageCardinality preimage_count(const QuadraticMap& q, const Vec2& target);

// Union of preimage_count over stratified targets: points of J1 itself,
// offsets around J1, distinguished points (cusp images, isolated image
// points, ray endpoints), images of random domain points, and random targets.
PreimageProfile preimage_profile(const QuadraticMap& q, int n = 240, unsigned seed = 1);

// The expected profile of each class.
PreimageProfile reference_profile(ClassLabel l);

struct ConvexityReport {
  bool convex_consistent = true;
  Vec2 p1{}, p2{}, mid{};  // witness triple when not convex
};
ConvexityReport range_convexity(const QuadraticMap& q, int n = 200, unsigned seed = 1);

struct InvariantReport {
  std::string invariant;  // which invariant separates the pair
  std::string lhs, rhs;   // its value on each label
};
InvariantReport distinguishing_invariant(ClassLabel l1, ClassLabel l2);

// 18 -> 15 collapse: merges {DE1,DH1}, {DE3,DP3}, {DH2,DP5}.
CriticalSetClass critical_set_class_of(ClassLabel l);

// 18 -> 15 smooth/polynomial collapse: merges {DE1,DH1,DP2} and {DP3,DP4};
// returns the canonical representative of the group.
ClassLabel smooth_class_of(ClassLabel l);

// The explicit polynomial witnesses behind the smooth collapse.
QuadraticMap smooth_witness_k1();  // (x + y^2, y)
QuadraticMap smooth_witness_k2();  // (x - y^2, y)
QuadraticMap smooth_witness_h();   // (y, x - y^2)

// Max pointwise residual of the witness identities
// k1.DE1 = DP2, k2.DH1 = DP2, DP3.h = (x,0), h.DP4 = (x,0) at random points.
double verify_smooth_collapse(int n_points = 100, unsigned seed = 1);

struct not_invertible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct not_applicable_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// For maps of class DP1 (constant nonzero Jacobian): the quadratic inverse
// h^-1 . (y, x - y^2) . k built from the classification witnesses.
QuadraticMap quadratic_inverse(const QuadraticMap& q);

// True when Q restricted to J0 is injective (sampled test); throws
// not_applicable_error when J0 is empty or the whole plane.
bool injective_on_critical_set(const QuadraticMap& q, int n = 400);

}  // namespace quadmap
