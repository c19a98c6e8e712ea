#pragma once

// Reduction of an arbitrary quadratic map to one of the 18 affine
// map-equivalence normal forms, with verified explicit witnesses (h, k) such
// that compose(k, Q, h) equals the normal form up to a final translation, and
// a step-by-step reduction trace.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadmap/algebra.hpp"

namespace quadmap {

enum class ClassLabel {
  E1, E2,
  H1, H2, H3,
  P1, P2, P3,
  DE1, DE2, DE3,
  DH1, DH2,
  DP1, DP2, DP3, DP4, DP5,
};

inline constexpr std::array<ClassLabel, 18> kAllLabels = {
    ClassLabel::E1,  ClassLabel::E2,  ClassLabel::H1,  ClassLabel::H2,
    ClassLabel::H3,  ClassLabel::P1,  ClassLabel::P2,  ClassLabel::P3,
    ClassLabel::DE1, ClassLabel::DE2, ClassLabel::DE3, ClassLabel::DH1,
    ClassLabel::DH2, ClassLabel::DP1, ClassLabel::DP2, ClassLabel::DP3,
    ClassLabel::DP4, ClassLabel::DP5};

std::string to_string(ClassLabel l);
std::optional<ClassLabel> label_from_string(const std::string& s);

// The parameter-free representative of each class.
QuadraticMap normal_form(ClassLabel l);

struct WitnessPair {
  AffineMap2 h;  // domain change
  AffineMap2 k;  // range change
};

struct ReductionStep {
  std::string name;
  QuadraticMap after;
  AffineMap2 h_step;  // step in the compose(k, ., h) convention
  AffineMap2 k_step;
};

struct ClassificationResult {
  ClassLabel label;
  WitnessPair witness;
  double residual = 0;  // max coefficient deviation from the normal form
  std::vector<ReductionStep> trace;
};

struct invalid_witness_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct verification_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct wrong_branch_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solution of the twelve-equation coefficient-matching system that eliminates
// the b10 x term in the elliptic/hyperbolic long cases.
struct LongCaseSolution {
  double p0, q0, r0, s0, u0, v0;  // domain map h
  double p, q, r, s, u, v;        // range map k
  std::array<double, 12> equation_residuals{};
  double max_residual = 0;

  AffineMap2 h() const { return {p0, q0, r0, s0, u0, v0}; }
  AffineMap2 k() const { return {p, q, r, s, u, v}; }
};

// Witnesses taking (x^2 - y^2 + x, xy + b10 x) to E1, any real b10.
LongCaseSolution solve_elliptic_longcase(double b10);

// Witnesses taking (x^2 + y^2 + x, xy + b10 x) to H1; b10 outside {0, +-1/2}.
LongCaseSolution solve_hyperbolic_longcase(double b10);

// Reduce a homogeneous quadratic part to one of the six homogeneous normal
// forms {E2, H3, P3, DE3, DH2, DP5}; the witnesses are linear.
std::pair<ClassLabel, WitnessPair> reduce_homogeneous(const HomogeneousPart& h0);

// The full decision tree.
ClassificationResult classify(const QuadraticMap& q);

// Max coefficient deviation of compose(w.k, q, w.h) from the label's normal
// form after removing constants by translation.
double verify_witness(const QuadraticMap& q, ClassLabel label, const WitnessPair& w);

}  // namespace quadmap
