#pragma once

// Real roots of low-degree polynomials by recursive derivative bracketing and
// bisection.  Degree <= 4 is all this project needs (the preimage eliminant),
// but the code is generic.

#include <stdexcept>
#include <vector>

namespace quadmap {

// coeffs[i] is the coefficient of x^i.  Returns distinct real roots in
// ascending order; even-multiplicity roots (where the polynomial touches zero
// at a critical point) are reported once.
std::vector<double> real_roots(const std::vector<double>& coeffs);

// Smallest positive root of c3 x^3 + c1 x + c0.  Requires c3 > 0 and c0 < 0,
// which guarantee a positive root by the intermediate value theorem: the
// bracket is grown by doubling until the sign flips, then bisected and
// Newton-polished.
double find_positive_cubic_root(double c3, double c1, double c0);

struct no_guaranteed_root_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace quadmap
