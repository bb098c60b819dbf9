#pragma once

#include <functional>

#include "holoflow/disc.hpp"

namespace holoflow {

struct QuadOptions {
  double rel_tol = 1e-10;
  int max_depth = 20;
  // Pieces whose integrand magnitude varies by more than this factor are split.
  double variation_limit = 1e6;
  // Add dyadic breakpoints accumulating at b, sized by the distance of b to the circle.
  bool grade_to_end = true;
};

struct QuadResult {
  cplx value{0.0, 0.0};
  double error = 0.0;
  long evaluations = 0;
};

// Adaptive Gauss-Kronrod (7/15) integral of f along the straight segment a -> b.
// Throws NumericalError naming the worst subinterval if the tolerance is missed.
QuadResult integrate_segment(const std::function<cplx(cplx)>& f, cplx a, cplx b, const QuadOptions& opts = {});

}  // namespace holoflow
