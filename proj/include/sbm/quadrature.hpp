#pragma once

#include <functional>

#include "sbm/types.hpp"

namespace sbm::quadrature {

struct Result {
  ComplexValue value;
  double error;      // summed per-segment estimate
  long evaluations;  // integrand calls
};

// Globally adaptive Gauss-Kronrod 15(7) on [a, b] to an absolute tolerance.
// The worst segment is bisected until the summed error estimate drops below
// abs_tol. Optional interior breakpoints seed the initial partition (useful
// for known resonances or oscillation periods). Throws ConvergenceError with
// the achieved estimate if the segment budget runs out first.
Result integrate(const std::function<ComplexValue(double)>& f, double a,
                 double b, double abs_tol,
                 const std::vector<double>& breakpoints = {},
                 long max_segments = 200000);

}  // namespace sbm::quadrature
