#pragma once

// Numerical integration utilities shared by the counting, test-function and
// trace-term modules: adaptive Gauss-Kronrod 15(7) on finite intervals,
// Gauss-Legendre rules of arbitrary order, and composite Simpson sums on
// uniform grids.

#include <functional>
#include <vector>

namespace cuspeig {

struct QuadResult {
  double value = 0.0;     // integral estimate
  double abs_error = 0.0; // accumulated error estimate
  double tail = 0.0;      // contribution estimated beyond a truncation point
                          // (filled by callers that truncate infinite ranges)
};

// Adaptive Gauss-Kronrod 15(7) integration of f over [a, b].
// Subdivides until the local error estimate is below
// max(abs_tol, rel_tol*|integral|) or max_depth is reached.
// Throws PrecisionError if the tolerance cannot be met.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-11, double abs_tol = 1e-300,
                     int max_depth = 48);

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // positive, symmetric
};

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], computed
// with Newton iterations on the Legendre polynomial (accurate to ~1e-15).
GaussLegendreRule gauss_legendre(int n);

// Composite Simpson integration of uniformly spaced samples with step h.
// Requires an odd number of samples >= 3 (even number of intervals).
double simpson_uniform(const std::vector<double>& samples, double h);

}  // namespace cuspeig
