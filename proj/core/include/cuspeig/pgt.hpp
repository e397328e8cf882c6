#pragma once

// Prime-geodesic-theorem utilities: geodesic counting in length windows,
// the logarithmic-integral main term li(e^{delta T}), an empirical
// critical-exponent estimator for cusped pairs of pants, and a positive
// growth-exponent floor over a family of boundary lengths.

#include <cstdint>
#include <utility>
#include <vector>

#include "cuspeig/enumerate.hpp"
#include "cuspeig/pants_group.hpp"

namespace cuspeig {

// Number of closed geodesics (unoriented classes, iterates included) with
// total length in the closed window [a, b], 1 <= a < b.
struct CountWindow {
  double a = 1.0;
  double b = 2.0;
  std::int64_t count = 0;
};

// Fit of the counting function N[1, T] against the prime-geodesic main term
// li(e^{delta T}). The main term counts conjugacy classes (a geodesic and
// its orientation reversal separately), i.e. twice the unoriented count
// stored in fit_windows; the estimator applies that factor internally.
struct DeltaEstimate {
  double delta_hat = 0.0;  // ln(li^{-1}(2 N)) / T at the largest grid T,
                           // clamped above at the finite-area ceiling 1.0;
                           // values <= 1/2 mean growth was not observable
  std::vector<std::pair<double, std::int64_t>> fit_windows;  // (T, N[1,T])
  double residual_scale = 0.0;  // max |2N - li(e^{delta T})| e^{-(delta/2+1/4)T}
  double slope_check = 0.0;     // least-squares slope of ln N vs T (cross-check)
  double kappa_hat = 0.0;       // delta_hat - 1/2
};

// The truncated logarithmic integral: integral of dt/ln t over [2, x].
// Adaptive quadrature, relative error <= 1e-10. Requires x > 2.
double logarithmic_integral(double x);

// Exact geodesic count in the closed window [a, b] from a full enumeration
// up to b. Deterministic across runs and worker counts.
CountWindow count_geodesics(const PantsGroup& G, double a, double b,
                            const EnumerationBudget& budget = {}, int workers = 1);

// Critical-exponent estimate from counts on an ascending grid of at least
// three cutoffs (each > 1). Throws EstimationError when there is nothing to
// fit (no geodesic below the largest cutoff) or the inversion fails.
DeltaEstimate estimate_delta(const PantsGroup& G, const std::vector<double>& T_grid,
                             const EnumerationBudget& budget = {}, int workers = 1);

// Growth-exponent floor over the pants family P(l1, l2, 0) with
// l1, l2 on the grid {grid_step, 2 grid_step, ..., c2} plus the
// two-cusp shapes P(l1, 0, 0):
//   min over the family of delta_hat - 1/2, minus the largest observed
//   drift of delta_hat between two disjoint cutoff grids.
// kappa_floor_raw returns the (possibly nonpositive) estimate; kappa_floor
// additionally requires it to be positive and throws
// CertificationImpossibleError otherwise (budget too small or c2 too large).
double kappa_floor_raw(double c2, double grid_step, const EnumerationBudget& budget = {},
                       int workers = 1);
double kappa_floor(double c2, double grid_step, const EnumerationBudget& budget = {},
                   int workers = 1);

// Signed prime-geodesic-theorem residual at cutoff T for exponent delta:
//   (2 N[1,T] - li(e^{delta T})) e^{-(delta/2 + 1/4) T},
// with the main term truncated to 0 while e^{delta T} <= 2.
double pgt_residual(const PantsGroup& G, double T, double delta,
                    const EnumerationBudget& budget = {}, int workers = 1);

}  // namespace cuspeig
