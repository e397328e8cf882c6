#include "cuspeig/pgt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cuspeig/errors.hpp"
#include "cuspeig/quadrature.hpp"

namespace cuspeig {

namespace {

// Conjugacy-class count matching the li(e^{delta T}) main term with leading
// coefficient 1: a closed geodesic and its orientation reversal are distinct
// conjugacy classes, so this is twice the unoriented class count.
double oriented_count(std::int64_t unoriented) {
  return 2.0 * static_cast<double>(unoriented);
}

// Main term with the natural truncation at the lower integration limit:
// 0 while x <= 2 (the count comparison starts from an empty window).
double li_main_term(double x) {
  return x > 2.0 ? logarithmic_integral(x) : 0.0;
}

// The exponent u solving li(e^u) = target (target >= 1), by bisection on u.
double invert_li(double target) {
  double lo = std::log(2.0), hi = 40.0;
  while (li_main_term(std::exp(hi)) < target) {
    hi += 20.0;
    if (hi > 700.0) {
      throw EstimationError("estimate_delta: count too large to invert the logarithmic integral");
    }
  }
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (li_main_term(std::exp(mid)) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::int64_t count_upto(const std::vector<GeodesicClass>& spectrum, double T) {
  std::int64_t n = 0;
  for (const auto& c : spectrum) {
    const double t = c.total_length();
    if (t >= 1.0 && t <= T) ++n;
  }
  return n;
}

}  // namespace

double logarithmic_integral(double x) {
  if (!std::isfinite(x) || x <= 2.0) {
    throw std::invalid_argument("logarithmic_integral: x must be finite and > 2");
  }
  // Substituting t = e^u turns the integral into one of e^u / u over
  // [ln 2, ln x], which stays well-conditioned for x up to the double range.
  const QuadResult q =
      integrate([](double u) { return std::exp(u) / u; }, std::log(2.0), std::log(x), 1e-12);
  return q.value;
}

CountWindow count_geodesics(const PantsGroup& G, double a, double b,
                            const EnumerationBudget& budget, int workers) {
  if (!std::isfinite(a) || !std::isfinite(b) || a < 1.0 || b <= a) {
    throw std::invalid_argument("count_geodesics: window must satisfy 1 <= a < b");
  }
  CountWindow w;
  w.a = a;
  w.b = b;
  for (const auto& c : length_spectrum(G, b, budget, workers)) {
    const double t = c.total_length();
    if (t >= a && t <= b) ++w.count;
  }
  return w;
}

DeltaEstimate estimate_delta(const PantsGroup& G, const std::vector<double>& T_grid,
                             const EnumerationBudget& budget, int workers) {
  if (T_grid.size() < 3) {
    throw std::invalid_argument("estimate_delta: need at least 3 cutoff grid points");
  }
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    if (!std::isfinite(T_grid[i]) || T_grid[i] <= 1.0) {
      throw std::invalid_argument("estimate_delta: cutoffs must be finite and > 1");
    }
    if (i > 0 && T_grid[i] <= T_grid[i - 1]) {
      throw std::invalid_argument("estimate_delta: cutoff grid must be strictly ascending");
    }
  }

  const double T_max = T_grid.back();
  const auto spectrum = length_spectrum(G, T_max, budget, workers);

  DeltaEstimate est;
  est.fit_windows.reserve(T_grid.size());
  for (const double T : T_grid) est.fit_windows.emplace_back(T, count_upto(spectrum, T));
  for (std::size_t i = 1; i < est.fit_windows.size(); ++i) {
    if (est.fit_windows[i].second < est.fit_windows[i - 1].second) {
      throw EstimationError("estimate_delta: counts are not monotone over the cutoff grid");
    }
  }
  const std::int64_t n_top = est.fit_windows.back().second;
  if (n_top < 1) {
    throw EstimationError(
        "estimate_delta: no geodesic below the largest cutoff; enlarge the grid or the budget");
  }

  est.delta_hat = std::min(invert_li(oriented_count(n_top)) / T_max, 1.0);
  est.kappa_hat = est.delta_hat - 0.5;

  // Least-squares slope of ln N vs T over the grid points with N >= 1;
  // recorded as a cross-check on the li inversion, not used as input.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (const auto& [T, n] : est.fit_windows) {
    if (n < 1) continue;
    const double y = std::log(static_cast<double>(n));
    sx += T;
    sy += y;
    sxx += T * T;
    sxy += T * y;
    ++m;
  }
  const double det = m * sxx - sx * sx;
  est.slope_check = (m >= 2 && det > 0.0) ? (m * sxy - sx * sy) / det : 0.0;

  double scale = 0.0;
  for (const auto& [T, n] : est.fit_windows) {
    const double main = li_main_term(std::exp(est.delta_hat * T));
    const double resid = std::fabs(oriented_count(n) - main) *
                         std::exp(-(0.5 * est.delta_hat + 0.25) * T);
    scale = std::max(scale, resid);
  }
  est.residual_scale = scale;
  return est;
}

double kappa_floor_raw(double c2, double grid_step, const EnumerationBudget& budget,
                       int workers) {
  if (!std::isfinite(c2) || c2 <= 0.0 || c2 > 7.3) {
    throw std::invalid_argument("kappa_floor: c2 must lie in (0, 7.3]");
  }
  if (!std::isfinite(grid_step) || grid_step <= 0.0 || grid_step > c2 / 4.0 + 1e-12) {
    throw std::invalid_argument("kappa_floor: grid step must lie in (0, c2/4]");
  }

  std::vector<double> lengths;
  for (double l = grid_step; l <= c2 + 1e-9; l += grid_step) lengths.push_back(std::min(l, c2));
  if (lengths.back() < c2 - 1e-9) lengths.push_back(c2);

  // Two disjoint cutoff grids; their disagreement is the instability margin.
  const std::vector<double> grid_a = {8.0, 10.0, 12.0};
  const std::vector<double> grid_b = {7.0, 9.0, 11.0};

  double min_delta = std::numeric_limits<double>::infinity();
  double max_drift = 0.0;
  auto account = [&](double l1, double l2) {
    const PantsGroup G = pants_group(l1, l2, 0.0);
    const double d1 = estimate_delta(G, grid_a, budget, workers).delta_hat;
    const double d2 = estimate_delta(G, grid_b, budget, workers).delta_hat;
    min_delta = std::min(min_delta, std::min(d1, d2));
    max_drift = std::max(max_drift, std::fabs(d1 - d2));
  };
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    account(lengths[i], 0.0);
    // P(l1, l2, 0) and P(l2, l1, 0) are isometric; visit l2 <= l1 only.
    for (std::size_t j = 0; j <= i; ++j) account(lengths[i], lengths[j]);
  }
  return min_delta - 0.5 - max_drift;
}

double kappa_floor(double c2, double grid_step, const EnumerationBudget& budget, int workers) {
  const double kappa = kappa_floor_raw(c2, grid_step, budget, workers);
  if (!(kappa > 0.0)) {
    throw CertificationImpossibleError(
        "kappa_floor: growth-exponent floor " + std::to_string(kappa) +
        " is not positive; reduce c2 or enlarge the enumeration budget");
  }
  return kappa;
}

double pgt_residual(const PantsGroup& G, double T, double delta,
                    const EnumerationBudget& budget, int workers) {
  if (!std::isfinite(T) || T <= 1.0) {
    throw std::invalid_argument("pgt_residual: T must be finite and > 1");
  }
  if (!std::isfinite(delta) || delta <= 0.0 || delta > 1.0) {
    throw std::invalid_argument("pgt_residual: delta must lie in (0, 1]");
  }
  const CountWindow w = count_geodesics(G, 1.0, T, budget, workers);
  const double main = li_main_term(std::exp(delta * T));
  return (oriented_count(w.count) - main) * std::exp(-(0.5 * delta + 0.25) * T);
}

}  // namespace cuspeig
