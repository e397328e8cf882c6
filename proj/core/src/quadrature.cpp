#include "cuspeig/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "cuspeig/errors.hpp"

namespace cuspeig {
namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae;
// the rule is symmetric about 0).
constexpr double kXgk[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
// Weights of the embedded 7-point Gauss rule (abscissae kXgk[1,3,5,7]).
constexpr double kWg[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

struct Segment {
  double a, b;
  double value;
  double error;
};

Segment evaluate_segment(const std::function<double(double)>& f, double a,
                         double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double result_kronrod = kWgk[7] * f(center);
  double result_gauss = kWg[3] * f(center);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double fsum = f(center - dx) + f(center + dx);
    result_kronrod += kWgk[i] * fsum;
    if (i % 2 == 1) {
      result_gauss += kWg[i / 2] * fsum;
    }
  }
  Segment seg;
  seg.a = a;
  seg.b = b;
  seg.value = result_kronrod * half;
  seg.error = std::abs(result_kronrod - result_gauss) * std::abs(half);
  return seg;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, double abs_tol, int max_depth) {
  if (!(b > a)) {
    if (a == b) return {};
    throw std::invalid_argument("integrate: requires a <= b");
  }
  auto worse = [](const Segment& s, const Segment& t) {
    return s.error < t.error;
  };
  std::priority_queue<Segment, std::vector<Segment>, decltype(worse)> queue(
      worse);
  queue.push(evaluate_segment(f, a, b));
  double total_value = queue.top().value;
  double total_error = queue.top().error;
  // max_depth bounds the bisection depth; the segment count is capped at
  // 2^min(max_depth, 14) splits to keep adversarial integrands from spinning.
  const std::size_t max_segments =
      static_cast<std::size_t>(1) << std::min(max_depth, 14);
  while (total_error > std::max(abs_tol, rel_tol * std::abs(total_value))) {
    if (queue.size() >= max_segments) {
      throw PrecisionError(
          "integrate: tolerance not reached after maximal subdivision");
    }
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      // Interval at floating-point resolution; accept its estimate as is.
      total_error -= worst.error;
      queue.push(Segment{worst.a, worst.b, worst.value, 0.0});
      continue;
    }
    Segment left = evaluate_segment(f, worst.a, mid);
    Segment right = evaluate_segment(f, mid, worst.b);
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  QuadResult out;
  out.value = total_value;
  out.abs_error = total_error;
  return out;
}

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) {
    throw std::invalid_argument("gauss_legendre: order must be >= 1");
  }
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess for the i-th root (descending order).
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Bonnet recurrence for P_n(x) and derivative.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double simpson_uniform(const std::vector<double>& samples, double h) {
  const std::size_t m = samples.size();
  if (m < 3 || m % 2 == 0) {
    throw std::invalid_argument(
        "simpson_uniform: needs an odd sample count >= 3");
  }
  if (!(h > 0.0)) {
    throw std::invalid_argument("simpson_uniform: step must be > 0");
  }
  // Accumulate in long double: the test-function grids have ~2^19 samples.
  long double sum = samples.front() + samples.back();
  for (std::size_t i = 1; i + 1 < m; ++i) {
    sum += samples[i] * ((i % 2 == 1) ? 4.0L : 2.0L);
  }
  return static_cast<double>(sum * h / 3.0L);
}

}  // namespace cuspeig
