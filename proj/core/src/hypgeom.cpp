#include "cuspeig/hypgeom.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cuspeig {

void validate_signature(const SurfaceSignature& sig) {
  if (sig.genus < 0) {
    throw std::invalid_argument("signature: genus must be >= 0, got " +
                                std::to_string(sig.genus));
  }
  if (sig.cusps < 1) {
    throw std::invalid_argument("signature: at least one cusp required, got " +
                                std::to_string(sig.cusps));
  }
  if (sig.euler_like() < 1) {
    throw std::invalid_argument("signature: 2g+n-2 must be >= 1, got " +
                                std::to_string(sig.euler_like()));
  }
}

double volume(const SurfaceSignature& sig) {
  validate_signature(sig);
  return 2.0 * std::numbers::pi * static_cast<double>(sig.euler_like());
}

double orthogonal_pants_split(double l) {
  if (!(l > 0.0)) {
    throw std::invalid_argument("orthogonal_pants_split: length must be > 0");
  }
  return 4.0 * std::asinh(1.0 / std::sinh(l / 4.0));
}

double beta_gamma(double l) {
  if (!(l > 0.0) || l > 1.0) {
    throw std::invalid_argument("beta_gamma: length must lie in (0, 1]");
  }
  const double a = std::acosh(2.0 / l);
  return l * std::cosh(std::pow(a, 0.25) / 2.0);
}

BetaBound beta_bound(std::int64_t n, double kappa) {
  if (n < 2) {
    throw std::invalid_argument("beta_bound: n must be >= 2");
  }
  if (!(kappa > 0.0) || !(kappa < 0.5)) {
    throw std::invalid_argument("beta_bound: kappa must lie in (0, 1/2)");
  }
  BetaBound out;
  out.bound = 2.0 * std::pow(static_cast<double>(n), -2.0 * (1.0 - kappa));
  out.min_n = std::exp(std::pow(2.0, -7.0 / 3.0) * std::pow(kappa, -4.0 / 3.0));
  out.valid = static_cast<double>(n) >= out.min_n;
  return out;
}

double horocycle_pants_bounds(double t, HorocycleContact kind) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("horocycle_pants_bounds: t must be > 0");
  }
  switch (kind) {
    case HorocycleContact::kTwoCuspTouch:
      return 2.0 * t;
    case HorocycleContact::kSelfIntersect:
      return t;
  }
  throw std::invalid_argument("horocycle_pants_bounds: unknown contact kind");
}

}  // namespace cuspeig
