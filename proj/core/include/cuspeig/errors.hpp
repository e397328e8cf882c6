#pragma once

#include <stdexcept>
#include <string>

namespace cuspeig {

// Thrown when an enumeration or counting task would exceed its configured
// class/node budget. Callers must either enlarge the budget or fail loudly;
// results are never silently truncated.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a quadrature tail estimate exceeds the allowed fraction of the
// computed value, i.e. the result cannot be trusted to the advertised
// precision.
class PrecisionError : public std::runtime_error {
 public:
  explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a group construction or enumeration encounters evidence of
// non-discreteness (an elliptic or identity word), or when a numerically
// fitted estimate fails its own consistency checks.
class EstimationError : public std::runtime_error {
 public:
  explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by certification pipelines when the inputs can never certify
// (e.g. a nonpositive growth-exponent floor), as opposed to an ordinary
// non-certifying outcome.
class CertificationImpossibleError : public std::runtime_error {
 public:
  explicit CertificationImpossibleError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace cuspeig
