#pragma once

// Exponential integral E1(x) = \int_x^\infty e^{-u}/u du for real x > 0.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fairnoma {

/// Thrown when an iterative scheme exhausts its budget before converging.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PrecisionBudget {
  double rel_tol = std::numeric_limits<double>::epsilon();
  int max_terms = 200;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1e-6)) {
      throw std::invalid_argument("PrecisionBudget: rel_tol must lie in (0, 1e-6)");
    }
    if (max_terms < 1) {
      throw std::invalid_argument("PrecisionBudget: max_terms must be >= 1");
    }
  }
};

namespace detail {

inline void check_e1_domain(double x, const char* who) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error(std::string(who) + ": argument must be finite and > 0");
  }
}

// -gamma - ln x - sum_{k>=1} (-x)^k / (k k!), used for x <= 1.
inline double e1_series(double x, const PrecisionBudget& budget) {
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k <= budget.max_terms; ++k) {
    term *= -x / k;
    const double contrib = term / k;
    sum += contrib;
    if (std::abs(contrib) <= budget.rel_tol * std::abs(sum)) {
      return -std::numbers::egamma - std::log(x) - sum;
    }
  }
  throw ConvergenceError("exp_integral_e1: power series did not converge");
}

// Continued fraction for e^x E1(x), evaluated with modified Lentz; x > 1.
inline double scaled_e1_fraction(double x, const PrecisionBudget& budget) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= budget.max_terms; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) <= budget.rel_tol) return h;
  }
  throw ConvergenceError("exp_integral_e1: continued fraction did not converge");
}

}  // namespace detail

/// e^x E1(x). Finite for every positive finite x; this is the form the
/// ergodic closed forms use, since e^{c} E1(c) overflows term-by-term for
/// large c but is itself bounded by 1/c.
inline double exp_scaled_e1(double x, const PrecisionBudget& budget = {}) {
  detail::check_e1_domain(x, "exp_scaled_e1");
  if (x <= 1.0) return std::exp(x) * detail::e1_series(x, budget);
  return detail::scaled_e1_fraction(x, budget);
}

/// E1(x). Returns 0 once e^{-x} underflows.
inline double exp_integral_e1(double x, const PrecisionBudget& budget = {}) {
  detail::check_e1_domain(x, "exp_integral_e1");
  if (x <= 1.0) return detail::e1_series(x, budget);
  const double decay = std::exp(-x);
  if (decay == 0.0) return 0.0;
  return decay * detail::scaled_e1_fraction(x, budget);
}

}  // namespace fairnoma
