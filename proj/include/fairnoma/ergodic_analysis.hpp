#pragma once

// Ergodic (fading-averaged) capacities over ordered i.i.d. Rayleigh gains.
//
// OMA quantities and the boundary NOMA quantities C1^N(a_sup) = C1^O and
// C2^N(a_inf) = C2^O have closed forms in e^z E1(z). The two remaining
// boundary quantities, E[C1^N(a_inf)] and E[C2^N(a_sup)], reduce to single
// integrals over the gain x of the other user; those are evaluated here by
// adaptive quadrature on [0, m * beta] plus an explicit tail bound.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>

#include "fairnoma/channel_model.hpp"
#include "fairnoma/noma_core.hpp"
#include "fairnoma/quadrature.hpp"
#include "fairnoma/special_functions.hpp"

namespace fairnoma {

enum class Method { ClosedForm, Quadrature, MonteCarlo };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed-form";
    case Method::Quadrature: return "quadrature";
    case Method::MonteCarlo: return "monte-carlo";
  }
  return "unknown";
}

struct ErgodicEstimate {
  double value = 0.0;
  Method method = Method::ClosedForm;
  double error_bound = 0.0;  // absolute, bits/s/Hz; 0 for closed forms
};

struct QuadratureConfig {
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  double truncation_multiplier = 60.0;
  int max_intervals = 4000;

  void validate() const {
    if (!(abs_tol > 0.0 && rel_tol > 0.0)) {
      throw std::invalid_argument("QuadratureConfig: tolerances must be > 0");
    }
    if (!(truncation_multiplier >= 30.0)) {
      throw std::invalid_argument("QuadratureConfig: truncation_multiplier must be >= 30");
    }
  }
};

/// Default e^x E1(x) provider. The closed forms are templated on this so a
/// different (e.g. deliberately faulty) implementation can be injected.
struct ScaledE1 {
  double operator()(double x) const { return exp_scaled_e1(x); }
};

template <class E1 = ScaledE1>
ErgodicEstimate ergodic_c1_oma(const SystemParams& p, E1 e1 = {}) {
  const double z = 1.0 / (p.beta() * p.xi());
  return {e1(2.0 * z) / (2.0 * std::numbers::ln2), Method::ClosedForm, 0.0};
}

template <class E1 = ScaledE1>
ErgodicEstimate ergodic_sum_oma(const SystemParams& p, E1 e1 = {}) {
  const double z = 1.0 / (p.beta() * p.xi());
  return {e1(z) / std::numbers::ln2, Method::ClosedForm, 0.0};
}

template <class E1 = ScaledE1>
ErgodicEstimate ergodic_c2_oma(const SystemParams& p, E1 e1 = {}) {
  return {ergodic_sum_oma(p, e1).value - ergodic_c1_oma(p, e1).value, Method::ClosedForm, 0.0};
}

namespace detail {

// Arguments of the two exponential integrals in the single-integral forms:
// lo = x / (beta (sqrt(1 + xi x) - 1)) = (1 + sqrt(1 + xi x)) / (beta xi),
// hi = lo * sqrt(1 + xi x). Both tend to 2/(beta xi) as x -> 0.
struct E1Arguments {
  double lo;
  double hi;
};

inline E1Arguments e1_arguments(const SystemParams& p, double x) {
  const double s = std::sqrt(1.0 + p.xi() * x);
  const double lo = (1.0 + s) / (p.beta() * p.xi());
  return {lo, lo * s};
}

}  // namespace detail

/// Integrand of the correction term in E[C1^N(a_inf)]. The paper's form is
/// exp(A(x)) [E1(lo) - E1(hi)]; with A - lo = -x/beta and A - hi = -2x/beta
/// it becomes e^{-x/beta} e^{lo}E1(lo) - e^{-2x/beta} e^{hi}E1(hi), which stays
/// finite at low SNR where exp(A) alone overflows.
inline double c1_inf_correction_integrand(const SystemParams& p, double x) {
  const auto [lo, hi] = detail::e1_arguments(p, x);
  const double scale = 2.0 / (p.beta() * std::numbers::ln2);
  return scale * (std::exp(-x / p.beta()) * exp_scaled_e1(lo) -
                  std::exp(-2.0 * x / p.beta()) * exp_scaled_e1(hi));
}

/// Integrand of the correction term in E[C2^N(a_sup)], rewritten the same way.
inline double c2_sup_correction_integrand(const SystemParams& p, double x) {
  const auto [lo, hi] = detail::e1_arguments(p, x);
  const double scale = 2.0 / (p.beta() * std::numbers::ln2);
  return scale * std::exp(-2.0 * x / p.beta()) * exp_scaled_e1(hi);
}

namespace detail {

template <class F>
QuadratureResult integrate_correction(const SystemParams& p, const QuadratureConfig& config,
                                      F integrand) {
  config.validate();
  const double upper = config.truncation_multiplier * p.beta();
  // The exponent factor (sqrt(1+xi x) - 2)/(sqrt(1+xi x) - 1) changes sign at xi x = 3.
  const std::array<double, 3> breaks{3.0 / p.xi(), 0.1 * p.beta(), p.beta()};
  return integrate_adaptive([&](double x) { return integrand(p, x); }, 0.0, upper, breaks,
                            config.abs_tol, config.rel_tol, config.max_intervals);
}

}  // namespace detail

/// Bound on the integral of c1_inf_correction_integrand beyond x = m beta,
/// from e^u E1(u) < ln(1 + 1/u) and monotonicity of the E1 arguments.
inline double c1_inf_tail_bound(const SystemParams& p, double multiplier) {
  const double cut = multiplier * p.beta();
  const auto args = detail::e1_arguments(p, cut);
  return 2.0 / std::numbers::ln2 * std::exp(-cut / p.beta()) * std::log1p(1.0 / args.lo);
}

inline double c2_sup_tail_bound(const SystemParams& p, double multiplier) {
  const double cut = multiplier * p.beta();
  const auto args = detail::e1_arguments(p, cut);
  return 1.0 / std::numbers::ln2 * std::exp(-2.0 * cut / p.beta()) * std::log1p(1.0 / args.hi);
}

/// E[C1^N(a_inf)]: weak user's ergodic capacity when every pair uses its own a_inf.
inline ErgodicEstimate ergodic_c1_noma_at_a_inf(const SystemParams& p,
                                                const QuadratureConfig& config = {}) {
  const auto q = detail::integrate_correction(p, config, c1_inf_correction_integrand);
  const double closed = 3.0 * ergodic_c1_oma(p).value;
  return {closed - q.value, Method::Quadrature,
          q.error + c1_inf_tail_bound(p, config.truncation_multiplier)};
}

/// E[C2^N(a_sup)]: strong user's ergodic capacity when every pair uses its own a_sup.
inline ErgodicEstimate ergodic_c2_noma_at_a_sup(const SystemParams& p,
                                                const QuadratureConfig& config = {}) {
  const auto q = detail::integrate_correction(p, config, c2_sup_correction_integrand);
  const double closed = ergodic_c1_oma(p).value;
  return {closed + q.value, Method::Quadrature,
          q.error + c2_sup_tail_bound(p, config.truncation_multiplier)};
}

}  // namespace fairnoma
