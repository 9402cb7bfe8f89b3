#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration on a finite interval,
// with optional interior breakpoints. Always bisects the interval with the
// largest error estimate; the result is summed in left-to-right interval order
// so it does not depend on the order in which intervals were refined.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "fairnoma/special_functions.hpp"

namespace fairnoma {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
};

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for nodes 1, 3, 5 and the centre of the Kronrod set.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Segment gauss_kronrod_15(F& f, double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  std::array<double, 7> f_left{};
  std::array<double, 7> f_right{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f_left[j] = f(centre - dx);
    f_right[j] = f(centre + dx);
    const double pair = f_left[j] + f_right[j];
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  // QUADPACK-style scaling of |K - G| against the integrand's variation.
  const double mean = 0.5 * kronrod;
  double resasc = kKronrodWeights[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kKronrodWeights[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
  }
  resasc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  return Segment{lo, hi, kronrod * half, err};
}

}  // namespace detail

/// Integrates f over [lo, hi]. `breakpoints` strictly inside (lo, hi) seed the
/// initial partition. Throws ConvergenceError if the tolerance
/// max(abs_tol, rel_tol * |I|) is not met within `max_intervals` segments.
template <class F>
QuadratureResult integrate_adaptive(F f, double lo, double hi, std::span<const double> breakpoints,
                                    double abs_tol, double rel_tol, int max_intervals = 4000) {
  if (!(hi > lo)) throw std::domain_error("integrate_adaptive: require hi > lo");
  std::vector<double> edges{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi) edges.push_back(b);
  }
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<detail::Segment> segments;
  segments.reserve(static_cast<std::size_t>(max_intervals) + edges.size());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    segments.push_back(detail::gauss_kronrod_15(f, edges[i], edges[i + 1]));
  }

  const auto totals = [&segments] {
    double value = 0.0;
    double error = 0.0;
    for (const auto& s : segments) {
      value += s.value;
      error += s.error;
    }
    return std::pair{value, error};
  };

  auto [value, error] = totals();
  while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
    if (static_cast<int>(segments.size()) >= max_intervals) {
      throw ConvergenceError("integrate_adaptive: subdivision budget exhausted");
    }
    auto worst = std::max_element(segments.begin(), segments.end(),
                                  [](const auto& a, const auto& b) { return a.error < b.error; });
    const double mid = 0.5 * (worst->lo + worst->hi);
    if (!(mid > worst->lo && mid < worst->hi)) {
      throw ConvergenceError("integrate_adaptive: interval too small to bisect");
    }
    const detail::Segment left = detail::gauss_kronrod_15(f, worst->lo, mid);
    const detail::Segment right = detail::gauss_kronrod_15(f, mid, worst->hi);
    *worst = left;
    segments.push_back(right);
    std::tie(value, error) = totals();
  }

  std::sort(segments.begin(), segments.end(),
            [](const auto& a, const auto& b) { return a.lo < b.lo; });
  auto [sorted_value, sorted_error] = totals();
  if (!std::isfinite(sorted_value)) {
    throw ConvergenceError("integrate_adaptive: non-finite integrand");
  }
  return QuadratureResult{sorted_value, sorted_error, static_cast<int>(segments.size())};
}

}  // namespace fairnoma
