#pragma once

// Instantaneous two-user capacities under OMA (half the resource each, full
// power) and NOMA (superposition coding, SIC at the strong user), and the
// fair power-allocation region in which NOMA beats OMA for both users.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fairnoma/channel_model.hpp"

namespace fairnoma {

/// Fraction of transmit power given to the strong user MU-2. Admits the whole
/// open interval (0, 1) so allocations outside the fair region can be studied.
class PowerAllocation {
 public:
  explicit PowerAllocation(double a) : a_(a) {
    if (!(a > 0.0 && a < 1.0)) {
      throw std::domain_error("PowerAllocation: a must lie in (0, 1)");
    }
  }
  double value() const { return a_; }

 private:
  double a_;
};

struct FairRegion {
  double a_inf;
  double a_sup;

  bool contains(double a) const { return a >= a_inf && a <= a_sup; }
  double midpoint() const { return 0.5 * (a_inf + a_sup); }
};

struct CapacityReport {
  double c1_oma;
  double c2_oma;
  double c1_noma;
  double c2_noma;
  double sum_oma;
  double sum_noma;
  double a_used;
};

namespace detail {

inline double bits(double nats) {
  const double b = nats / std::numbers::ln2;
  return b < 1e-300 ? 0.0 : b;
}

inline void require_positive(double v, const char* what) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw std::domain_error(std::string(what) + " must be finite and > 0");
  }
}

}  // namespace detail

/// sqrt(1 + y) - 1 without cancellation for small y.
inline double sqrt1pm1(double y) { return y / (1.0 + std::sqrt(1.0 + y)); }

/// a(g) = (sqrt(1 + xi g) - 1) / (xi g), evaluated in the rationalized form
/// 1 / (1 + sqrt(1 + xi g)). Strictly decreasing in g, with range (0, 1/2).
inline double allocation_bound(double xi, double g) {
  detail::require_positive(xi, "allocation_bound: xi");
  detail::require_positive(g, "allocation_bound: g");
  return 1.0 / (1.0 + std::sqrt(1.0 + xi * g));
}

/// [a(g_strong), a(g_weak)]: the weak user keeps its OMA rate up to a_sup,
/// the strong user reaches its OMA rate from a_inf on.
inline FairRegion fair_region(const SystemParams& params, const ChannelPair& pair) {
  return FairRegion{allocation_bound(params.xi(), pair.strong()),
                    allocation_bound(params.xi(), pair.weak())};
}

inline double oma_capacity(const SystemParams& params, double g) {
  if (!(g >= 0.0)) throw std::domain_error("oma_capacity: gain must be >= 0");
  return 0.5 * detail::bits(std::log1p(params.xi() * g));
}

struct NomaCapacities {
  double c1;
  double c2;
};

/// MU-1 decodes treating MU-2's signal as noise; MU-2 cancels MU-1 first.
inline NomaCapacities noma_capacities(const SystemParams& params, const ChannelPair& pair,
                                      PowerAllocation a) {
  const double xi = params.xi();
  const double av = a.value();
  const double sinr1 = (1.0 - av) * xi * pair.weak() / (av * xi * pair.weak() + 1.0);
  return {detail::bits(std::log1p(sinr1)),
          detail::bits(std::log1p(av * xi * pair.strong()))};
}

/// Difference between the strong and weak user's SINR for MU-2's own signal
/// (received with MU-1's signal as interference). Positive margin means the
/// strong user can decode whatever the weak user can, which makes SIC valid.
inline double sic_margin(const SystemParams& params, const ChannelPair& pair,
                         PowerAllocation a) {
  const double xi = params.xi();
  const double av = a.value();
  const auto sinr = [&](double g) { return av * xi * g / ((1.0 - av) * xi * g + 1.0); };
  return sinr(pair.strong()) - sinr(pair.weak());
}

inline CapacityReport capacity_report(const SystemParams& params, const ChannelPair& pair,
                                      PowerAllocation a) {
  const auto noma = noma_capacities(params, pair, a);
  CapacityReport r{};
  r.c1_oma = oma_capacity(params, pair.weak());
  r.c2_oma = oma_capacity(params, pair.strong());
  r.c1_noma = noma.c1;
  r.c2_noma = noma.c2;
  r.sum_oma = r.c1_oma + r.c2_oma;
  r.sum_noma = r.c1_noma + r.c2_noma;
  r.a_used = a.value();
  return r;
}

}  // namespace fairnoma
