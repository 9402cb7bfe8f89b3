#pragma once

// Seeded Monte Carlo over ordered Rayleigh pairs. Samples are split into
// fixed-size blocks; block b draws from RandomStream(seed, b) and keeps
// Welford moments. Blocks are merged in index order, so the result is
// bit-identical for any number of worker threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fairnoma/channel_model.hpp"
#include "fairnoma/noma_core.hpp"

namespace fairnoma {

enum class PolicyKind { Fixed, AtInf, AtSup, Midpoint };

/// How the per-pair allocation a is chosen.
struct AllocationPolicy {
  PolicyKind kind = PolicyKind::Midpoint;
  double fixed_value = 0.0;

  static AllocationPolicy fixed(double a) {
    if (!(a > 0.0 && a < 1.0)) {
      throw std::domain_error("AllocationPolicy: fixed a must lie in (0, 1)");
    }
    return {PolicyKind::Fixed, a};
  }
  static AllocationPolicy at_inf() { return {PolicyKind::AtInf, 0.0}; }
  static AllocationPolicy at_sup() { return {PolicyKind::AtSup, 0.0}; }
  static AllocationPolicy midpoint() { return {PolicyKind::Midpoint, 0.0}; }

  PowerAllocation resolve(const SystemParams& params, const ChannelPair& pair) const {
    if (kind == PolicyKind::Fixed) return PowerAllocation(fixed_value);
    const FairRegion region = fair_region(params, pair);
    switch (kind) {
      case PolicyKind::AtInf: return PowerAllocation(region.a_inf);
      case PolicyKind::AtSup: return PowerAllocation(region.a_sup);
      default: return PowerAllocation(region.midpoint());
    }
  }
};

inline std::string_view to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::Fixed: return "fixed";
    case PolicyKind::AtInf: return "at_inf";
    case PolicyKind::AtSup: return "at_sup";
    case PolicyKind::Midpoint: return "midpoint";
  }
  return "unknown";
}

enum class Quantity { C1Oma, C2Oma, SumOma, C1Noma, C2Noma, SumNoma };

inline std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::C1Oma: return "c1_oma";
    case Quantity::C2Oma: return "c2_oma";
    case Quantity::SumOma: return "sum_oma";
    case Quantity::C1Noma: return "c1_noma";
    case Quantity::C2Noma: return "c2_noma";
    case Quantity::SumNoma: return "sum_noma";
  }
  return "unknown";
}

inline bool is_oma(Quantity q) {
  return q == Quantity::C1Oma || q == Quantity::C2Oma || q == Quantity::SumOma;
}

struct McResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

struct McOptions {
  unsigned workers = 0;                 // 0: std::thread::hardware_concurrency()
  std::uint64_t block_size = 1u << 16;  // part of the reproducibility contract
};

namespace detail {

struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.n) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
};

inline unsigned resolve_workers(unsigned requested, std::uint64_t blocks) {
  unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(w, std::max<std::uint64_t>(blocks, 1)));
}

}  // namespace detail

/// Mean and standard error of sample_fn(pair) over n_samples ordered pairs.
/// sample_fn must be safe to call concurrently.
template <class SampleFn>
McResult monte_carlo_mean(const SystemParams& params, std::uint64_t n_samples, std::uint64_t seed,
                          SampleFn sample_fn, const McOptions& options = {}) {
  if (n_samples < 1) throw std::invalid_argument("monte_carlo_mean: n_samples must be >= 1");
  if (options.block_size < 1) throw std::invalid_argument("monte_carlo_mean: block_size must be >= 1");
  const std::uint64_t blocks = (n_samples + options.block_size - 1) / options.block_size;
  std::vector<detail::Moments> partial(blocks);

  const auto run_block = [&](std::uint64_t b) {
    RandomStream stream(seed, b);
    const std::uint64_t begin = b * options.block_size;
    const std::uint64_t end = std::min(n_samples, begin + options.block_size);
    detail::Moments m;
    for (std::uint64_t i = begin; i < end; ++i) m.push(sample_fn(sample_pair(params, stream)));
    partial[b] = m;
  };

  const unsigned workers = detail::resolve_workers(options.workers, blocks);
  if (workers == 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::uint64_t b = w; b < blocks; b += workers) run_block(b);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  detail::Moments total;
  for (const auto& m : partial) total.merge(m);
  McResult r;
  r.mean = total.mean;
  r.n_samples = total.n;
  r.seed = seed;
  r.std_error = total.n > 1 ? std::sqrt(total.m2 / static_cast<double>(total.n - 1) /
                                        static_cast<double>(total.n))
                            : 0.0;
  return r;
}

/// Per-sample value of `quantity` for one pair; OMA quantities ignore the policy.
inline double sample_quantity(const SystemParams& params, const AllocationPolicy& policy,
                              Quantity quantity, const ChannelPair& pair) {
  switch (quantity) {
    case Quantity::C1Oma: return oma_capacity(params, pair.weak());
    case Quantity::C2Oma: return oma_capacity(params, pair.strong());
    case Quantity::SumOma:
      return oma_capacity(params, pair.weak()) + oma_capacity(params, pair.strong());
    default: break;
  }
  const auto c = noma_capacities(params, pair, policy.resolve(params, pair));
  if (quantity == Quantity::C1Noma) return c.c1;
  if (quantity == Quantity::C2Noma) return c.c2;
  return c.c1 + c.c2;
}

inline McResult estimate(const SystemParams& params, const AllocationPolicy& policy,
                         Quantity quantity, std::uint64_t n_samples, std::uint64_t seed,
                         const McOptions& options = {}) {
  if (policy.kind == PolicyKind::Fixed) AllocationPolicy::fixed(policy.fixed_value);
  return monte_carlo_mean(
      params, n_samples, seed,
      [&](const ChannelPair& pair) { return sample_quantity(params, policy, quantity, pair); },
      options);
}

/// S_N(a) - S_O on the same pair: E[S_N - S_O] with common random numbers.
inline double sum_gap(const SystemParams& params, const AllocationPolicy& policy,
                      const ChannelPair& pair) {
  const auto r = capacity_report(params, pair, policy.resolve(params, pair));
  return r.sum_noma - r.sum_oma;
}

inline McResult paired_gap(const SystemParams& params, const AllocationPolicy& policy,
                           std::uint64_t n_samples, std::uint64_t seed,
                           const McOptions& options = {}) {
  return monte_carlo_mean(
      params, n_samples, seed,
      [&](const ChannelPair& pair) { return sum_gap(params, policy, pair); }, options);
}

struct RegionMarkers {
  McResult a_inf;
  McResult a_sup;
};

/// Monte Carlo means of the per-pair region bounds, E[a_inf] and E[a_sup].
inline RegionMarkers region_markers(const SystemParams& params, std::uint64_t n_samples,
                                    std::uint64_t seed, const McOptions& options = {}) {
  return {monte_carlo_mean(
              params, n_samples, seed,
              [&](const ChannelPair& p) { return fair_region(params, p).a_inf; }, options),
          monte_carlo_mean(
              params, n_samples, seed,
              [&](const ChannelPair& p) { return fair_region(params, p).a_sup; }, options)};
}

}  // namespace fairnoma
