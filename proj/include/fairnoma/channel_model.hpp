#pragma once

// Two-user i.i.d. Rayleigh downlink: exponential SNR gains, ordered pairs,
// and seeded substreams for reproducible sampling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace fairnoma {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

/// Transmit SNR xi (linear) and Rayleigh scale beta = E|h|^2.
class SystemParams {
 public:
  SystemParams(double xi, double beta = 1.0) : xi_(xi), beta_(beta) {
    if (!(std::isfinite(xi) && xi > 0.0)) {
      throw std::domain_error("SystemParams: xi must be finite and > 0");
    }
    if (!(std::isfinite(beta) && beta > 0.0)) {
      throw std::domain_error("SystemParams: beta must be finite and > 0");
    }
  }

  static SystemParams from_db(double snr_db, double beta = 1.0) {
    return SystemParams(db_to_linear(snr_db), beta);
  }

  double xi() const { return xi_; }
  double beta() const { return beta_; }
  double snr_db() const { return linear_to_db(xi_); }

 private:
  double xi_;
  double beta_;
};

/// Channel SNR gains sorted so that MU-1 is the weak user and MU-2 the strong one.
class ChannelPair {
 public:
  ChannelPair(double g1, double g2) {
    if (!(std::isfinite(g1) && std::isfinite(g2) && g1 > 0.0 && g2 > 0.0)) {
      throw std::domain_error("ChannelPair: gains must be finite and > 0");
    }
    weak_ = std::min(g1, g2);
    strong_ = std::max(g1, g2);
  }

  double weak() const { return weak_; }
  double strong() const { return strong_; }

  friend bool operator==(const ChannelPair&, const ChannelPair&) = default;

 private:
  double weak_;
  double strong_;
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// A reproducible substream: (seed, stream_id) fully determines the sequence.
/// Distinct stream ids are decorrelated by hashing into the engine seed.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed),
        stream_id_(stream_id),
        engine_(detail::splitmix64(detail::splitmix64(seed) ^
                                   detail::splitmix64(stream_id + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exponential with the given mean, by inversion. Never returns 0.
  double exponential(double mean) {
    double g = 0.0;
    while (g == 0.0) g = -mean * std::log(uniform_open());
    return g;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Two independent Exponential(beta) gains, sorted into (weak, strong).
inline ChannelPair sample_pair(const SystemParams& params, RandomStream& stream) {
  const double g1 = stream.exponential(params.beta());
  const double g2 = stream.exponential(params.beta());
  return ChannelPair(g1, g2);
}

/// Joint density of the ordered gains, (2/beta^2) e^{-(x1+x2)/beta} on 0 <= x1 <= x2.
inline double ordered_joint_pdf(const SystemParams& params, double x1, double x2) {
  if (!(x1 >= 0.0 && x2 >= 0.0)) {
    throw std::domain_error("ordered_joint_pdf: gains must be >= 0");
  }
  if (x1 > x2) return 0.0;
  const double beta = params.beta();
  return 2.0 / (beta * beta) * std::exp(-(x1 + x2) / beta);
}

}  // namespace fairnoma
