#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

// Deterministic random streams. Every stochastic component draws from a
// stream keyed by (seed, domain, id), so replicates are independent,
// reproducible, and safe to evaluate concurrently in any order.

namespace hdcpd {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class StreamDomain : std::uint64_t {
  permutation = 1,      // Algorithm-1 permutation replicates
  intervals = 2,        // WBS interval draws
  datagen = 3,          // simulation scenario data
  wbs_permutation = 4,  // per-node WBS permutation replicates
  replicate = 5,        // limit-law Monte-Carlo replicates
  experiment = 6,       // experiment harness per-rep seeds
  chain = 7,            // Gibbs chains
};

inline std::uint64_t substream_seed(std::uint64_t seed, StreamDomain domain, std::uint64_t id) {
  return splitmix64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(domain))) + id);
}

/// Seeded generator with the handful of draw types the library needs.
/// All draw algorithms are spelled out here (no std distributions) so the
/// byte stream is identical across standard libraries and platforms.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on {0, ..., bound-1}; unbiased via rejection.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = bound == 0 ? 0 : ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r;
    do {
      r = next_u64();
    } while (r >= limit);
    return r % bound;
  }

  /// Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

  /// Exponential with rate 1.
  double exponential() { return -std::log1p(-uniform()); }

  /// Poisson with small mean (Knuth product method).
  std::uint32_t poisson(double mean) {
    const double limit = std::exp(-mean);
    std::uint32_t k = 0;
    double prod = uniform();
    while (prod > limit) {
      ++k;
      prod *= uniform();
    }
    return k;
  }

  /// -1 or +1 with equal probability.
  double rademacher() { return (next_u64() & 1u) ? 1.0 : -1.0; }

  /// In-place Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hdcpd
