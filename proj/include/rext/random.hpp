#pragma once

#include <cstdint>
#include <random>

#include "rext/tensor.hpp"

namespace rext {

/// Reproducible sampler: MT19937-64 seeded directly, with doubles built from
/// the top 53 bits, so streams do not depend on the standard library's
/// distribution implementations.
class Sampler {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64; u = (next >> 11) * 2^-53; trial seed = splitmix64(seed + 0x9E3779B97F4A7C15 * (index + 1))";

  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  Vec<double> uniform_vec(int n, double lo, double hi) {
    Vec<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Independent stream per trial, derived from (seed, index).
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + 0x9E3779B97F4A7C15ull * (index + 1));
}

}  // namespace rext
