// rng.hpp
// Counter-based pseudo-random generator with explicit (seed, stream)
// identity. Two generators built from the same pair produce the same
// sequence on any platform, and derived(i) yields an independent stream
// without advancing the parent, so Monte Carlo loops stay reproducible
// no matter how samples are scheduled.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace pufqas {

namespace detail {

// SplitMix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed),
        stream_(stream_id),
        state_(detail::mix64(seed ^ 0x5851F42D4C957F2DULL) +
               detail::mix64(stream_id ^ 0x14057B7EF767814FULL)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  // New generator with the same seed and an independent stream. Does not
  // consume or depend on the parent's position, only on its identity.
  SeededRng derived(std::uint64_t index) const {
    return SeededRng(seed_, detail::mix64(stream_ + 0x9E3779B97F4A7C15ULL * (index + 1)));
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 significant bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // One uniform draw per call.
  bool bernoulli(double p) {
    if (p < 0.0 || p > 1.0) throw std::domain_error("bernoulli probability outside [0, 1]");
    return uniform() < p;
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Real and imaginary parts are independent standard normals.
  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  // Exact Poisson sample. Large means are split into sums of smaller
  // independent Poisson draws so the product method never underflows.
  std::int64_t poisson(double mean) {
    if (mean < 0.0) throw std::domain_error("poisson mean must be nonnegative");
    if (mean == 0.0) return 0;
    const int chunks = static_cast<int>(std::ceil(mean / 30.0));
    const double sub = mean / chunks;
    const double limit = std::exp(-sub);
    std::int64_t total = 0;
    for (int c = 0; c < chunks; ++c) {
      std::int64_t k = 0;
      double prod = 1.0;
      do {
        ++k;
        prod *= uniform();
      } while (prod > limit);
      total += k - 1;
    }
    return total;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_;
};

}  // namespace pufqas
