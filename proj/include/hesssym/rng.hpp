#pragma once

// Counter-based Gaussian sampler. Each draw is a pure function of
// (seed, stream, index), so perturbation trials are reproducible bit for bit
// regardless of evaluation order or thread count.

#include <cmath>
#include <cstdint>

namespace hesssym {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace detail {

inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                             std::uint64_t lane) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ index);
  h = splitmix64(h ^ lane);
  return h;
}

}  // namespace detail

// Uniform draw in (0, 1] (lane selects independent values for the same key).
inline double uniform_open01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                             std::uint64_t lane) {
  const std::uint64_t bits = detail::mix_key(seed, stream, index, lane) >> 11;
  return static_cast<double>(bits + 1) * 0x1.0p-53;
}

// Standard normal draw via Box-Muller.
inline double normal_sample(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const double u1 = uniform_open01(seed, stream, index, 0);
  const double u2 = uniform_open01(seed, stream, index, 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace hesssym
