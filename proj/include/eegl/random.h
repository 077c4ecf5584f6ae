#ifndef EEGL_RANDOM_H_
#define EEGL_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <random>

namespace eegl {

// Distribution helpers built directly on mt19937_64 output so streams are
// identical across standard library implementations.

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Uniform integer in [0, n) by rejection.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t r;
  do r = rng();
  while (r >= limit);
  return r % n;
}

// Box-Muller; consumes two draws per call.
inline double normal(std::mt19937_64& rng, double mean = 0.0, double sd = 1.0) {
  double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

template <class It>
void shuffle(It first, It last, std::mt19937_64& rng) {
  for (auto i = last - first - 1; i > 0; --i)
    std::iter_swap(first + i, first + static_cast<long>(uniform_index(rng, i + 1)));
}

}  // namespace eegl

#endif  // EEGL_RANDOM_H_
