#ifndef LCS_RNG_HPP
#define LCS_RNG_HPP

#include <cstdint>

#include "lcs/dense.hpp"

namespace lcs {

/// Deterministic 64-bit generator (splitmix64). Distribution code is written out
/// here so streams are identical across standard libraries and runs.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : m_state(seed) {}

  /// Independent stream for a sample index; stable under any execution order.
  static Rng split(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double uniform01();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);

  /// Uniform over {0, ..., n-1}.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal (Box-Muller, both values used).
  double normal();

  Vector uniform_vector(Index n, double lo, double hi);
  Vector normal_vector(Index n);

  /// Uniform direction on the unit sphere.
  Vector unit_vector(Index n);

private:
  std::uint64_t m_state;
  bool m_has_cached_normal = false;
  double m_cached_normal = 0.0;
};

} // namespace lcs

#endif
