#include "lcs/rng.hpp"

#include <cmath>

namespace lcs {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace

Rng Rng::split(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ (index * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL);
  return Rng(splitmix64(s));
}

std::uint64_t Rng::next_u64() { return splitmix64(m_state); }

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  // Rejection-free modulo is fine here: n is tiny against 2^64.
  return n == 0 ? 0 : next_u64() % n;
}

double Rng::normal() {
  if (m_has_cached_normal) {
    m_has_cached_normal = false;
    return m_cached_normal;
  }
  double u1 = 0.0;
  do {
    u1 = uniform01();
  } while (u1 <= 0.0);
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  m_cached_normal = r * std::sin(theta);
  m_has_cached_normal = true;
  return r * std::cos(theta);
}

Vector Rng::uniform_vector(Index n, double lo, double hi) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
  return v;
}

Vector Rng::normal_vector(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Vector Rng::unit_vector(Index n) {
  Vector v = normal_vector(n);
  double norm = v.norm();
  while (norm < 1e-12) {
    v = normal_vector(n);
    norm = v.norm();
  }
  return v / norm;
}

} // namespace lcs
