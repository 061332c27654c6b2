#include "gearsieve/diophantine.hpp"

#include <stdexcept>
#include <string>

namespace gearsieve {

namespace {

constexpr std::int64_t kMaxN = std::int64_t{1} << 62;

}  // namespace

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) {
    throw std::domain_error("isqrt: negative argument " + std::to_string(n));
  }
  if (n < 2) {
    return n;
  }
  // Newton iteration from above; converges monotonically to floor(sqrt(n)).
  auto x = static_cast<unsigned __int128>(n);
  unsigned __int128 y = (x + 1) / 2;
  while (y < x) {
    x = y;
    y = (x + static_cast<unsigned __int128>(n) / x) / 2;
  }
  return static_cast<std::int64_t>(x);
}

CanonicalSeed canonical_seed(std::int64_t n) {
  if (n < 4 || n >= kMaxN) {
    throw std::domain_error("canonical_seed: n must satisfy 4 <= n < 2^62, got " + std::to_string(n));
  }
  // 2*n0 == n (mod 3): n%3 == 0 -> 0, 1 -> 2, 2 -> 1.
  static constexpr std::int64_t kOffset[3] = {0, 2, 1};
  const std::int64_t n0 = kOffset[n % 3];
  return CanonicalSeed{n, n0, (n - 2 * n0) / 3};
}

bool is_prime_candidate(const CanonicalSeed& seed) noexcept {
  return seed.m0 % 2 == 1 && seed.n0 != 0;
}

Gear gear_at(const CanonicalSeed& seed, std::int64_t k) noexcept {
  return Gear{k, seed.n0 + 3 * k, seed.m0 - 2 * k};
}

std::vector<Gear> gear_sequence(const CanonicalSeed& seed) {
  if (seed.m0 % 2 == 0) {
    throw std::domain_error("gear_sequence: m0 must be odd, got " + std::to_string(seed.m0));
  }
  std::vector<Gear> gears;
  if (seed.m0 < 3) {
    return gears;
  }
  gears.reserve(static_cast<std::size_t>((seed.m0 - 1) / 2));
  for (std::int64_t k = 0; seed.m0 - 2 * k >= 3; ++k) {
    gears.push_back(gear_at(seed, k));
  }
  return gears;
}

bool structural_is_prime(std::int64_t n) {
  if (n <= 3) {
    throw std::domain_error("structural_is_prime: n must exceed 3, got " + std::to_string(n));
  }
  const CanonicalSeed seed = canonical_seed(n);
  if (!is_prime_candidate(seed)) {
    return false;
  }
  const std::int64_t root = isqrt(n);
  if (seed.m0 < 3 || root < 3) {
    return true;
  }
  // Only gears with m_k <= isqrt(n) matter; jump straight to the first one.
  const std::int64_t top = root % 2 == 1 ? root : root - 1;
  const std::int64_t k_first = seed.m0 > top ? (seed.m0 - top) / 2 : 0;
  for (std::int64_t k = k_first; seed.m0 - 2 * k >= 3; ++k) {
    const Gear g = gear_at(seed, k);
    if (g.phase % g.modulus == 0) {
      return false;
    }
  }
  return true;
}

}  // namespace gearsieve
