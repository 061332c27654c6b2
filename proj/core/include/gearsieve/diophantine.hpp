#pragma once

#include <cstdint>
#include <vector>

namespace gearsieve {

/// Unique decomposition n = 2*n0 + 3*m0 with n0 in {0,1,2} and m0 maximal.
struct CanonicalSeed {
  std::int64_t n = 0;
  std::int64_t n0 = 0;
  /// Spectral capacity. Zero only for n = 4.
  std::int64_t m0 = 0;

  friend bool operator==(const CanonicalSeed&, const CanonicalSeed&) = default;
};

/// One (phase, modulus) pair of the descent n_k = n0 + 3k, m_k = m0 - 2k.
struct Gear {
  std::int64_t k = 0;
  std::int64_t phase = 0;
  std::int64_t modulus = 0;

  friend bool operator==(const Gear&, const Gear&) = default;
};

/// Exact floor(sqrt(n)) for n >= 0.
std::int64_t isqrt(std::int64_t n);

/// Throws std::domain_error for n < 4 or n >= 2^62.
CanonicalSeed canonical_seed(std::int64_t n);

/// m0 odd and n0 != 0, i.e. gcd(n, 6) == 1.
bool is_prime_candidate(const CanonicalSeed& seed) noexcept;

/// Gears for k = 0, 1, ... while m_k >= 3. Requires odd m0 (std::domain_error
/// otherwise); m0 == 1 yields an empty sequence.
std::vector<Gear> gear_sequence(const CanonicalSeed& seed);

/// Gear with index k, computed directly from the seed.
Gear gear_at(const CanonicalSeed& seed, std::int64_t k) noexcept;

/// Primality via the gear system: n is prime iff no gear with
/// 1 < m_k <= isqrt(n) has m_k | n_k. Rejects n <= 3 with std::domain_error.
bool structural_is_prime(std::int64_t n);

}  // namespace gearsieve
