#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace gearsieve {

/// All primes p with lo <= p <= hi, ascending.
///
/// Limits up to 2^20 are served from a table built once on first use and
/// read-only afterwards; larger limits sieve on demand.
std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi);

inline std::vector<std::int64_t> primes_up_to(std::int64_t hi) { return primes_in(2, hi); }

/// Odd primes 3 <= p <= hi.
inline std::vector<std::int64_t> odd_primes_up_to(std::int64_t hi) { return primes_in(3, hi); }

/// Primality from the shared table; valid for n <= 2^20 (std::out_of_range beyond).
bool is_small_prime(std::int64_t n);

/// Classical segmented Eratosthenes over [lo, hi): calls `visit` with a
/// primality flag per integer of each segment. Sieving primes are all primes
/// <= isqrt(hi - 1). Independent of the gear machinery.
class SegmentedSieve {
 public:
  using SegmentVisitor = std::function<void(std::int64_t base, std::span<const std::uint8_t> is_prime)>;

  SegmentedSieve(std::int64_t lo, std::int64_t hi, std::int64_t segment_size = std::int64_t{1} << 18);

  void run(const SegmentVisitor& visit) const;

 private:
  std::int64_t lo_;
  std::int64_t hi_;
  std::int64_t segment_size_;
  std::vector<std::int64_t> sieving_primes_;
};

}  // namespace gearsieve
