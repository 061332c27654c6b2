#include "gearsieve/primes.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "gearsieve/diophantine.hpp"

namespace gearsieve {

namespace {

constexpr std::int64_t kTableLimit = std::int64_t{1} << 20;

// Plain Eratosthenes flags for [0, limit].
std::vector<std::uint8_t> sieve_flags(std::int64_t limit) {
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(limit + 1), 1);
  flags[0] = 0;
  if (limit >= 1) {
    flags[1] = 0;
  }
  for (std::int64_t i = 2; i * i <= limit; ++i) {
    if (flags[i]) {
      for (std::int64_t j = i * i; j <= limit; j += i) {
        flags[j] = 0;
      }
    }
  }
  return flags;
}

struct PrimeTable {
  std::vector<std::uint8_t> flags;
  std::vector<std::int64_t> primes;

  PrimeTable() : flags(sieve_flags(kTableLimit)) {
    for (std::int64_t i = 2; i <= kTableLimit; ++i) {
      if (flags[i]) {
        primes.push_back(i);
      }
    }
  }
};

const PrimeTable& table() {
  static const PrimeTable instance;
  return instance;
}

}  // namespace

std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi) {
  lo = std::max<std::int64_t>(lo, 2);
  if (hi < lo) {
    return {};
  }
  if (hi <= kTableLimit) {
    const auto& primes = table().primes;
    auto first = std::lower_bound(primes.begin(), primes.end(), lo);
    auto last = std::upper_bound(primes.begin(), primes.end(), hi);
    return {first, last};
  }
  std::vector<std::int64_t> out;
  SegmentedSieve(lo, hi + 1).run([&](std::int64_t base, std::span<const std::uint8_t> is_prime) {
    for (std::size_t i = 0; i < is_prime.size(); ++i) {
      if (is_prime[i]) {
        out.push_back(base + static_cast<std::int64_t>(i));
      }
    }
  });
  return out;
}

bool is_small_prime(std::int64_t n) {
  if (n < 0 || n > kTableLimit) {
    throw std::out_of_range("is_small_prime: n outside [0, 2^20]: " + std::to_string(n));
  }
  return table().flags[static_cast<std::size_t>(n)] != 0;
}

SegmentedSieve::SegmentedSieve(std::int64_t lo, std::int64_t hi, std::int64_t segment_size)
    : lo_(std::max<std::int64_t>(lo, 0)), hi_(hi), segment_size_(segment_size) {
  if (segment_size_ <= 0) {
    throw std::invalid_argument("SegmentedSieve: segment size must be positive");
  }
  if (hi_ > lo_) {
    const std::int64_t root = isqrt(hi_ - 1);
    if (root <= kTableLimit) {
      sieving_primes_ = primes_in(2, root);
    } else {
      const auto flags = sieve_flags(root);
      for (std::int64_t i = 2; i <= root; ++i) {
        if (flags[i]) {
          sieving_primes_.push_back(i);
        }
      }
    }
  }
}

void SegmentedSieve::run(const SegmentVisitor& visit) const {
  std::vector<std::uint8_t> flags;
  for (std::int64_t base = lo_; base < hi_; base += segment_size_) {
    const std::int64_t top = std::min(hi_, base + segment_size_);
    flags.assign(static_cast<std::size_t>(top - base), 1);
    for (std::int64_t v = base; v < std::min<std::int64_t>(top, 2); ++v) {
      flags[v - base] = 0;
    }
    for (const std::int64_t p : sieving_primes_) {
      if (p * p >= top) {
        break;
      }
      std::int64_t start = std::max(p * p, (base + p - 1) / p * p);
      for (std::int64_t m = start; m < top; m += p) {
        flags[m - base] = 0;
      }
    }
    visit(base, flags);
  }
}

}  // namespace gearsieve
