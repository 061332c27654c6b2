#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gearsieve {

/// Offset set H = {0 = h_1 < h_2 < ... < h_k}.
class Constellation {
 public:
  /// Throws std::invalid_argument unless offsets are strictly increasing,
  /// non-negative and start at 0.
  explicit Constellation(std::vector<std::int64_t> offsets);

  static Constellation twins() { return Constellation({0, 2}); }
  static Constellation cousins() { return Constellation({0, 4}); }
  static Constellation sexy() { return Constellation({0, 6}); }

  /// Parses "0,2,6". Whitespace around entries is ignored.
  static Constellation parse(std::string_view text);

  std::span<const std::int64_t> offsets() const noexcept { return offsets_; }
  std::size_t size() const noexcept { return offsets_.size(); }
  std::int64_t max_offset() const noexcept { return offsets_.back(); }

  std::string to_string() const;

  friend bool operator==(const Constellation&, const Constellation&) = default;

 private:
  std::vector<std::int64_t> offsets_;
};

struct AdmissibilityReport {
  Constellation constellation;
  /// omega(p) for every prime p <= max(offsets) + 2.
  std::map<std::int64_t, std::int64_t> per_prime;
  bool admissible = false;
  /// Odd primes with omega(p) == p - 1 (a single open residue class).
  std::vector<std::int64_t> blocking_primes;
};

struct DensityConstants {
  std::int64_t m0 = 0;
  /// prod_{3<=p<=m0} (1 - omega(p)/p)
  double partial_product = 0.0;
  double log_partial_product = 0.0;
  /// prod_{3<=q<=m0} nu(q) q^(k-1) / (q-1)^k; tends to the singular constant.
  double singular_constant = 0.0;
};

/// Number of distinct residues {h mod p}.
std::int64_t omega(const Constellation& c, std::int64_t p);

/// Residues left open modulo q: q - omega(c, q).
std::int64_t nu(const Constellation& c, std::int64_t q);

AdmissibilityReport is_admissible(const Constellation& c);

/// Smallest odd blocking prime, or 0 when the tuple has none.
std::int64_t smallest_blocking_prime(const Constellation& c);

/// Throws std::domain_error for inadmissible c or m0 < 3.
DensityConstants density_product(const Constellation& c, std::int64_t m0);

/// 1 if p | E, else 2. Throws std::invalid_argument for odd E or E <= 4.
std::int64_t goldbach_omega(std::int64_t even, std::int64_t p);

/// prod over odd primes q | E, q <= m0, of (q-1)/(q-2).
double goldbach_oscillating_factor(std::int64_t even, std::int64_t m0);

}  // namespace gearsieve
