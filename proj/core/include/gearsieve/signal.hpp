#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gearsieve/constellation.hpp"
#include "gearsieve/rational.hpp"

namespace gearsieve {

/// Odd primes 3 <= p <= m0.
struct SieveBasis {
  std::int64_t m0 = 0;
  std::vector<std::int64_t> primes;
};

/// Basis for a seed capacity: m0 must be odd and >= 3.
SieveBasis build_basis(std::int64_t m0);

/// Basis for an experiment bound: primes 3 <= p <= bound, any bound >= 3.
/// The sweep tables use even bounds (30, 50, 100, ...).
SieveBasis basis_up_to(std::int64_t bound);

/// Odd candidates N_r = anchor + 2r inside [anchor, end).
class Window {
 public:
  /// Certification window [anchor, m0^2). anchor must be odd, >= 5,
  /// coprime to 3 and below m0^2.
  static Window certification(std::int64_t anchor, std::int64_t m0);

  /// Plain odd-stride range [anchor, end); anchor odd and >= 1.
  static Window span(std::int64_t anchor, std::int64_t end);

  std::int64_t anchor() const noexcept { return anchor_; }
  std::int64_t end() const noexcept { return end_; }
  std::int64_t length() const noexcept { return end_ - anchor_; }
  std::int64_t positions() const noexcept { return (length() + 1) / 2; }
  std::int64_t candidate(std::int64_t r) const noexcept { return anchor_ + 2 * r; }

  /// Positions whose every member N_r + h stays below end.
  std::int64_t certifiable_positions(const Constellation& c) const noexcept;

 private:
  Window(std::int64_t anchor, std::int64_t end) : anchor_(anchor), end_(end) {}

  std::int64_t anchor_;
  std::int64_t end_;
};

struct EvalOptions {
  /// Contiguous partitions of the position range; results never depend on it.
  std::size_t segments = 1;
  unsigned workers = 1;
};

/// Per-position composite signal S_C(r), saturating at 255, or a survivor bit
/// mask (bit r set iff S_C(r) == 0) in compact mode.
struct SignalTrace {
  using Counters = std::vector<std::uint8_t>;
  using SurvivorMask = std::vector<std::uint64_t>;

  Window window;
  Constellation constellation;
  std::variant<Counters, SurvivorMask> values;

  bool compact() const noexcept { return std::holds_alternative<SurvivorMask>(values); }
  bool survives(std::int64_t r) const noexcept;
};

enum class TraceMode { counters, survivor_mask };

/// S_C(r) = sum_{h in H} sum_{p in basis} [p | N_r + h], by per-prime striding.
/// Throws std::domain_error for an inadmissible constellation.
SignalTrace composite_signal(const SieveBasis& basis, const Window& window, const Constellation& c,
                             EvalOptions options = {}, TraceMode mode = TraceMode::counters);

struct CertifiedResult {
  std::int64_t count = 0;
  std::optional<std::vector<std::int64_t>> survivors;
};

/// Counts in-range positions with S_C(r) == 0.
CertifiedResult certify(const SignalTrace& trace, bool materialize = false);

/// Streaming statistics of one window evaluation; no trace is kept.
struct ScanSummary {
  std::int64_t positions = 0;
  std::int64_t certifiable = 0;
  std::int64_t certified = 0;
  /// Sum and sum of squares of S_C over all positions.
  std::uint64_t signal_sum = 0;
  std::uint64_t signal_sum_sq = 0;
  std::optional<std::vector<std::int64_t>> survivors;

  double mean() const noexcept;
  /// Population variance of S_C over all positions.
  double variance() const noexcept;
};

struct ScanOptions {
  std::size_t segments = 1;
  unsigned workers = 1;
  bool collect_survivors = false;
};

ScanSummary scan_window(const SieveBasis& basis, const Window& window, const Constellation& c,
                        ScanOptions options = {});

/// Goldbach representations E = n + (E - n), n in [3, E/2], both prime, using
/// the basis of odd primes <= smallest odd m0 >= sqrt(E). E even and >= 8.
CertifiedResult goldbach_count(std::int64_t even, bool materialize = false);

/// Constellations in the window with every member prime and below end, via a
/// classical segmented sieve. Window end <= 1e9.
std::int64_t classical_oracle_count(const Window& window, const Constellation& c);

/// Exact fraction of residues a mod Q = prod(primes) with p not dividing a + h
/// for every p and h, by exhaustive enumeration. Q <= 1e8.
Rational torus_average(std::span<const std::int64_t> primes, const Constellation& c);

}  // namespace gearsieve
