#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "gearsieve/constellation.hpp"
#include "gearsieve/rational.hpp"
#include "gearsieve/signal.hpp"

namespace gearsieve {

enum class CorrelationCase {
  C,        ///< p | d
  B,        ///< p | (d - 1) or p | (d + 1)
  A,        ///< generic
  blocked,  ///< tau == 0
};

std::string_view to_string(CorrelationCase c) noexcept;

/// Joint survival at prime p of two positions d steps apart (2d apart as
/// integers): tau = (p - |F|)/p with F = {-h} U {-h - 2d} mod p.
struct LocalSurvival {
  std::int64_t p = 0;
  std::int64_t d = 0;
  std::int64_t open = 0;  ///< p - |F|
  Rational tau;
  CorrelationCase label = CorrelationCase::A;
};

LocalSurvival tau(const Constellation& c, std::int64_t p, std::int64_t d);

/// Surviving residue count p - |F_p(d)| for d = 0..p-1.
std::vector<std::int64_t> open_residue_table(const Constellation& c, std::int64_t p);

/// sum_{d=0}^{p-1} tau_p(d).
Rational period_tau_sum(const Constellation& c, std::int64_t p);

/// (1/p) sum_d tau_p(d) / mu_p^2 with mu_p = (p - omega)/p. Throws
/// std::domain_error when omega(p) == p.
Rational universal_average(const Constellation& c, std::int64_t p);

/// (1/Q) sum_{d<Q} prod_p tau_p(d) by enumeration, Q = prod(primes) <= 1e6.
Rational crt_average(const Constellation& c, std::span<const std::int64_t> primes);

/// positions * prod_{3<=p<=m0} (1 - omega(p)/p).
double mean_field(const Constellation& c, std::int64_t m0, std::int64_t positions);

/// mu = prod (1 - omega(p)/p) over the given primes, exactly.
Rational survival_probability(const Constellation& c, std::span<const std::int64_t> primes);

/// Exact off-diagonal covariance sum over ordered pairs r != s of n positions
/// under the uniform residue-torus measure:
///   2 * sum_{d=1}^{n-1} (n - d) (prod_p tau_p(d) - mu^2).
/// Direct evaluation in big rationals; intended for n <= ~2e4.
Rational off_diagonal_exact(const Constellation& c, std::span<const std::int64_t> primes, std::int64_t n);

/// Same quantity from the blocked/surviving split around blocking prime pb:
/// a closed-form blocked term plus a cyclic-table sum over multiples of pb.
/// Returns nullopt when c has no blocking prime among `primes`.
std::optional<double> off_diagonal_split(const Constellation& c, std::span<const std::int64_t> primes,
                                         std::int64_t n, unsigned workers = 1);

/// sum over 1 <= d < n with b not dividing d of (n - d), exactly.
BigInt non_multiple_weight(std::int64_t n, std::int64_t b);

enum class MeanSource { observed, mean_field };

struct MomentOptions {
  MeanSource mean_source = MeanSource::observed;
  /// Run the exact big-rational route as well when positions <= this bound.
  std::int64_t direct_limit = 20'000;
  unsigned workers = 1;
};

struct MomentReport {
  std::int64_t m0 = 0;
  std::int64_t L = 0;
  std::int64_t positions = 0;
  std::int64_t observed_count = 0;
  double mean_field = 0.0;
  double mu_N = 0.0;
  double sigma_diag = 0.0;
  double sigma_off = 0.0;
  std::optional<double> sigma_off_direct;
  std::optional<double> sigma_off_split;
  double variance = 0.0;
  double fano = 0.0;
  double snr = 0.0;
  double cv = 0.0;
  double chebyshev_desert_bound = 0.0;
  double paley_zygmund_bound = 0.0;
  double dc_energy = 0.0;
};

/// Variance decomposition of the certified count over the window. When both
/// off-diagonal routes run they must agree to 1e-9 relative, else
/// InvariantError.
MomentReport variance_decomposition(const SieveBasis& basis, const Window& window, const Constellation& c,
                                    MomentOptions options = {});

/// 1 - 2 (sum p^-2) / (sum p^-1) over odd primes 3 <= p <= m0.
double fano_theoretical(std::int64_t m0);

double chebyshev_desert_bound(double mu, double variance) noexcept;
double paley_zygmund_bound(double mu, double variance) noexcept;

struct AsymptoticReport {
  double mu_N = 0.0;
  double snr = 0.0;
  double cv = 0.0;
  double paley_zygmund = 0.0;
};

/// SNR/CV with variance proxy C * mu_N.
AsymptoticReport asymptotic_from_mean(double mu_N, double variance_constant = 1.0);

/// mu_N = mean_field over the default window [7, m0^2).
AsymptoticReport asymptotic_report(std::int64_t m0, const Constellation& c, double variance_constant = 1.0);

}  // namespace gearsieve
