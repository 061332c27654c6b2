#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace gearsieve {

/// One coefficient of the twin-prime tau_p spectrum.
struct FourierRow {
  std::int64_t p = 0;
  std::int64_t k = 0;
  double closed = 0.0;
  std::complex<double> dft;
};

/// Closed form 4 cos^2(pi k/p) / p^2 (k != 0), (p-2)^2/p^2 (k == 0), next to
/// an O(p^2) direct DFT of the tau_p table. p >= 5 prime.
std::vector<FourierRow> tau_fourier(std::int64_t p);

struct VarianceStats {
  double var_closed = 0.0;    ///< 2(3p-8)/p^4
  double var_parseval = 0.0;  ///< sum_{k!=0} |closed coefficient|^2
  double var_direct = 0.0;    ///< (1/p) sum_d (tau(d) - mean)^2
  double ratio = 0.0;         ///< 1 + 2(3p-8)/(p-2)^4
};

VarianceStats variance_stats(std::int64_t p);

/// prod_{5<=p<=pmax} ratio(p) - 1, accumulated in logs.
double product_variance_constant(std::int64_t pmax);

enum class HConvention {
  appendix_c,  ///< h(d) = prod tau_p(d mod p)
  section4,    ///< h(d) = prod tau_p(3d mod p)
};

std::string_view to_string(HConvention c) noexcept;
HConvention parse_h_convention(std::string_view text);

struct EquidistReport {
  std::int64_t m0 = 0;
  std::int64_t L = 0;
  std::int64_t N = 0;
  HConvention convention = HConvention::appendix_c;
  double weighted_sum = 0.0;
  double theory = 0.0;
  double rel_error_pct = 0.0;
};

/// sum_{d=1}^{N} (L - 3d) h(d), L = m0^2, N = floor(L/3), over the basis
/// 5 <= p <= m0, against hbar L^2 / 6. m0 >= 11.
EquidistReport weighted_ergodic_sum(std::int64_t m0, HConvention convention = HConvention::appendix_c,
                                    unsigned workers = 1);

struct DecayFit {
  double alpha = 0.0;
  double intercept = 0.0;
};

/// Least-squares fit log(err) = intercept - alpha log(m0). Needs >= 3
/// distinct m0 values and positive errors.
DecayFit fit_decay_exponent(std::span<const double> m0s, std::span<const double> errors);

/// Runs weighted_ergodic_sum over the list and fits its rel-errors.
DecayFit fit_decay_exponent(std::span<const std::int64_t> m0_list, HConvention convention = HConvention::appendix_c,
                            unsigned workers = 1);

/// W(theta) = sum_{d=1}^{floor(L/3)} (L - 3d) e^{2 pi i d theta}.
std::complex<double> weighted_exp_sum(double theta, std::int64_t L);

/// Distance from theta to the nearest integer.
double nearest_integer_distance(double theta) noexcept;

/// L / (2 ||theta||); +inf at integers.
double weighted_exp_sum_bound(double theta, std::int64_t L) noexcept;

struct TwoPrimeReport {
  bool injective = false;
  double freq_sum = 0.0;
  double full_sum_bound = 0.0;
};

/// p < q primes, pq <= 1e7.
TwoPrimeReport two_prime_checks(std::int64_t p, std::int64_t q);

}  // namespace gearsieve
