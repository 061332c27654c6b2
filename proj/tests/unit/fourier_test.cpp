#include "gearsieve/fourier.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "gearsieve/primes.hpp"
#include "oracles.hpp"

namespace gs = gearsieve;

TEST(TauFourier, Examples) {
  const auto rows = gs::tau_fourier(5);
  ASSERT_EQ(rows.size(), 5U);
  const double c36 = std::cos(std::numbers::pi / 5);
  EXPECT_NEAR(rows[1].closed, 4 * c36 * c36 / 25, 1e-15);
  EXPECT_NEAR(rows[1].closed, 0.1047, 1e-4);
  EXPECT_NEAR(rows[0].closed, 0.36, 1e-15);
  EXPECT_NEAR(rows[0].dft.real(), 0.36, 1e-15);
  for (const auto& row : gs::tau_fourier(7)) {
    if (row.k != 0) {
      EXPECT_LE(std::abs(row.dft), 4.0 / 49 + 1e-15);
    }
  }
  EXPECT_THROW(gs::tau_fourier(3), std::domain_error);
  EXPECT_THROW(gs::tau_fourier(9), std::domain_error);
}

TEST(TauFourier, ClosedFormMatchesDft) {
  for (const auto p : gs::primes_in(5, 97)) {
    double ratio_max = 0;
    for (const auto& row : gs::tau_fourier(p)) {
      EXPECT_NEAR(row.dft.real(), row.closed, 1e-12) << p << " " << row.k;
      EXPECT_LE(std::fabs(row.dft.imag()), 1e-12);
      if (row.k != 0) {
        ratio_max = std::max(ratio_max, std::abs(row.dft) * static_cast<double>(p * p) / 4.0);
      }
    }
    EXPECT_LE(ratio_max, 1.0 + 1e-12);
  }
}

TEST(VarianceStats, Examples) {
  const auto five = gs::variance_stats(5);
  EXPECT_NEAR(five.var_closed, 14.0 / 625, 1e-17);
  EXPECT_NEAR(five.var_direct, 14.0 / 625, 1e-15);
  EXPECT_NEAR(five.ratio, 1 + 14.0 / 81, 1e-15);
  const auto seven = gs::variance_stats(7);
  EXPECT_NEAR(seven.var_closed, 26.0 / 2401, 1e-17);
  EXPECT_NEAR(seven.var_parseval, 26.0 / 2401, 1e-16);
}

TEST(VarianceStats, Parseval) {
  for (const auto p : gs::primes_in(5, 97)) {
    const auto s = gs::variance_stats(p);
    EXPECT_LE(std::fabs(s.var_parseval - s.var_closed), 1e-14 * s.var_closed) << p;
    EXPECT_LE(std::fabs(s.var_direct - s.var_closed), 1e-12 * s.var_closed) << p;
  }
}

TEST(ProductVariance, Values) {
  EXPECT_NEAR(gs::product_variance_constant(5), 14.0 / 81, 1e-15);
  EXPECT_NEAR(gs::product_variance_constant(7), (1 + 14.0 / 81) * (1 + 26.0 / 625) - 1, 1e-15);
  EXPECT_NEAR(gs::product_variance_constant(100'000), 0.242, 0.005);
  EXPECT_THROW(gs::product_variance_constant(4), std::domain_error);
}

TEST(Equidistribution, DirectSumOracle) {
  // Straight double loop over d and primes, no cyclic tables.
  for (const std::int64_t m0 : {11, 30, 47}) {
    for (const auto conv : {gs::HConvention::appendix_c, gs::HConvention::section4}) {
      const std::int64_t L = m0 * m0;
      const std::int64_t mult = conv == gs::HConvention::appendix_c ? 1 : 3;
      long double sum = 0;
      for (std::int64_t d = 1; d <= L / 3; ++d) {
        long double h = 1;
        for (std::int64_t p = 5; p <= m0; ++p) {
          if (!oracle::is_prime(p)) {
            continue;
          }
          const std::int64_t r = (mult * d) % p;
          const std::int64_t open = r == 0 ? p - 2 : (r == 1 || r == p - 1) ? p - 3 : p - 4;
          h *= static_cast<long double>(open) / p;
        }
        sum += static_cast<long double>(L - 3 * d) * h;
      }
      const auto report = gs::weighted_ergodic_sum(m0, conv, 3);
      EXPECT_NEAR(report.weighted_sum, static_cast<double>(sum), 1e-9 * static_cast<double>(sum));
      EXPECT_EQ(report.N, L / 3);
    }
  }
  EXPECT_THROW(gs::weighted_ergodic_sum(10), std::domain_error);
}

TEST(Equidistribution, TheoryAtThirty) {
  const auto r = gs::weighted_ergodic_sum(30);
  EXPECT_NEAR(r.theory, 5352.6, 0.1);
  EXPECT_NEAR(r.rel_error_pct, 100 * std::fabs(r.weighted_sum - r.theory) / r.theory, 1e-12);
}

TEST(Equidistribution, ErrorDecreasesAlongLadder) {
  for (const auto conv : {gs::HConvention::appendix_c, gs::HConvention::section4}) {
    double prev = 1e9;
    for (const std::int64_t m0 : {30, 50, 100, 200, 500, 1000}) {
      const double e = gs::weighted_ergodic_sum(m0, conv).rel_error_pct;
      EXPECT_LT(e, prev) << m0;
      prev = e;
    }
  }
}

TEST(Equidistribution, WorkerInvariant) {
  const auto a = gs::weighted_ergodic_sum(200, gs::HConvention::section4, 1);
  const auto b = gs::weighted_ergodic_sum(200, gs::HConvention::section4, 4);
  EXPECT_EQ(a.weighted_sum, b.weighted_sum);
}

TEST(DecayFit, SyntheticPowerLaws) {
  const std::vector<double> m0s{30, 50, 100, 200, 500, 1000};
  for (const double alpha : {1.0, 2.0}) {
    std::vector<double> err;
    for (const double m : m0s) {
      err.push_back(7.0 * std::pow(m, -alpha));
    }
    const auto fit = gs::fit_decay_exponent(m0s, err);
    EXPECT_NEAR(fit.alpha, alpha, 1e-9);
    EXPECT_NEAR(fit.intercept, std::log(7.0), 1e-9);
  }
  const std::vector<double> same{10, 10, 10};
  const std::vector<double> e3{1, 2, 3};
  EXPECT_THROW(gs::fit_decay_exponent(same, e3), std::invalid_argument);
  EXPECT_THROW(gs::fit_decay_exponent(std::span(m0s).first(2), std::span(e3).first(2)), std::invalid_argument);
}

TEST(DecayFit, ReferenceLadder) {
  const std::vector<std::int64_t> ladder{30, 50, 100, 200, 500, 1000};
  EXPECT_NEAR(gs::fit_decay_exponent(ladder).alpha, 1.67, 0.15);
}

TEST(ExpSum, Examples) {
  const auto half = gs::weighted_exp_sum(0.5, 12);
  EXPECT_NEAR(half.real(), -6.0, 1e-12);
  EXPECT_NEAR(half.imag(), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(gs::weighted_exp_sum_bound(0.5, 12), 12.0);
  EXPECT_NEAR(gs::weighted_exp_sum(0.0, 12).real(), 18.0, 1e-12);
  EXPECT_DOUBLE_EQ(gs::weighted_exp_sum_bound(1.0 / 3, 30), 45.0);
  EXPECT_LE(std::abs(gs::weighted_exp_sum(1.0 / 3, 30)), 45.0);
  EXPECT_TRUE(std::isinf(gs::weighted_exp_sum_bound(2.0, 30)));
  EXPECT_DOUBLE_EQ(gs::nearest_integer_distance(0.75), 0.25);
  EXPECT_NEAR(gs::nearest_integer_distance(-1.1), 0.1, 1e-15);
}

TEST(ExpSum, BoundOnRandomFrequencies) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const std::int64_t L : {99, 999, 9999}) {
    for (int i = 0; i < 200; ++i) {
      double theta = unit(rng);
      if (theta == 0.0) {
        continue;
      }
      EXPECT_LE(std::abs(gs::weighted_exp_sum(theta, L)), gs::weighted_exp_sum_bound(theta, L) * (1 + 1e-12));
    }
  }
}

TEST(TwoPrime, Examples) {
  const auto r = gs::two_prime_checks(3, 5);
  EXPECT_TRUE(r.injective);
  EXPECT_NEAR(r.full_sum_bound, 2 * 15 * (1 + 1.0 / 2 + 1.0 / 3 + 1.0 / 4 + 1.0 / 5 + 1.0 / 6 + 1.0 / 7), 1e-12);
  EXPECT_LE(r.freq_sum, r.full_sum_bound);
  EXPECT_TRUE(gs::two_prime_checks(5, 7).injective);
  EXPECT_THROW(gs::two_prime_checks(7, 5), std::domain_error);
  EXPECT_THROW(gs::two_prime_checks(4, 5), std::domain_error);
}

TEST(TwoPrime, ImageIsInjectiveUpTo31) {
  const auto primes = gs::primes_up_to(31);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (std::size_t j = i + 1; j < primes.size(); ++j) {
      const auto r = gs::two_prime_checks(primes[i], primes[j]);
      EXPECT_TRUE(r.injective);
      EXPECT_LE(r.freq_sum, r.full_sum_bound);
    }
  }
}

TEST(HConvention, Parse) {
  EXPECT_EQ(gs::parse_h_convention("section4"), gs::HConvention::section4);
  EXPECT_EQ(gs::to_string(gs::parse_h_convention("appendix_c")), "appendix_c");
  EXPECT_THROW(gs::parse_h_convention("sec4"), std::invalid_argument);
}
