#include "gearsieve/correlation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "gearsieve/errors.hpp"
#include "gearsieve/primes.hpp"
#include "oracles.hpp"

namespace gs = gearsieve;

namespace {

const std::vector<gs::Constellation> kTuples = {gs::Constellation::twins(), gs::Constellation::cousins(),
                                                gs::Constellation::sexy(), gs::Constellation({0, 2, 6})};

std::vector<std::vector<std::int64_t>> subsets(const std::vector<std::int64_t>& all) {
  std::vector<std::vector<std::int64_t>> out;
  for (unsigned mask = 1; mask < (1U << all.size()); ++mask) {
    std::vector<std::int64_t> s;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (mask & (1U << i)) {
        s.push_back(all[i]);
      }
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(Tau, Examples) {
  const auto twins = gs::Constellation::twins();
  EXPECT_EQ(gs::tau(twins, 5, 0).tau, gs::make_rational(3, 5));
  EXPECT_EQ(gs::tau(twins, 5, 0).label, gs::CorrelationCase::C);
  EXPECT_EQ(gs::tau(twins, 5, 1).tau, gs::make_rational(2, 5));
  EXPECT_EQ(gs::tau(twins, 5, 1).label, gs::CorrelationCase::B);
  EXPECT_EQ(gs::tau(twins, 3, 1).tau, 0);
  EXPECT_EQ(gs::tau(twins, 3, 1).label, gs::CorrelationCase::blocked);
  EXPECT_EQ(gs::tau(twins, 7, 3).tau, gs::make_rational(3, 7));
  EXPECT_EQ(gs::tau(twins, 7, 3).label, gs::CorrelationCase::A);
  EXPECT_THROW(gs::tau(twins, 9, 1), std::domain_error);
}

TEST(Tau, TwinCasesForEveryPrime) {
  const auto twins = gs::Constellation::twins();
  for (const auto p : gs::primes_in(5, 200)) {
    for (std::int64_t d = 0; d < 2 * p; ++d) {
      const auto t = gs::tau(twins, p, d);
      const std::int64_t expect = d % p == 0 ? p - 2 : ((d + 1) % p == 0 || (d - 1) % p == 0) ? p - 3 : p - 4;
      ASSERT_EQ(t.open, expect) << p << " " << d;
    }
  }
}

TEST(Tau, MatchesJointSurvivalEnumeration) {
  for (const auto& c : kTuples) {
    for (const auto p : gs::primes_up_to(41)) {
      for (std::int64_t d = 0; d < p + 3; ++d) {
        ASSERT_EQ(gs::tau(c, p, d).tau, oracle::joint_survival(c.offsets(), p, d)) << c.to_string() << " " << p;
      }
    }
  }
}

TEST(Tau, BlockingPrimeThree) {
  for (const auto& c : {gs::Constellation::twins(), gs::Constellation::cousins()}) {
    for (std::int64_t d = 0; d < 300; ++d) {
      EXPECT_EQ(gs::tau(c, 3, d).tau == 0, d % 3 != 0) << d;
    }
  }
}

TEST(Identities, PeriodSumAndUniversalAverage) {
  for (const auto& c : kTuples) {
    for (const auto p : gs::odd_primes_up_to(199)) {
      const std::int64_t open = p - gs::omega(c, p);
      EXPECT_EQ(gs::period_tau_sum(c, p), gs::make_rational(open * open, p)) << p;
      EXPECT_EQ(gs::universal_average(c, p), 1) << c.to_string() << " " << p;
    }
  }
  EXPECT_THROW(gs::universal_average(gs::Constellation({0, 2, 4}), 3), std::domain_error);
}

TEST(Identities, CrtAverageExamples) {
  const auto twins = gs::Constellation::twins();
  EXPECT_EQ(gs::crt_average(twins, std::vector<std::int64_t>{3, 5}), gs::make_rational(1, 25));
  EXPECT_EQ(gs::crt_average(twins, std::vector<std::int64_t>{3}), gs::make_rational(1, 9));
  EXPECT_EQ(gs::crt_average(twins, std::vector<std::int64_t>{3, 5, 7}), gs::make_rational(1, 49));
}

TEST(Identities, CrtAverageEqualsSquaredSurvival) {
  for (const auto& c : kTuples) {
    for (const auto& s : subsets({3, 5, 7, 11})) {
      const auto mu = oracle::direct_product(c.offsets(), s);
      EXPECT_EQ(gs::crt_average(c, s), mu * mu);
      EXPECT_EQ(gs::survival_probability(c, s), mu);
    }
  }
}

TEST(MeanField, Examples) {
  const auto twins = gs::Constellation::twins();
  EXPECT_NEAR(gs::mean_field(twins, 7, 105), 15.0, 1e-12);
  EXPECT_NEAR(gs::mean_field(twins, 3, 9), 3.0, 1e-12);
  std::vector<std::int64_t> primes;
  for (std::int64_t n = 3; n <= 100; ++n) {
    if (oracle::is_prime(n)) {
      primes.push_back(n);
    }
  }
  const double expect = 4997.0 * gs::to_double(oracle::direct_product(twins.offsets(), primes));
  EXPECT_NEAR(gs::mean_field(twins, 100, 4997), expect, 1e-9);
  EXPECT_NEAR(gs::mean_field(twins, 100, 4997), 191.370, 5e-4);
}

TEST(OffDiagonal, ExactMatchesAnchorVariance) {
  // Var over all anchors = n mu (1 - mu) + off-diagonal sum.
  struct Case {
    gs::Constellation c;
    std::vector<std::int64_t> primes;
    std::int64_t n;
  };
  const std::vector<Case> cases = {
      {gs::Constellation::twins(), {3, 5, 7}, 60},
      {gs::Constellation::cousins(), {3, 5, 7}, 37},
      {gs::Constellation::sexy(), {3, 5, 7}, 50},
      {gs::Constellation({0, 2, 6}), {3, 5, 7, 11}, 90},
      {gs::Constellation::twins(), {3, 5, 7, 11}, 200},
  };
  for (const auto& k : cases) {
    const auto brute = oracle::anchor_moments(k.c.offsets(), k.primes, k.n);
    const auto mu = oracle::direct_product(k.c.offsets(), k.primes);
    EXPECT_EQ(brute.mean, mu * k.n);
    const gs::Rational diag = mu * (1 - mu) * k.n;
    EXPECT_EQ(gs::off_diagonal_exact(k.c, k.primes, k.n), brute.variance - diag) << k.c.to_string();
  }
}

TEST(OffDiagonal, SplitAgreesWithExact) {
  for (const auto& c : {gs::Constellation::twins(), gs::Constellation::cousins(), gs::Constellation({0, 2, 6})}) {
    for (const std::int64_t m0 : {7, 29, 61}) {
      const auto primes = gs::odd_primes_up_to(m0);
      for (const std::int64_t n : {1, 2, 3, 4, 100, 1001}) {
        const double exact = gs::to_double(gs::off_diagonal_exact(c, primes, n));
        const auto split = gs::off_diagonal_split(c, primes, n, 3);
        ASSERT_TRUE(split);
        EXPECT_NEAR(*split, exact, 1e-9 * std::max(1.0, std::fabs(exact))) << c.to_string() << " " << m0 << " " << n;
      }
    }
  }
  EXPECT_FALSE(gs::off_diagonal_split(gs::Constellation::sexy(), gs::odd_primes_up_to(29), 100));
}

TEST(OffDiagonal, NonMultipleWeight) {
  for (const std::int64_t n : {1, 2, 10, 57}) {
    for (const std::int64_t b : {1, 2, 3, 7}) {
      std::int64_t expect = 0;
      for (std::int64_t d = 1; d < n; ++d) {
        expect += d % b != 0 ? n - d : 0;
      }
      EXPECT_EQ(gs::non_multiple_weight(n, b), expect);
    }
  }
  for (const std::int64_t L : {1'000, 10'000, 100'000}) {
    const double w = gs::non_multiple_weight(L, 3).convert_to<double>();
    EXPECT_LE(std::fabs(w - static_cast<double>(L) * L / 3.0), 2.0 * L);
  }
}

TEST(VarianceDecomposition, DiagonalOnPositions) {
  const auto twins = gs::Constellation::twins();
  const double expect[] = {28.0, 62.5, 189.2, 559.4};
  const std::int64_t m0s[] = {30, 50, 100, 200};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto r = gs::variance_decomposition(gs::basis_up_to(m0s[i]), gs::Window::certification(7, m0s[i]), twins);
    EXPECT_NEAR(r.sigma_diag, expect[i], 0.1);
    ASSERT_TRUE(r.sigma_off_direct && r.sigma_off_split);
    EXPECT_NEAR(r.variance, r.sigma_diag + r.sigma_off, 1e-12);
    EXPECT_NEAR(r.paley_zygmund_bound, r.mu_N * r.mu_N / (r.variance + r.mu_N * r.mu_N), 1e-15);
    EXPECT_NEAR(r.dc_energy, r.mu_N * r.mu_N / static_cast<double>(r.positions), 1e-12);
    EXPECT_GE(r.chebyshev_desert_bound, 0.0);
    EXPECT_LE(r.chebyshev_desert_bound, 1.0);
  }
}

TEST(VarianceDecomposition, MeanSourceFlag) {
  const auto basis = gs::basis_up_to(30);
  const auto w = gs::Window::certification(7, 30);
  gs::MomentOptions options;
  options.mean_source = gs::MeanSource::mean_field;
  const auto r = gs::variance_decomposition(basis, w, gs::Constellation::twins(), options);
  EXPECT_EQ(r.observed_count, 30);
  EXPECT_DOUBLE_EQ(r.mu_N, r.mean_field);
  const double mu = gs::to_double(gs::survival_probability(gs::Constellation::twins(), basis.primes));
  EXPECT_NEAR(r.mean_field, 447.0 * mu, 1e-9);
}

TEST(Fano, Theoretical) {
  const double hand = 1.0 - 2.0 * (1.0 / 9 + 1.0 / 25 + 1.0 / 49) / (1.0 / 3 + 1.0 / 5 + 1.0 / 7);
  EXPECT_NEAR(gs::fano_theoretical(10), hand, 1e-15);
  EXPECT_NEAR(gs::fano_theoretical(10), 0.4927, 1e-4);
  EXPECT_NEAR(gs::fano_theoretical(100), 0.70, 0.02);
  EXPECT_NEAR(gs::fano_theoretical(5000), 0.79, 0.02);
}

TEST(Asymptotic, Definitions) {
  const auto a = gs::asymptotic_from_mean(100.0);
  EXPECT_DOUBLE_EQ(a.snr, 10.0);
  EXPECT_DOUBLE_EQ(a.cv, 0.1);
  const auto b = gs::asymptotic_from_mean(4.0);
  EXPECT_DOUBLE_EQ(b.snr, 2.0);
  EXPECT_DOUBLE_EQ(b.cv, 0.5);
  EXPECT_DOUBLE_EQ(gs::asymptotic_from_mean(9.0, 1.0).paley_zygmund, 0.9);
  const auto r = gs::asymptotic_report(100, gs::Constellation::twins());
  EXPECT_NEAR(r.mu_N, gs::mean_field(gs::Constellation::twins(), 100, 4997), 1e-9);
  EXPECT_NEAR(r.cv * r.snr, 1.0, 1e-15);
}

TEST(Bounds, Clamp) {
  EXPECT_DOUBLE_EQ(gs::chebyshev_desert_bound(1.0, 5.0), 1.0);
  EXPECT_DOUBLE_EQ(gs::chebyshev_desert_bound(10.0, 5.0), 0.05);
  EXPECT_DOUBLE_EQ(gs::paley_zygmund_bound(3.0, 1.0), 0.9);
}
