#include "gearsieve/fourier.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cyclic_product.hpp"
#include "gearsieve/correlation.hpp"
#include "gearsieve/primes.hpp"
#include "gearsieve/summation.hpp"
#include "parallel.hpp"

namespace gearsieve {

namespace {

constexpr std::size_t kSumPartitions = 16;

void require_prime_at_least_5(std::int64_t p) {
  if (p < 5 || p > (std::int64_t{1} << 20) || !is_small_prime(p)) {
    throw std::domain_error("expected a prime >= 5, got " + std::to_string(p));
  }
}

std::vector<double> twin_tau(std::int64_t p) {
  const auto open = open_residue_table(Constellation::twins(), p);
  std::vector<double> out;
  out.reserve(open.size());
  for (const std::int64_t v : open) {
    out.push_back(static_cast<double>(v) / static_cast<double>(p));
  }
  return out;
}

double closed_coefficient(std::int64_t p, std::int64_t k) {
  const auto pd = static_cast<double>(p);
  if (k % p == 0) {
    return (pd - 2) * (pd - 2) / (pd * pd);
  }
  const double c = std::cos(std::numbers::pi * static_cast<double>(k) / pd);
  return 4.0 * c * c / (pd * pd);
}

}  // namespace

std::vector<FourierRow> tau_fourier(std::int64_t p) {
  require_prime_at_least_5(p);
  const auto tau = twin_tau(p);
  const auto pd = static_cast<double>(p);
  std::vector<FourierRow> rows;
  rows.reserve(static_cast<std::size_t>(p));
  for (std::int64_t k = 0; k < p; ++k) {
    CompensatedSum re;
    CompensatedSum im;
    for (std::int64_t d = 0; d < p; ++d) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * d) % p) / pd;
      re.add(tau[static_cast<std::size_t>(d)] * std::cos(angle));
      im.add(tau[static_cast<std::size_t>(d)] * std::sin(angle));
    }
    rows.push_back(FourierRow{p, k, closed_coefficient(p, k), {re.value() / pd, im.value() / pd}});
  }
  return rows;
}

VarianceStats variance_stats(std::int64_t p) {
  require_prime_at_least_5(p);
  const auto pd = static_cast<double>(p);
  VarianceStats out;
  out.var_closed = 2.0 * (3.0 * pd - 8.0) / (pd * pd * pd * pd);
  CompensatedSum parseval;
  for (std::int64_t k = 1; k < p; ++k) {
    const double c = closed_coefficient(p, k);
    parseval.add(c * c);
  }
  out.var_parseval = parseval.value();
  const auto tau = twin_tau(p);
  CompensatedSum mean;
  for (const double t : tau) {
    mean.add(t);
  }
  const double m = mean.value() / pd;
  CompensatedSum direct;
  for (const double t : tau) {
    direct.add((t - m) * (t - m));
  }
  out.var_direct = direct.value() / pd;
  const double q = pd - 2.0;
  out.ratio = 1.0 + 2.0 * (3.0 * pd - 8.0) / (q * q * q * q);
  return out;
}

double product_variance_constant(std::int64_t pmax) {
  if (pmax < 5) {
    throw std::domain_error("product_variance_constant: pmax must be >= 5");
  }
  CompensatedSum log_product;
  for (const std::int64_t p : primes_in(5, pmax)) {
    const auto pd = static_cast<double>(p);
    const double q = pd - 2.0;
    log_product.add(std::log1p(2.0 * (3.0 * pd - 8.0) / (q * q * q * q)));
  }
  return std::expm1(log_product.value());
}

std::string_view to_string(HConvention c) noexcept {
  return c == HConvention::appendix_c ? "appendix_c" : "section4";
}

HConvention parse_h_convention(std::string_view text) {
  if (text == "appendix_c") {
    return HConvention::appendix_c;
  }
  if (text == "section4") {
    return HConvention::section4;
  }
  throw std::invalid_argument("unknown h convention: " + std::string(text));
}

EquidistReport weighted_ergodic_sum(std::int64_t m0, HConvention convention, unsigned workers) {
  if (m0 < 11 || m0 > 1'000'000) {
    throw std::domain_error("weighted_ergodic_sum: m0 must be in [11, 1e6], got " + std::to_string(m0));
  }
  EquidistReport out;
  out.m0 = m0;
  out.L = m0 * m0;
  out.N = out.L / 3;
  out.convention = convention;

  const std::int64_t step = convention == HConvention::appendix_c ? 1 : 3;
  std::vector<detail::CyclicFactor> factors;
  CompensatedSum log_mean;
  for (const std::int64_t p : primes_in(5, m0)) {
    factors.push_back(detail::CyclicFactor{p, step % p, twin_tau(p)});
    const auto pd = static_cast<double>(p);
    log_mean.add(2.0 * std::log1p(-2.0 / pd));
  }

  const auto parts = detail::partition(out.N, kSumPartitions);
  std::vector<CompensatedSum> partial(parts.size());
  const auto L = static_cast<double>(out.L);
  detail::run_indexed(parts.size(), workers, [&](std::size_t i) {
    detail::cyclic_products(factors, parts[i].begin + 1, parts[i].end + 1, [&](std::int64_t d, double h) {
      partial[i].add((L - 3.0 * static_cast<double>(d)) * h);
    });
  });
  CompensatedSum total;
  for (const auto& part : partial) {
    total.merge(part);
  }
  out.weighted_sum = total.value();
  out.theory = std::exp(log_mean.value()) * L * L / 6.0;
  out.rel_error_pct = 100.0 * std::fabs(out.weighted_sum - out.theory) / out.theory;
  return out;
}

DecayFit fit_decay_exponent(std::span<const double> m0s, std::span<const double> errors) {
  if (m0s.size() != errors.size()) {
    throw std::invalid_argument("fit_decay_exponent: size mismatch");
  }
  if (m0s.size() < 3) {
    throw std::invalid_argument("fit_decay_exponent: need at least 3 points");
  }
  const auto n = static_cast<double>(m0s.size());
  double sx = 0;
  double sy = 0;
  for (std::size_t i = 0; i < m0s.size(); ++i) {
    if (!(m0s[i] > 0) || !(errors[i] > 0)) {
      throw std::invalid_argument("fit_decay_exponent: values must be positive");
    }
    sx += std::log(m0s[i]);
    sy += std::log(errors[i]);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0;
  double sxy = 0;
  for (std::size_t i = 0; i < m0s.size(); ++i) {
    const double dx = std::log(m0s[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(errors[i]) - my);
  }
  if (sxx <= 0) {
    throw std::invalid_argument("fit_decay_exponent: m0 values are degenerate");
  }
  const double slope = sxy / sxx;
  return DecayFit{-slope, my - slope * mx};
}

DecayFit fit_decay_exponent(std::span<const std::int64_t> m0_list, HConvention convention, unsigned workers) {
  std::vector<double> m0s;
  std::vector<double> errors;
  for (const std::int64_t m0 : m0_list) {
    m0s.push_back(static_cast<double>(m0));
    errors.push_back(weighted_ergodic_sum(m0, convention, workers).rel_error_pct);
  }
  return fit_decay_exponent(m0s, errors);
}

std::complex<double> weighted_exp_sum(double theta, std::int64_t L) {
  if (L < 3) {
    throw std::domain_error("weighted_exp_sum: L must be >= 3");
  }
  const std::int64_t n = L / 3;
  CompensatedSum re;
  CompensatedSum im;
  for (std::int64_t d = 1; d <= n; ++d) {
    const double phase = 2.0 * std::numbers::pi * std::fmod(static_cast<double>(d) * theta, 1.0);
    const auto w = static_cast<double>(L - 3 * d);
    re.add(w * std::cos(phase));
    im.add(w * std::sin(phase));
  }
  return {re.value(), im.value()};
}

double nearest_integer_distance(double theta) noexcept { return std::fabs(theta - std::round(theta)); }

double weighted_exp_sum_bound(double theta, std::int64_t L) noexcept {
  const double dist = nearest_integer_distance(theta);
  if (dist == 0) {
    return std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(L) / (2.0 * dist);
}

TwoPrimeReport two_prime_checks(std::int64_t p, std::int64_t q) {
  if (p >= q || p < 2 || !is_small_prime(p) || q > (std::int64_t{1} << 20) || !is_small_prime(q)) {
    throw std::domain_error("two_prime_checks: need primes p < q");
  }
  const std::int64_t pq = p * q;
  if (pq > 10'000'000) {
    throw std::domain_error("two_prime_checks: pq exceeds 1e7");
  }
  std::vector<bool> seen(static_cast<std::size_t>(pq), false);
  TwoPrimeReport out;
  out.injective = true;
  CompensatedSum freq;
  for (std::int64_t j = 1; j < p; ++j) {
    for (std::int64_t k = 1; k < q; ++k) {
      const std::int64_t v = (j * q + k * p) % pq;
      if (seen[static_cast<std::size_t>(v)]) {
        out.injective = false;
      }
      seen[static_cast<std::size_t>(v)] = true;
      // ||j/p + k/q|| = min(v, pq - v) / pq
      const std::int64_t dist = std::min(v, pq - v);
      freq.add(dist == 0 ? std::numeric_limits<double>::infinity()
                         : static_cast<double>(pq) / static_cast<double>(dist));
    }
  }
  out.freq_sum = freq.value();
  CompensatedSum full;
  for (std::int64_t m = 1; m < pq; ++m) {
    full.add(static_cast<double>(pq) / static_cast<double>(std::min(m, pq - m)));
  }
  out.full_sum_bound = full.value();
  return out;
}

}  // namespace gearsieve
