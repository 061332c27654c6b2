#include "gearsieve/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cyclic_product.hpp"
#include "gearsieve/errors.hpp"
#include "gearsieve/primes.hpp"
#include "gearsieve/summation.hpp"
#include "parallel.hpp"

namespace gearsieve {

namespace {

constexpr std::size_t kSumPartitions = 16;

std::int64_t mod(std::int64_t a, std::int64_t p) {
  const std::int64_t r = a % p;
  return r < 0 ? r + p : r;
}

void require_prime(std::int64_t p) {
  if (p < 2 || p > (std::int64_t{1} << 20) || !is_small_prime(p)) {
    throw std::domain_error("expected a prime <= 2^20, got " + std::to_string(p));
  }
}

// |F_p(d)| with F = {-h} U {-h - 2d} mod p, using a stamp buffer.
std::int64_t forbidden_size(const Constellation& c, std::int64_t p, std::int64_t d, std::vector<std::int64_t>& stamp,
                            std::int64_t tag) {
  std::int64_t size = 0;
  const std::int64_t shift = mod(2 * mod(d, p), p);
  for (const std::int64_t h : c.offsets()) {
    for (const std::int64_t x : {mod(-h, p), mod(-h - shift, p)}) {
      if (stamp[static_cast<std::size_t>(x)] != tag) {
        stamp[static_cast<std::size_t>(x)] = tag;
        ++size;
      }
    }
  }
  return size;
}

std::vector<double> tau_table(const Constellation& c, std::int64_t p) {
  const auto open = open_residue_table(c, p);
  std::vector<double> out(open.size());
  std::transform(open.begin(), open.end(), out.begin(),
                 [p](std::int64_t v) { return static_cast<double>(v) / static_cast<double>(p); });
  return out;
}

double log_survival(const Constellation& c, std::span<const std::int64_t> primes) {
  CompensatedSum sum;
  for (const std::int64_t p : primes) {
    sum.add(std::log1p(-static_cast<double>(omega(c, p)) / static_cast<double>(p)));
  }
  return sum.value();
}

bool close_relative(double a, double b, double tol) {
  const double scale = std::max({std::fabs(a), std::fabs(b), std::numeric_limits<double>::min()});
  return std::fabs(a - b) <= tol * scale;
}

}  // namespace

std::string_view to_string(CorrelationCase c) noexcept {
  switch (c) {
    case CorrelationCase::C:
      return "C";
    case CorrelationCase::B:
      return "B";
    case CorrelationCase::A:
      return "A";
    case CorrelationCase::blocked:
      return "blocked";
  }
  return "?";
}

LocalSurvival tau(const Constellation& c, std::int64_t p, std::int64_t d) {
  require_prime(p);
  if (d < 0) {
    throw std::domain_error("tau: distance must be >= 0");
  }
  std::vector<std::int64_t> stamp(static_cast<std::size_t>(p), -1);
  LocalSurvival out;
  out.p = p;
  out.d = d;
  out.open = p - forbidden_size(c, p, d, stamp, 0);
  out.tau = make_rational(out.open, p);
  if (out.open == 0) {
    out.label = CorrelationCase::blocked;
  } else if (d % p == 0) {
    out.label = CorrelationCase::C;
  } else if ((d - 1) % p == 0 || (d + 1) % p == 0) {
    out.label = CorrelationCase::B;
  } else {
    out.label = CorrelationCase::A;
  }
  return out;
}

std::vector<std::int64_t> open_residue_table(const Constellation& c, std::int64_t p) {
  require_prime(p);
  std::vector<std::int64_t> stamp(static_cast<std::size_t>(p), -1);
  std::vector<std::int64_t> out(static_cast<std::size_t>(p));
  for (std::int64_t d = 0; d < p; ++d) {
    out[static_cast<std::size_t>(d)] = p - forbidden_size(c, p, d, stamp, d);
  }
  return out;
}

Rational period_tau_sum(const Constellation& c, std::int64_t p) {
  const auto open = open_residue_table(c, p);
  std::int64_t total = 0;
  for (const std::int64_t v : open) {
    total += v;
  }
  return make_rational(total, p);
}

Rational universal_average(const Constellation& c, std::int64_t p) {
  const std::int64_t w = omega(c, p);
  if (w >= p) {
    throw std::domain_error("universal_average: omega(" + std::to_string(p) + ") == p");
  }
  // (1/p) sum tau / mu^2 = sum(open) / (p - omega)^2
  const Rational sum = period_tau_sum(c, p) * p;
  return sum / Rational(BigInt((p - w) * (p - w)));
}

Rational crt_average(const Constellation& c, std::span<const std::int64_t> primes) {
  std::int64_t q = 1;
  for (const std::int64_t p : primes) {
    q *= p;
    if (q > 1'000'000) {
      throw std::domain_error("crt_average: modulus exceeds 1e6");
    }
  }
  std::vector<std::vector<std::int64_t>> open;
  for (const std::int64_t p : primes) {
    open.push_back(open_residue_table(c, p));
  }
  std::vector<std::int64_t> index(primes.size(), 0);
  BigInt total = 0;
  for (std::int64_t d = 0; d < q; ++d) {
    std::int64_t product = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      product *= open[i][static_cast<std::size_t>(index[i])];
      if (++index[i] == primes[i]) {
        index[i] = 0;
      }
    }
    total += product;
  }
  return Rational(total, BigInt(q) * q);
}

double mean_field(const Constellation& c, std::int64_t m0, std::int64_t positions) {
  return static_cast<double>(positions) * density_product(c, m0).partial_product;
}

Rational survival_probability(const Constellation& c, std::span<const std::int64_t> primes) {
  BigInt num = 1;
  BigInt den = 1;
  for (const std::int64_t p : primes) {
    num *= p - omega(c, p);
    den *= p;
  }
  return Rational(num, den);
}

Rational off_diagonal_exact(const Constellation& c, std::span<const std::int64_t> primes, std::int64_t n) {
  if (n < 1) {
    throw std::domain_error("off_diagonal_exact: n must be >= 1");
  }
  std::vector<std::vector<std::int64_t>> open;
  BigInt q = 1;
  BigInt surviving = 1;
  for (const std::int64_t p : primes) {
    open.push_back(open_residue_table(c, p));
    q *= p;
    surviving *= p - omega(c, p);
  }
  std::vector<std::int64_t> index(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    index[i] = 1 % primes[i];
  }
  // weighted = sum_d (n - d) prod_p open_p(d)
  BigInt weighted = 0;
  for (std::int64_t d = 1; d < n; ++d) {
    BigInt product = 1;
    std::uint64_t chunk = 1;
    bool zero = false;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const auto v = static_cast<std::uint64_t>(open[i][static_cast<std::size_t>(index[i])]);
      if (++index[i] == primes[i]) {
        index[i] = 0;
      }
      if (zero) {
        continue;
      }
      if (v == 0) {
        zero = true;
        continue;
      }
      if (chunk > (std::uint64_t{1} << 40)) {
        product *= chunk;
        chunk = 1;
      }
      chunk *= v;
    }
    if (!zero) {
      product *= chunk;
      weighted += product * (n - d);
    }
  }
  const BigInt pairs = BigInt(n) * (n - 1) / 2;
  // 2 sum (n-d) (P/Q - C^2/Q^2) = 2 (Q weighted - C^2 pairs) / Q^2
  return Rational(2 * (q * weighted - surviving * surviving * pairs), q * q);
}

BigInt non_multiple_weight(std::int64_t n, std::int64_t b) {
  if (n < 1 || b < 1) {
    throw std::domain_error("non_multiple_weight: n and b must be >= 1");
  }
  const std::int64_t k = (n - 1) / b;
  const BigInt all = BigInt(n) * (n - 1) / 2;
  const BigInt multiples = BigInt(n) * k - BigInt(b) * k * (k + 1) / 2;
  return all - multiples;
}

std::optional<double> off_diagonal_split(const Constellation& c, std::span<const std::int64_t> primes, std::int64_t n,
                                         unsigned workers) {
  if (n < 1) {
    throw std::domain_error("off_diagonal_split: n must be >= 1");
  }
  const std::int64_t pb = smallest_blocking_prime(c);
  if (pb == 0 || std::find(primes.begin(), primes.end(), pb) == primes.end()) {
    return std::nullopt;
  }
  const double mu = std::exp(log_survival(c, primes));
  const double mu2 = mu * mu;
  const double tau_pb0 = static_cast<double>(pb - omega(c, pb)) / static_cast<double>(pb);

  std::vector<detail::CyclicFactor> factors;
  for (const std::int64_t p : primes) {
    if (p != pb) {
      factors.push_back(detail::CyclicFactor{p, pb % p, tau_table(c, p)});
    }
  }

  const std::int64_t k = (n - 1) / pb;
  const auto parts = detail::partition(k, kSumPartitions);
  std::vector<CompensatedSum> partial(parts.size());
  detail::run_indexed(parts.size(), workers, [&](std::size_t i) {
    // d' in [begin + 1, end + 1)
    detail::cyclic_products(factors, parts[i].begin + 1, parts[i].end + 1, [&](std::int64_t dp, double h) {
      partial[i].add(static_cast<double>(n - pb * dp) * (tau_pb0 * h - mu2));
    });
  });
  CompensatedSum total;
  for (const auto& part : partial) {
    total.merge(part);
  }
  const double blocked = -mu2 * non_multiple_weight(n, pb).convert_to<double>();
  return 2.0 * (blocked + total.value());
}

MomentReport variance_decomposition(const SieveBasis& basis, const Window& window, const Constellation& c,
                                    MomentOptions options) {
  MomentReport out;
  out.m0 = basis.m0;
  out.L = window.length();
  out.positions = window.positions();
  out.observed_count =
      scan_window(basis, window, c, ScanOptions{std::max<std::size_t>(options.workers, 1), options.workers, false})
          .certified;
  out.mean_field = static_cast<double>(out.positions) * std::exp(log_survival(c, basis.primes));
  out.mu_N = options.mean_source == MeanSource::observed ? static_cast<double>(out.observed_count) : out.mean_field;
  out.sigma_diag = out.mu_N * (1.0 - out.mu_N / static_cast<double>(out.positions));

  out.sigma_off_split = off_diagonal_split(c, basis.primes, out.positions, options.workers);
  if (out.positions <= options.direct_limit || !out.sigma_off_split) {
    out.sigma_off_direct = to_double(off_diagonal_exact(c, basis.primes, out.positions));
  }
  if (out.sigma_off_split && out.sigma_off_direct && !close_relative(*out.sigma_off_split, *out.sigma_off_direct, 1e-9)) {
    throw InvariantError("off-diagonal routes disagree: split " + std::to_string(*out.sigma_off_split) + " vs exact " +
                         std::to_string(*out.sigma_off_direct));
  }
  out.sigma_off = out.sigma_off_direct ? *out.sigma_off_direct : *out.sigma_off_split;

  out.variance = out.sigma_diag + out.sigma_off;
  const double mu = out.mu_N;
  out.fano = mu > 0 ? out.variance / mu : 0.0;
  out.snr = out.variance > 0 ? mu / std::sqrt(out.variance) : 0.0;
  out.cv = out.snr > 0 ? 1.0 / out.snr : 0.0;
  out.chebyshev_desert_bound = chebyshev_desert_bound(mu, out.variance);
  out.paley_zygmund_bound = paley_zygmund_bound(mu, out.variance);
  out.dc_energy = mu * mu / static_cast<double>(out.positions);
  return out;
}

double fano_theoretical(std::int64_t m0) {
  if (m0 < 3) {
    throw std::domain_error("fano_theoretical: m0 must be >= 3");
  }
  CompensatedSum inv;
  CompensatedSum inv_sq;
  for (const std::int64_t p : odd_primes_up_to(m0)) {
    const auto pd = static_cast<double>(p);
    inv.add(1.0 / pd);
    inv_sq.add(1.0 / (pd * pd));
  }
  return 1.0 - 2.0 * inv_sq.value() / inv.value();
}

double chebyshev_desert_bound(double mu, double variance) noexcept {
  if (mu <= 0) {
    return 1.0;
  }
  return std::clamp(variance / (mu * mu), 0.0, 1.0);
}

double paley_zygmund_bound(double mu, double variance) noexcept {
  const double second = variance + mu * mu;
  return second > 0 ? mu * mu / second : 0.0;
}

AsymptoticReport asymptotic_from_mean(double mu_N, double variance_constant) {
  if (mu_N <= 0 || variance_constant <= 0) {
    throw std::domain_error("asymptotic_from_mean: mu_N and C must be positive");
  }
  AsymptoticReport out;
  out.mu_N = mu_N;
  out.snr = mu_N / std::sqrt(variance_constant * mu_N);
  out.cv = 1.0 / out.snr;
  out.paley_zygmund = mu_N / (variance_constant + mu_N);
  return out;
}

AsymptoticReport asymptotic_report(std::int64_t m0, const Constellation& c, double variance_constant) {
  if (m0 < 3) {
    throw std::domain_error("asymptotic_report: m0 must be >= 3");
  }
  const Window window = Window::span(7, m0 * m0);
  return asymptotic_from_mean(mean_field(c, m0, window.positions()), variance_constant);
}

}  // namespace gearsieve
