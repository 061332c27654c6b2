#include "gearsieve/constellation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gearsieve/primes.hpp"
#include "gearsieve/summation.hpp"

namespace gearsieve {

Constellation::Constellation(std::vector<std::int64_t> offsets) : offsets_(std::move(offsets)) {
  if (offsets_.empty() || offsets_.front() != 0) {
    throw std::invalid_argument("constellation offsets must start at 0");
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) {
    if (offsets_[i] <= offsets_[i - 1]) {
      throw std::invalid_argument("constellation offsets must be strictly increasing: " + to_string());
    }
  }
}

Constellation Constellation::parse(std::string_view text) {
  std::vector<std::int64_t> offsets;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw std::invalid_argument("bad constellation offset '" + std::string(item) + "'");
    }
    offsets.push_back(value);
    if (comma == std::string_view::npos) {
      break;
    }
    text.remove_prefix(comma + 1);
  }
  return Constellation(std::move(offsets));
}

std::string Constellation::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < offsets_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(offsets_[i]);
  }
  return out;
}

std::int64_t omega(const Constellation& c, std::int64_t p) {
  std::vector<std::int64_t> residues;
  residues.reserve(c.size());
  for (const std::int64_t h : c.offsets()) {
    residues.push_back(h % p);
  }
  std::sort(residues.begin(), residues.end());
  return std::unique(residues.begin(), residues.end()) - residues.begin();
}

std::int64_t nu(const Constellation& c, std::int64_t q) { return q - omega(c, q); }

AdmissibilityReport is_admissible(const Constellation& c) {
  AdmissibilityReport report{c, {}, true, {}};
  const auto k = static_cast<std::int64_t>(c.size());
  const std::int64_t scan = std::max(c.max_offset() + 2, k);
  for (const std::int64_t p : primes_up_to(scan)) {
    const std::int64_t w = omega(c, p);
    report.per_prime.emplace(p, w);
    if (p <= k && w >= p) {
      report.admissible = false;
    }
    if (p > 2 && w == p - 1) {
      report.blocking_primes.push_back(p);
    }
  }
  return report;
}

std::int64_t smallest_blocking_prime(const Constellation& c) {
  for (const std::int64_t p : odd_primes_up_to(c.max_offset() + 2)) {
    if (omega(c, p) == p - 1) {
      return p;
    }
  }
  return 0;
}

DensityConstants density_product(const Constellation& c, std::int64_t m0) {
  if (m0 < 3) {
    throw std::domain_error("density_product: m0 must be >= 3");
  }
  if (!is_admissible(c).admissible) {
    throw std::domain_error("density_product: inadmissible constellation " + c.to_string());
  }
  const auto k = static_cast<double>(c.size());
  CompensatedSum log_partial;
  CompensatedSum log_singular;
  for (const std::int64_t q : odd_primes_up_to(m0)) {
    const auto qd = static_cast<double>(q);
    const double open = std::log1p(-static_cast<double>(omega(c, q)) / qd);
    log_partial.add(open);
    // nu q^(k-1) / (q-1)^k = (1 - omega/q) (1 - 1/q)^(-k)
    log_singular.add(open - k * std::log1p(-1.0 / qd));
  }
  DensityConstants out;
  out.m0 = m0;
  out.log_partial_product = log_partial.value();
  out.partial_product = std::exp(out.log_partial_product);
  out.singular_constant = std::exp(log_singular.value());
  return out;
}

std::int64_t goldbach_omega(std::int64_t even, std::int64_t p) {
  if (even % 2 != 0 || even <= 4) {
    throw std::invalid_argument("goldbach_omega: E must be even and > 4, got " + std::to_string(even));
  }
  return even % p == 0 ? 1 : 2;
}

double goldbach_oscillating_factor(std::int64_t even, std::int64_t m0) {
  if (even % 2 != 0 || even <= 4) {
    throw std::invalid_argument("goldbach_oscillating_factor: E must be even and > 4");
  }
  double factor = 1.0;
  for (const std::int64_t q : odd_primes_up_to(m0)) {
    if (even % q == 0) {
      factor *= static_cast<double>(q - 1) / static_cast<double>(q - 2);
    }
  }
  return factor;
}

}  // namespace gearsieve
