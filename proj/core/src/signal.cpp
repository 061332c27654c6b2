#include "gearsieve/signal.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gearsieve/diophantine.hpp"
#include "gearsieve/primes.hpp"
#include "parallel.hpp"

namespace gearsieve {

namespace {

constexpr std::int64_t kChunk = std::int64_t{1} << 15;
constexpr std::int64_t kMaxOracleEnd = 1'000'000'000;

// One (prime, offset) stride: p | N_r + h exactly when r == residue (mod p).
struct Stride {
  std::int64_t p;
  std::int64_t residue;
};

std::vector<Stride> make_strides(const SieveBasis& basis, const Window& window, const Constellation& c) {
  std::vector<Stride> strides;
  strides.reserve(basis.primes.size() * c.size());
  for (const std::int64_t p : basis.primes) {
    const std::int64_t half = (p + 1) / 2;  // inverse of 2 mod p
    for (const std::int64_t h : c.offsets()) {
      const std::int64_t target = ((-(window.anchor() + h)) % p + p) % p;
      strides.push_back(Stride{p, static_cast<std::int64_t>((static_cast<__int128>(target) * half) % p)});
    }
  }
  return strides;
}

// S_C for positions [r_begin, r_begin + out.size()), saturating at 255.
void evaluate_chunk(std::span<const Stride> strides, std::int64_t r_begin, std::span<std::uint8_t> out) {
  std::fill(out.begin(), out.end(), std::uint8_t{0});
  const auto len = static_cast<std::int64_t>(out.size());
  std::uint8_t* values = out.data();
  for (const Stride& s : strides) {
    std::int64_t i = (s.residue - r_begin) % s.p;
    if (i < 0) {
      i += s.p;
    }
    for (; i < len; i += s.p) {
      values[i] = static_cast<std::uint8_t>(values[i] + (values[i] != 0xFF));
    }
  }
}

void require_admissible(const Constellation& c) {
  if (!is_admissible(c).admissible) {
    throw std::domain_error("inadmissible constellation " + c.to_string());
  }
}

}  // namespace

SieveBasis build_basis(std::int64_t m0) {
  if (m0 < 3 || m0 % 2 == 0) {
    throw std::domain_error("build_basis: m0 must be odd and >= 3, got " + std::to_string(m0));
  }
  return SieveBasis{m0, odd_primes_up_to(m0)};
}

SieveBasis basis_up_to(std::int64_t bound) {
  if (bound < 3) {
    throw std::domain_error("basis_up_to: bound must be >= 3, got " + std::to_string(bound));
  }
  return SieveBasis{bound, odd_primes_up_to(bound)};
}

Window Window::certification(std::int64_t anchor, std::int64_t m0) {
  if (m0 < 3 || m0 > 3'037'000'499) {
    throw std::domain_error("window: m0 out of range: " + std::to_string(m0));
  }
  const std::int64_t end = m0 * m0;
  if (anchor < 5 || anchor % 2 == 0 || anchor % 3 == 0) {
    throw std::domain_error("window: anchor must be >= 5 and coprime to 6, got " + std::to_string(anchor));
  }
  if (anchor >= end) {
    throw std::domain_error("window: anchor " + std::to_string(anchor) + " not below m0^2 = " + std::to_string(end));
  }
  return Window(anchor, end);
}

Window Window::span(std::int64_t anchor, std::int64_t end) {
  if (anchor < 1 || anchor % 2 == 0) {
    throw std::domain_error("window: anchor must be odd and positive, got " + std::to_string(anchor));
  }
  if (end <= anchor) {
    throw std::domain_error("window: empty range");
  }
  return Window(anchor, end);
}

std::int64_t Window::certifiable_positions(const Constellation& c) const noexcept {
  const std::int64_t slack = end_ - 1 - anchor_ - c.max_offset();
  if (slack < 0) {
    return 0;
  }
  return std::min(positions(), slack / 2 + 1);
}

bool SignalTrace::survives(std::int64_t r) const noexcept {
  if (const auto* counters = std::get_if<Counters>(&values)) {
    return (*counters)[static_cast<std::size_t>(r)] == 0;
  }
  const auto& mask = std::get<SurvivorMask>(values);
  return (mask[static_cast<std::size_t>(r / 64)] >> (r % 64)) & 1U;
}

SignalTrace composite_signal(const SieveBasis& basis, const Window& window, const Constellation& c,
                             EvalOptions options, TraceMode mode) {
  require_admissible(c);
  const auto strides = make_strides(basis, window, c);
  const std::int64_t n = window.positions();
  const auto parts = detail::partition(n, options.segments, 64);

  SignalTrace trace{window, c, {}};
  if (mode == TraceMode::counters) {
    SignalTrace::Counters values(static_cast<std::size_t>(n));
    detail::run_indexed(parts.size(), options.workers, [&](std::size_t i) {
      for (std::int64_t r = parts[i].begin; r < parts[i].end; r += kChunk) {
        const std::int64_t len = std::min(kChunk, parts[i].end - r);
        evaluate_chunk(strides, r, std::span(values).subspan(static_cast<std::size_t>(r), static_cast<std::size_t>(len)));
      }
    });
    trace.values = std::move(values);
  } else {
    SignalTrace::SurvivorMask mask(static_cast<std::size_t>((n + 63) / 64), 0);
    detail::run_indexed(parts.size(), options.workers, [&](std::size_t i) {
      std::vector<std::uint8_t> buffer(static_cast<std::size_t>(kChunk));
      for (std::int64_t r = parts[i].begin; r < parts[i].end; r += kChunk) {
        const std::int64_t len = std::min(kChunk, parts[i].end - r);
        auto chunk = std::span(buffer).first(static_cast<std::size_t>(len));
        evaluate_chunk(strides, r, chunk);
        for (std::int64_t j = 0; j < len; ++j) {
          if (chunk[j] == 0) {
            const std::int64_t pos = r + j;
            mask[static_cast<std::size_t>(pos / 64)] |= std::uint64_t{1} << (pos % 64);
          }
        }
      }
    });
    trace.values = std::move(mask);
  }
  return trace;
}

CertifiedResult certify(const SignalTrace& trace, bool materialize) {
  CertifiedResult result;
  if (materialize) {
    result.survivors.emplace();
  }
  const std::int64_t limit = trace.window.certifiable_positions(trace.constellation);
  for (std::int64_t r = 0; r < limit; ++r) {
    if (trace.survives(r)) {
      ++result.count;
      if (materialize) {
        result.survivors->push_back(trace.window.candidate(r));
      }
    }
  }
  return result;
}

double ScanSummary::mean() const noexcept {
  return positions ? static_cast<double>(signal_sum) / static_cast<double>(positions) : 0.0;
}

double ScanSummary::variance() const noexcept {
  if (!positions) {
    return 0.0;
  }
  // Exact integer numerator: n * sum(x^2) - (sum x)^2.
  const auto n = static_cast<unsigned __int128>(positions);
  const auto s = static_cast<unsigned __int128>(signal_sum);
  const unsigned __int128 num = n * static_cast<unsigned __int128>(signal_sum_sq) - s * s;
  return static_cast<double>(num) / (static_cast<double>(positions) * static_cast<double>(positions));
}

ScanSummary scan_window(const SieveBasis& basis, const Window& window, const Constellation& c, ScanOptions options) {
  require_admissible(c);
  const auto strides = make_strides(basis, window, c);
  const std::int64_t n = window.positions();
  const std::int64_t certifiable = window.certifiable_positions(c);
  const auto parts = detail::partition(n, options.segments, 64);

  std::vector<ScanSummary> partials(parts.size());
  detail::run_indexed(parts.size(), options.workers, [&](std::size_t i) {
    ScanSummary& out = partials[i];
    if (options.collect_survivors) {
      out.survivors.emplace();
    }
    std::vector<std::uint8_t> buffer(static_cast<std::size_t>(kChunk));
    for (std::int64_t r = parts[i].begin; r < parts[i].end; r += kChunk) {
      const std::int64_t len = std::min(kChunk, parts[i].end - r);
      auto chunk = std::span(buffer).first(static_cast<std::size_t>(len));
      evaluate_chunk(strides, r, chunk);
      std::uint64_t sum = 0;
      std::uint64_t sum_sq = 0;
      for (const std::uint8_t v : chunk) {
        sum += v;
        sum_sq += static_cast<std::uint64_t>(v) * v;
      }
      out.signal_sum += sum;
      out.signal_sum_sq += sum_sq;
      const std::int64_t cert_end = std::clamp(certifiable - r, std::int64_t{0}, len);
      for (std::int64_t j = 0; j < cert_end; ++j) {
        if (chunk[j] == 0) {
          ++out.certified;
          if (options.collect_survivors) {
            out.survivors->push_back(window.candidate(r + j));
          }
        }
      }
    }
  });

  ScanSummary total;
  total.positions = n;
  total.certifiable = certifiable;
  if (options.collect_survivors) {
    total.survivors.emplace();
  }
  for (auto& part : partials) {
    total.certified += part.certified;
    total.signal_sum += part.signal_sum;
    total.signal_sum_sq += part.signal_sum_sq;
    if (options.collect_survivors) {
      total.survivors->insert(total.survivors->end(), part.survivors->begin(), part.survivors->end());
    }
  }
  return total;
}

CertifiedResult goldbach_count(std::int64_t even, bool materialize) {
  if (even % 2 != 0 || even < 8) {
    throw std::invalid_argument("goldbach_count: E must be even and >= 8, got " + std::to_string(even));
  }
  std::int64_t m0 = isqrt(even);
  if (m0 * m0 < even) {
    ++m0;
  }
  if (m0 % 2 == 0) {
    ++m0;
  }
  const SieveBasis basis = build_basis(m0);

  // hit[i] marks n = 3 + 2i divisible by some basis prime, for n in [3, E-3].
  const std::int64_t count = (even - 6) / 2 + 1;
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(count), 0);
  for (const std::int64_t p : basis.primes) {
    // smallest odd multiple of p that is >= 3 is p itself
    for (std::int64_t v = p; v <= even - 3; v += 2 * p) {
      hit[static_cast<std::size_t>((v - 3) / 2)] = 1;
    }
  }
  auto is_prime = [&](std::int64_t v) {
    if (!hit[static_cast<std::size_t>((v - 3) / 2)]) {
      return true;
    }
    // members <= m0 are divisible by themselves when prime
    return v <= m0 && std::binary_search(basis.primes.begin(), basis.primes.end(), v);
  };

  CertifiedResult result;
  if (materialize) {
    result.survivors.emplace();
  }
  for (std::int64_t v = 3; v <= even / 2; v += 2) {
    if (is_prime(v) && is_prime(even - v)) {
      ++result.count;
      if (materialize) {
        result.survivors->push_back(v);
      }
    }
  }
  return result;
}

std::int64_t classical_oracle_count(const Window& window, const Constellation& c) {
  if (window.end() > kMaxOracleEnd) {
    throw std::domain_error("classical_oracle_count: window end exceeds 1e9");
  }
  const std::int64_t lo = window.anchor();
  const std::int64_t hi = window.end();
  // prime flags of odd integers in [lo, hi), index (v - lo) / 2
  std::vector<bool> odd_prime(static_cast<std::size_t>((hi - lo + 1) / 2), false);
  SegmentedSieve(lo, hi).run([&](std::int64_t base, std::span<const std::uint8_t> is_prime) {
    for (std::size_t i = 0; i < is_prime.size(); ++i) {
      const std::int64_t v = base + static_cast<std::int64_t>(i);
      if (is_prime[i] && (v - lo) % 2 == 0) {
        odd_prime[static_cast<std::size_t>((v - lo) / 2)] = true;
      }
    }
  });
  auto member_prime = [&](std::int64_t v) {
    if ((v - lo) % 2 != 0) {
      return v == 2;
    }
    return static_cast<bool>(odd_prime[static_cast<std::size_t>((v - lo) / 2)]);
  };

  std::int64_t count = 0;
  const std::int64_t limit = window.certifiable_positions(c);
  for (std::int64_t r = 0; r < limit; ++r) {
    const std::int64_t base = window.candidate(r);
    bool all = true;
    for (const std::int64_t h : c.offsets()) {
      if (!member_prime(base + h)) {
        all = false;
        break;
      }
    }
    count += all ? 1 : 0;
  }
  return count;
}

Rational torus_average(std::span<const std::int64_t> primes, const Constellation& c) {
  std::int64_t modulus = 1;
  for (const std::int64_t p : primes) {
    modulus *= p;
    if (modulus > 100'000'000) {
      throw std::domain_error("torus_average: primorial exceeds 1e8");
    }
  }
  // forbidden[i][res]: some h has res + h == 0 (mod p_i)
  std::vector<std::vector<std::uint8_t>> forbidden;
  for (const std::int64_t p : primes) {
    std::vector<std::uint8_t> f(static_cast<std::size_t>(p), 0);
    for (const std::int64_t h : c.offsets()) {
      f[static_cast<std::size_t>(((-h) % p + p) % p)] = 1;
    }
    forbidden.push_back(std::move(f));
  }
  std::vector<std::int64_t> residue(primes.size(), 0);
  std::int64_t open = 0;
  for (std::int64_t a = 0; a < modulus; ++a) {
    bool ok = true;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      ok = ok && !forbidden[i][static_cast<std::size_t>(residue[i])];
      if (++residue[i] == primes[i]) {
        residue[i] = 0;
      }
    }
    open += ok ? 1 : 0;
  }
  return make_rational(open, modulus);
}

}  // namespace gearsieve
