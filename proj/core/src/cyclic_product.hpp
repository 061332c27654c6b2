#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace gearsieve::detail {

/// A length-p lookup table read at index (step * d) mod p.
struct CyclicFactor {
  std::int64_t p = 0;
  std::int64_t step = 1;  // reduced mod p
  std::vector<double> table;
};

inline constexpr std::int64_t kProductBlock = 4096;

/// Calls visit(d, h(d)) for d in [first, last) with
/// h(d) = prod_i factors[i].table[(step_i * d) mod p_i]. Products are taken in
/// factor order, block by block; no divisions in the inner loop.
template <class Visit>
void cyclic_products(std::span<const CyclicFactor> factors, std::int64_t first, std::int64_t last, Visit&& visit) {
  std::vector<std::int64_t> index(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    const std::int64_t r = first % f.p;
    index[i] = static_cast<std::int64_t>((static_cast<__int128>(f.step) * ((r + f.p) % f.p)) % f.p);
  }
  std::vector<double> h(static_cast<std::size_t>(kProductBlock));
  for (std::int64_t base = first; base < last; base += kProductBlock) {
    const std::int64_t len = std::min(kProductBlock, last - base);
    std::fill_n(h.begin(), len, 1.0);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const auto& f = factors[i];
      const double* table = f.table.data();
      std::int64_t idx = index[i];
      for (std::int64_t j = 0; j < len; ++j) {
        h[static_cast<std::size_t>(j)] *= table[idx];
        idx += f.step;
        if (idx >= f.p) {
          idx -= f.p;
        }
      }
      index[i] = idx;
    }
    for (std::int64_t j = 0; j < len; ++j) {
      visit(base + j, h[static_cast<std::size_t>(j)]);
    }
  }
}

}  // namespace gearsieve::detail
