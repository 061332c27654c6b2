#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gearsieve::detail {

struct Range {
  std::int64_t begin = 0;
  std::int64_t end = 0;
};

/// Splits [0, n) into `parts` contiguous ranges whose interior boundaries are
/// multiples of `align`. Trailing ranges may be empty for tiny n.
inline std::vector<Range> partition(std::int64_t n, std::size_t parts, std::int64_t align = 1) {
  parts = std::max<std::size_t>(parts, 1);
  std::vector<Range> out(parts);
  std::int64_t prev = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    std::int64_t next = n;
    if (i + 1 < parts) {
      next = static_cast<std::int64_t>((static_cast<__int128>(n) * static_cast<__int128>(i + 1)) /
                                       static_cast<__int128>(parts));
      next = std::clamp(next / align * align, prev, n);
    }
    out[i] = Range{prev, next};
    prev = next;
  }
  return out;
}

/// Runs job(i) for i in [0, count) on up to `workers` threads. The first
/// exception thrown by any job is rethrown after all threads join.
template <class Job>
void run_indexed(std::size_t count, unsigned workers, Job&& job) {
  const auto threads = static_cast<std::size_t>(std::max(1u, workers));
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      job(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(std::min(threads, count));
  for (std::size_t t = 0; t < std::min(threads, count); ++t) {
    pool.emplace_back(worker);
  }
  pool.clear();
  if (failure) {
    std::rethrow_exception(failure);
  }
}

}  // namespace gearsieve::detail
