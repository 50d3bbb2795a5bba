#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ngrank::detail {

inline unsigned resolve_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads (0 = hardware). The
/// first exception is rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  jobs = static_cast<unsigned>(
      std::min<std::size_t>(resolve_jobs(jobs), std::max<std::size_t>(n, 1)));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < jobs; ++t) {
      workers.emplace_back([&] {
        try {
          for (std::size_t i = next++; i < n; i = next++) fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ngrank::detail
