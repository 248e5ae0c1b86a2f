#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace ik {

/// Runs body(i) for i in [0, n) on at most `workers` threads. Items are
/// claimed dynamically, so callers must write results by index. The first
/// exception escaping a body is rethrown after all workers join.
inline void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n && !failed.load(); i = next++) {
          try {
            body(i);
          } catch (...) {
            bool expected = false;
            if (failed.compare_exchange_strong(expected, true)) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ik
