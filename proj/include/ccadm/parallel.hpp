#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace ccadm {

/// Runs `job(i)` for i in [0, n) on up to `workers` threads. Each index runs
/// exactly once; callers write results into per-index slots so completion
/// order never matters. Exceptions are captured per index and returned.
inline std::vector<std::exception_ptr> parallel_for(std::size_t n, std::size_t workers,
                                                    const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(n);
  auto run_one = [&](std::size_t i) {
    try {
      job(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) run_one(i);
    return errors;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const std::size_t count = std::min(workers, n);
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    pool.emplace_back([&]() {
      for (std::size_t i = next++; i < n; i = next++) run_one(i);
    });
  }
  for (auto& th : pool) th.join();
  return errors;
}

}  // namespace ccadm
