#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tailrisk::detail {

inline unsigned worker_count(unsigned requested, std::size_t tasks) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

/// Runs body(i) for i in [0, count) on a small pool. Each index is visited by
/// exactly one worker. The exception from the lowest failing index is rethrown
/// so the reported failure does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  const unsigned workers = worker_count(threads, count);
  std::exception_ptr first_error;
  std::size_t first_index = count;
  std::mutex mu;
  auto run_one = [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(mu);
      if (i < first_index) {
        first_index = i;
        first_error = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) run_one(i);
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace tailrisk::detail
