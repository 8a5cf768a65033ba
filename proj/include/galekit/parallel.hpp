#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace galekit {

// Available cores, at least 1.
inline unsigned default_jobs() { return std::max(1U, std::thread::hardware_concurrency()); }

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Each index is
// handled exactly once, so results written per index do not depend on jobs.
// The first exception thrown by any task is rethrown.
template <class Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1U, jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace galekit
