#include "graphrom/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace graphrom {

std::size_t thread_count() {
  static const std::size_t count = [] {
    const char* env = std::getenv("GRAPHROM_THREADS");
    if (env == nullptr) return std::size_t{1};
    try {
      const long v = std::stol(env);
      return v > 0 ? static_cast<std::size_t>(v) : std::size_t{1};
    } catch (...) {
      return std::size_t{1};
    }
  }();
  return count;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t min_parallel) {
  const std::size_t workers = std::min(thread_count(), n);
  if (workers <= 1 || n < min_parallel) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body, &failure, &failure_mutex] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace graphrom
