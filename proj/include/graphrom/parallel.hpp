#pragma once

#include <cstddef>
#include <functional>

namespace graphrom {

/// Worker count from GRAPHROM_THREADS (default 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Iterations are split into contiguous chunks, one per
/// worker; body must only write state owned by index i. Loops shorter than min_parallel
/// run serially. The first exception thrown by any iteration is rethrown after the join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t min_parallel = 4096);

}  // namespace graphrom
