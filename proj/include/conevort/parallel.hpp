#pragma once

#include <cstddef>
#include <functional>

namespace conevort {

/// Worker count: CONEVORT_THREADS if set (>= 1), else hardware concurrency.
unsigned thread_count();

/// Runs body(begin, end) over disjoint contiguous chunks of [0, n).
/// Each index is visited exactly once, so any per-index computation gives
/// the same bits regardless of how many threads run.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace conevort
