#pragma once
// Minimal fork-join helper.  Work items write disjoint output slots and all
// reductions happen after the join in index order, so the thread count can
// only change timing, never results.

#include <cstddef>
#include <functional>

namespace telegraph {

int max_threads();
void set_max_threads(int n);

// Calls fn(begin, end) on contiguous chunks of [0, n), possibly from worker
// threads.  fn must only touch state owned by its own index range.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace telegraph
