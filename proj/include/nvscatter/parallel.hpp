#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace nv {

/// Global worker cap for parallel_for. 0 means hardware concurrency.
void set_thread_cap(int n);
int thread_cap();

/// Runs fn(i) for i in [0, count) across worker threads in contiguous chunks.
/// Outputs must go to disjoint slots indexed by i, which keeps results
/// independent of thread scheduling. If any fn throws, the exception from the
/// smallest i is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace nv
