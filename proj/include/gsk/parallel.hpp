#pragma once

#include <cstdint>
#include <functional>

namespace gsk {

// Maximum worker threads, from GSK_THREADS when set (>= 1), otherwise the
// hardware concurrency. Read once per process.
int thread_budget();

// Runs fn(i) for i in [0, n). Indices are split into contiguous chunks across
// at most thread_budget() threads; nested calls run serially on the calling
// thread. fn must only write state owned by its index.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace gsk
