#include "gsk/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace gsk {

int thread_budget() {
  static const int budget = [] {
    if (const char* env = std::getenv("GSK_THREADS")) {
      try {
        return std::max(1, std::stoi(env));
      } catch (const std::exception&) {
        // fall through to hardware default
      }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return budget;
}

namespace {
thread_local bool inside_parallel_region = false;
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
  if (n <= 0) return;
  const int budget = thread_budget();
  if (budget <= 1 || n == 1 || inside_parallel_region) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = static_cast<int>(std::min<std::int64_t>(budget, n));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = n * w / workers;
    const std::int64_t hi = n * (w + 1) / workers;
    threads.emplace_back([&, lo, hi, w] {
      inside_parallel_region = true;
      try {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace gsk
