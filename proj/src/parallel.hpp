#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace mclfem::detail {

// Static contiguous partition of [0, n). Each index is visited by exactly one
// thread, so per-index writes stay deterministic. The first exception thrown by
// any worker is rethrown on the calling thread.
template <class F>
void parallel_for(int n, int threads, F&& body) {
  if (threads <= 1 || n < 1024) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const int begin = static_cast<int>(static_cast<long long>(n) * w / workers);
    const int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    pool.emplace_back([begin, end, w, &body, &errors] {
      try {
        for (int i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace mclfem::detail
