#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace treedet {

/// Worker count from TREEDET_THREADS, else the hardware concurrency.
inline std::size_t thread_count() {
  if (const char* env = std::getenv("TREEDET_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(begin, end) over contiguous blocks of [0, n). The first exception
/// thrown by any block is rethrown.
template <class F>
void parallel_blocks(std::size_t n, F&& fn) {
  const std::size_t workers = std::min(thread_count(), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex guard;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = n * w / workers;
    const std::size_t e = n * (w + 1) / workers;
    pool.emplace_back([&, b, e] {
      try {
        fn(b, e);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

template <class F>
void parallel_for(std::size_t n, F&& fn) {
  parallel_blocks(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) fn(i);
  });
}

}  // namespace treedet
