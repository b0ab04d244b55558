#include "m1sim/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace m1sim {

int thread_count() {
  if (const char* env = std::getenv("M1SIM_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_for_chunks(std::size_t begin, std::size_t end,
                         const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
  if (begin >= end) return;
  const std::size_t total = end - begin;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(thread_count()), total);
  if (workers <= 1) {
    chunk_fn(begin, end);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = begin + total * w / workers;
    const std::size_t hi = begin + total * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      try {
        chunk_fn(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace m1sim
