#pragma once

#include <cstddef>
#include <functional>

namespace m1sim {

// Worker count taken from M1SIM_THREADS if set (clamped to >= 1),
// otherwise std::thread::hardware_concurrency().
int thread_count();

// Splits [begin, end) into contiguous chunks, one per worker thread, and
// calls chunk_fn(chunk_begin, chunk_end) on each. Exceptions from workers
// are rethrown on the calling thread. Results must not depend on the split.
void parallel_for_chunks(std::size_t begin, std::size_t end,
                         const std::function<void(std::size_t, std::size_t)>& chunk_fn);

}  // namespace m1sim
