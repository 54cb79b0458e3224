#pragma once

#include <cstddef>
#include <functional>

namespace bosonic {

// Worker count used by parallel_for; 1 means run inline.
void set_thread_count(int n);
int thread_count();

// Runs body(begin, end) over fixed chunks of [0, n). Chunk boundaries depend only on n,
// so any per-index results are identical for every thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace bosonic
