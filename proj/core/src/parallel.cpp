#include "bosonic/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bosonic {

namespace {
std::atomic<int> g_threads{1};
constexpr std::size_t kChunk = 256;
// Nested calls run inline so that a parallel outer loop does not multiply threads.
thread_local bool t_inside = false;
}  // namespace

void set_thread_count(int n) { g_threads = std::max(1, n); }
int thread_count() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(g_threads.load()), chunks));
  if (workers <= 1 || t_inside) {
    for (std::size_t c = 0; c < chunks; ++c) body(c * kChunk, std::min(n, (c + 1) * kChunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto run = [&] {
    const bool outer = t_inside;
    t_inside = true;
    struct Reset {
      bool v;
      ~Reset() { t_inside = v; }
    } reset{outer};
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(c * kChunk, std::min(n, (c + 1) * kChunk));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        next = chunks;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bosonic
