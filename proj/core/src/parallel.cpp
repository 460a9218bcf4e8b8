#include "motifclust/parallel.hpp"

#include <atomic>

namespace motifclust {

namespace {

int hardware_default() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

std::atomic<int> g_threads{0};        // 0 = use hardware default
std::atomic<int> g_region_active{0};  // one parallel region at a time

}  // namespace

void set_thread_count(int threads) {
  g_threads.store(threads <= 0 ? 0 : threads, std::memory_order_relaxed);
}

int thread_count() {
  const int t = g_threads.load(std::memory_order_relaxed);
  return t == 0 ? hardware_default() : t;
}

namespace detail {

bool enter_parallel_region() {
  int expected = 0;
  return g_region_active.compare_exchange_strong(expected, 1,
                                                 std::memory_order_acq_rel);
}

void leave_parallel_region() {
  g_region_active.store(0, std::memory_order_release);
}

}  // namespace detail

}  // namespace motifclust
