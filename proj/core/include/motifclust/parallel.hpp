#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace motifclust {

// Sets the number of worker threads used by parallel_for.  Values <= 0 reset
// to the hardware concurrency.  Affects all subsequent parallel regions.
void set_thread_count(int threads);

// Current worker thread count (>= 1).
int thread_count();

namespace detail {
bool enter_parallel_region();  // false when already inside one (run serially)
void leave_parallel_region();
}  // namespace detail

// Runs body(lo, hi) over disjoint contiguous chunks covering [begin, end).
// One chunk per worker; with thread_count() == 1, or when called from inside
// another parallel region, the whole range runs on the calling thread.  The
// first exception thrown by any chunk is rethrown to the caller.
//
// The chunk boundaries depend only on (end - begin) and thread_count(), so a
// body that writes to disjoint per-index slots yields identical results for
// any thread count.
template <typename Body>
void parallel_for(std::int64_t begin, std::int64_t end, const Body& body) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;
  const int workers = thread_count();
  if (workers <= 1 || count == 1 || !detail::enter_parallel_region()) {
    body(begin, end);
    return;
  }
  const std::int64_t chunks = std::min<std::int64_t>(workers, count);
  const std::int64_t base = count / chunks;
  const std::int64_t extra = count % chunks;  // first `extra` chunks get +1
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(chunks));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chunks));
  std::int64_t lo = begin;
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::int64_t hi = lo + base + (c < extra ? 1 : 0);
    pool.emplace_back([&body, &errors, c, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        errors[static_cast<std::size_t>(c)] = std::current_exception();
      }
    });
    lo = hi;
  }
  for (auto& t : pool) t.join();
  detail::leave_parallel_region();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace motifclust
