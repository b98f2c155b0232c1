#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dds {

/// Worker count for `requested` (0 = hardware concurrency).
[[nodiscard]] inline unsigned resolve_threads(unsigned requested) noexcept
{
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/**
 * Calls fn(i) for every i in [0, count) on up to `threads` workers. Indices
 * are handed out dynamically; fn must only write state owned by index i.
 * The first exception thrown is rethrown after all workers stop.
 */
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
  threads = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w)
    pool.emplace_back(work);
  work();
  for (auto& t : pool)
    t.join();
  if (error) std::rethrow_exception(error);
}

} // namespace dds
