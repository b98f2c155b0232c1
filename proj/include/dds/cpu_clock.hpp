#pragma once

#include <cstdint>
#include <time.h>

namespace dds {

/// CPU time consumed by the calling thread, in nanoseconds. Unlike a wall
/// clock it does not advance while the thread is descheduled.
[[nodiscard]] inline std::uint64_t thread_cpu_nanos() noexcept
{
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<std::uint64_t>(ts.tv_sec) * 1'000'000'000ULL + static_cast<std::uint64_t>(ts.tv_nsec);
}

} // namespace dds
