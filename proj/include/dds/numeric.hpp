#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

// Comparisons between integer counts and real thresholds. Thresholds are
// powers of (1 + eps) that are computed in long double; values within a
// relative 1e-9 of each other are treated as equal so that peeling decisions
// do not depend on the last bits of powl().
namespace dds::numeric {

inline constexpr long double kRelativeSlack = 1e-9L;

[[nodiscard]] inline long double slack_for(long double x) noexcept
{
  return kRelativeSlack * std::max<long double>(1.0L, std::fabs(x));
}

[[nodiscard]] inline bool approx_ge(long double a, long double b) noexcept
{
  return a >= b - slack_for(b);
}

[[nodiscard]] inline bool approx_le(long double a, long double b) noexcept
{
  return a <= b + slack_for(b);
}

/// Smallest integer d with d >= x (ties within slack count as reached).
[[nodiscard]] inline std::uint64_t min_integer_at_least(long double x) noexcept
{
  if (x <= 0.0L) return 0;
  return static_cast<std::uint64_t>(std::ceil(x - slack_for(x)));
}

/// Smallest integer d with d > x (ties within slack are not exceeded).
[[nodiscard]] inline std::uint64_t min_integer_above(long double x) noexcept
{
  if (x < 0.0L) return 0;
  return static_cast<std::uint64_t>(std::floor(x + slack_for(x))) + 1;
}

/// log base (1 + eps) of x; 0 for x <= 1.
[[nodiscard]] inline long double log_base(long double x, long double eps) noexcept
{
  if (x <= 1.0L) return 0.0L;
  return std::log(x) / std::log1p(eps);
}

/// ceil(log_{1+eps} x) with the same tie slack as the threshold helpers.
[[nodiscard]] inline std::int64_t ceil_log_base(long double x, long double eps) noexcept
{
  long double const l = log_base(x, eps);
  return static_cast<std::int64_t>(std::ceil(l - slack_for(l)));
}

[[nodiscard]] inline long double pow1p(long double eps, long double exponent) noexcept
{
  return std::exp(exponent * std::log1p(eps));
}

} // namespace dds::numeric
