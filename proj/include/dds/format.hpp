#pragma once

#include <charconv>
#include <string>

namespace dds {

/// Shortest decimal text that reads back to the same double.
[[nodiscard]] inline std::string format_real(double x)
{
  char buf[32];
  auto const [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

} // namespace dds
