#pragma once

#include <cstdint>
#include <random>

namespace dds {

/// splitmix64 finalizer; used to derive independent seeds.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) noexcept
{
  return mix64(mix64(mix64(master) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

/**
 * Seeded generator with platform-independent derived draws.
 *
 * std::mt19937_64's output sequence is fixed by the standard; the standard
 * distributions are not, so uniform reals and bounded integers are derived
 * here by hand.
 */
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  [[nodiscard]] std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  [[nodiscard]] double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// true with probability p; p >= 1 never consumes a draw.
  [[nodiscard]] bool bernoulli(double p)
  {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return uniform01() < p;
  }

  /// Uniform in [0, bound) by rejection; bound > 0.
  [[nodiscard]] std::uint64_t below(std::uint64_t bound)
  {
    std::uint64_t const limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

private:
  std::mt19937_64 engine_;
};

} // namespace dds
