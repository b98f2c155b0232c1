#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dds {

/**
 * Fixed peeling thresholds for a density guess D and side-ratio guess z:
 * k_S = D / (2z) on the source side, k_T = D z / 2 on the target side.
 *
 * Degrees are integers, so deg >= k is evaluated as deg >= min_degree_s
 * with min_degree_s = ceil(k_S) (ties within the numeric slack count as met).
 */
struct Thresholds
{
  long double D = 1;
  long double z = 1;
  long double epsilon = 0.2;
  long double k_s = 0.5;
  long double k_t = 0.5;
  std::uint64_t min_degree_s = 1;
  std::uint64_t min_degree_t = 1;

  /// D = (1+eps)^d_exponent, z = (1+eps)^z_exponent.
  [[nodiscard]] static Thresholds from_exponents(long double epsilon, int d_exponent, int z_exponent);
  [[nodiscard]] static Thresholds from_values(long double D, long double z, long double epsilon);

  [[nodiscard]] long double z_squared() const noexcept { return z * z; }
};

/// One cell of the (D, z) lattice.
struct GuessCell
{
  std::size_t d_index = 0;
  std::size_t z_index = 0;
  int d_exponent = 0;
  int z_exponent = 0;
};

/**
 * Geometric (D, z) lattice: D = (1+eps)^i for i = 0..ceil(log n), and
 * z = (1+eps)^j for |j| <= ceil(log sqrt n), logs base (1+eps).
 * Cells are ordered D-major, z ascending.
 */
class GuessGrid
{
public:
  GuessGrid(double epsilon, std::uint64_t n);

  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
  [[nodiscard]] std::uint64_t n() const noexcept { return n_; }

  [[nodiscard]] std::size_t d_count() const noexcept { return d_exponents_.size(); }
  [[nodiscard]] std::size_t z_count() const noexcept { return z_exponents_.size(); }
  [[nodiscard]] std::size_t size() const noexcept { return d_count() * z_count(); }

  [[nodiscard]] std::vector<long double> d_values() const;
  [[nodiscard]] std::vector<long double> z_values() const;

  [[nodiscard]] GuessCell cell(std::size_t index) const noexcept;
  [[nodiscard]] std::size_t index_of(std::size_t d_index, std::size_t z_index) const noexcept
  {
    return d_index * z_count() + z_index;
  }
  [[nodiscard]] Thresholds thresholds(std::size_t index) const;
  [[nodiscard]] long double z_value(std::size_t z_index) const;

private:
  double epsilon_;
  std::uint64_t n_;
  std::vector<int> d_exponents_;
  std::vector<int> z_exponents_;
};

} // namespace dds
