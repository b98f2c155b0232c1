#include "dds/grid.hpp"

#include "dds/numeric.hpp"
#include "dds/types.hpp"

#include <cmath>

namespace dds {

Thresholds Thresholds::from_values(long double D, long double z, long double epsilon)
{
  if (!(D > 0) || !(z > 0)) throw InvalidArgument("thresholds need D > 0 and z > 0");
  if (!(epsilon > 0)) throw InvalidArgument("thresholds need epsilon > 0");
  Thresholds th;
  th.D = D;
  th.z = z;
  th.epsilon = epsilon;
  th.k_s = D / (2 * z);
  th.k_t = D * z / 2;
  th.min_degree_s = numeric::min_integer_at_least(th.k_s);
  th.min_degree_t = numeric::min_integer_at_least(th.k_t);
  return th;
}

Thresholds Thresholds::from_exponents(long double epsilon, int d_exponent, int z_exponent)
{
  // k_S and k_T are themselves powers of (1+eps); computing them from the
  // exponent difference avoids compounding rounding.
  Thresholds th = from_values(numeric::pow1p(epsilon, d_exponent), numeric::pow1p(epsilon, z_exponent), epsilon);
  th.k_s = numeric::pow1p(epsilon, d_exponent - z_exponent) / 2;
  th.k_t = numeric::pow1p(epsilon, d_exponent + z_exponent) / 2;
  th.min_degree_s = numeric::min_integer_at_least(th.k_s);
  th.min_degree_t = numeric::min_integer_at_least(th.k_t);
  return th;
}

GuessGrid::GuessGrid(double epsilon, std::uint64_t n)
  : epsilon_(epsilon)
  , n_(n)
{
  if (!(epsilon > 0)) throw InvalidArgument("guess grid needs epsilon > 0");
  auto const top = numeric::ceil_log_base(static_cast<long double>(n), epsilon);
  auto const half = numeric::ceil_log_base(std::sqrt(static_cast<long double>(n)), epsilon);
  for (std::int64_t i = 0; i <= top; ++i)
    d_exponents_.push_back(static_cast<int>(i));
  for (std::int64_t j = -half; j <= half; ++j)
    z_exponents_.push_back(static_cast<int>(j));
}

std::vector<long double> GuessGrid::d_values() const
{
  std::vector<long double> out;
  for (int e : d_exponents_)
    out.push_back(numeric::pow1p(epsilon_, e));
  return out;
}

std::vector<long double> GuessGrid::z_values() const
{
  std::vector<long double> out;
  for (int e : z_exponents_)
    out.push_back(numeric::pow1p(epsilon_, e));
  return out;
}

long double GuessGrid::z_value(std::size_t z_index) const
{
  return numeric::pow1p(epsilon_, z_exponents_.at(z_index));
}

GuessCell GuessGrid::cell(std::size_t index) const noexcept
{
  GuessCell c;
  c.d_index = index / z_count();
  c.z_index = index % z_count();
  c.d_exponent = d_exponents_[c.d_index];
  c.z_exponent = z_exponents_[c.z_index];
  return c;
}

Thresholds GuessGrid::thresholds(std::size_t index) const
{
  auto const c = cell(index);
  return Thresholds::from_exponents(epsilon_, c.d_exponent, c.z_exponent);
}

} // namespace dds
