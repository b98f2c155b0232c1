#include "dds/oracle.hpp"

#include <bit>
#include <string>

namespace dds {

SizeCapExceeded::SizeCapExceeded(VertexId side_size, VertexId cap)
  : Error("exact_densest: side size " + std::to_string(side_size) + " exceeds the oracle cap of " +
          std::to_string(cap) + " vertices per side")
  , cap_(cap)
{
}

namespace {

__extension__ typedef unsigned __int128 Wide;

// e1 / sqrt(s1 t1) > e2 / sqrt(s2 t2), exactly.
bool denser(std::uint64_t e1, std::uint64_t st1, std::uint64_t e2, std::uint64_t st2)
{
  return Wide(e1) * e1 * st2 > Wide(e2) * e2 * st1;
}

} // namespace

ExactResult exact_densest(BipartiteGraph const& g, VertexId cap)
{
  if (cap > 24) cap = 24;
  VertexId const n = g.side_size();
  if (n > cap) throw SizeCapExceeded(n, cap);
  if (n == 0) return {};

  // mult[v][u] = number of parallel edges u -> v.
  std::vector<std::vector<std::uint64_t>> mult(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t e = 0; e < g.m(); ++e)
    ++mult[g.targets()[e]][g.sources()[e]];

  std::uint64_t const full = (std::uint64_t{1} << n);
  std::vector<std::uint64_t> into(n);    // edges from S into target v
  std::vector<std::uint64_t> sums(full); // |E(S, T)| indexed by T mask

  std::uint64_t best_s = 1, best_t = 1, best_e = 0, best_st = 1;
  bool have = false;

  for (std::uint64_t s_mask = 1; s_mask < full; ++s_mask) {
    for (VertexId v = 0; v < n; ++v) {
      std::uint64_t c = 0;
      for (std::uint64_t rest = s_mask; rest; rest &= rest - 1)
        c += mult[v][std::countr_zero(rest)];
      into[v] = c;
    }
    auto const s_size = static_cast<std::uint64_t>(std::popcount(s_mask));
    sums[0] = 0;
    for (std::uint64_t t_mask = 1; t_mask < full; ++t_mask) {
      std::uint64_t const e = sums[t_mask & (t_mask - 1)] + into[std::countr_zero(t_mask)];
      sums[t_mask] = e;
      std::uint64_t const st = s_size * static_cast<std::uint64_t>(std::popcount(t_mask));
      if (!have || denser(e, st, best_e, best_st)) {
        have = true;
        best_s = s_mask;
        best_t = t_mask;
        best_e = e;
        best_st = st;
      }
    }
  }

  ExactResult r;
  for (VertexId v = 0; v < n; ++v) {
    if (best_s >> v & 1) r.pair.sources.push_back(v);
    if (best_t >> v & 1) r.pair.targets.push_back(v);
  }
  r.density = make_density(best_e, r.pair.sources.size(), r.pair.targets.size());
  return r;
}

} // namespace dds
