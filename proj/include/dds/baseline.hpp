#pragma once

#include "dds/graph.hpp"

#include <cstdint>
#include <vector>

namespace dds {

/// One peeling iteration of the baseline, as seen at its start.
struct BaselinePass
{
  std::size_t pass = 0; ///< 1-based
  std::size_t s_size = 0;
  std::size_t t_size = 0;
  DensityValue density;
  double nanos = 0; ///< thread CPU time of the iteration
};

struct BaselineResult
{
  VertexPair best_pair;
  DensityValue best_density;
  std::size_t passes = 0;
  double c = 1;
  std::vector<BaselinePass> trace;
};

/**
 * Average-degree peeling for a fixed ratio guess c, directed case. While both sides are non-empty: if
 * |S| >= c|T| remove every source with degree <= (1+eps)|E(S,T)|/|S|,
 * otherwise every target with degree <= (1+eps)|E(S,T)|/|T|. The densest
 * (S, T) seen at the start of an iteration is kept. Each iteration is one
 * pass over the edges (one round in MPC form).
 */
[[nodiscard]] BaselineResult baseline_peel(BipartiteGraph const& g, double epsilon, double c);

/// c = (1+eps)^j for |j| <= ceil(log_{1+eps} n).
[[nodiscard]] std::vector<double> baseline_ratios(double epsilon, std::uint64_t n);

struct BaselineGridResult
{
  BaselineResult best; ///< ties to the smaller c
  std::vector<BaselineResult> per_c;
  std::size_t passes = 0; ///< max over c: the sweeps share passes
  std::size_t mpc_rounds = 0; ///< passes + 1
};

[[nodiscard]] BaselineGridResult baseline_grid(BipartiteGraph const& g, double epsilon, unsigned threads = 1);

} // namespace dds
