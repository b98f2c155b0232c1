#pragma once

#include "dds/graph.hpp"
#include "dds/grid.hpp"

#include <vector>

namespace dds {

enum class PeelExit
{
  source_rule, ///< |S| >= z^2 |T| and few low-degree sources
  target_rule, ///< |S| <= z^2 |T| and few low-degree targets
  exhausted,   ///< only produced by peel_without_stopping
};

struct PeelOutcome
{
  VertexPair pair;
  PeelExit exit = PeelExit::source_rule;
  /// While-loop iterations, counting the one that returned.
  std::size_t iterations = 0;
  /// (|S|, |T|) at the start of every iteration.
  std::vector<std::pair<std::size_t, std::size_t>> sizes;
};

/**
 * Fixed-threshold peeling with the early-stopping rules.
 *
 * Starting from both full sides, each iteration computes A (sources with
 * degree < k_S) and B (targets with degree < k_T) in the current induced
 * subgraph and returns (S, T) if the source rule or then the target rule
 * holds; otherwise A and B are removed. Emptied sides end in (∅, ∅) through
 * the source rule. Degrees are maintained by decrements, O(m + n) overall.
 */
[[nodiscard]] PeelOutcome peel(BipartiteGraph const& g, Thresholds const& th);

/// Same thresholds, no stopping rules: peels until A and B are both empty.
/// `iterations` counts iterations that removed at least one vertex.
[[nodiscard]] PeelOutcome peel_without_stopping(BipartiteGraph const& g, Thresholds const& th);

struct GridResult
{
  VertexPair pair;
  DensityValue density;
  std::size_t cell = 0;
};

/// peel at every grid cell; the densest output wins, ties to the lower cell index.
[[nodiscard]] GridResult peel_grid(BipartiteGraph const& g, GuessGrid const& grid);

/// Best peel output per z column (max over D), in z order. Used for density sweeps.
[[nodiscard]] std::vector<GridResult> peel_grid_by_z(BipartiteGraph const& g, GuessGrid const& grid);

} // namespace dds
