#pragma once

#include "dds/edge_source.hpp"
#include "dds/graph.hpp"
#include "dds/grid.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dds {

/// ceil(2 log_{1+eps} n): the last level scanned at finalization.
[[nodiscard]] std::uint32_t level_cap_for(double epsilon, std::uint64_t n);

/**
 * Level and degree counters of the single-pass algorithm for one (D, z) guess.
 *
 * d_s[u] counts edges seen while u sat at level l_s[u]; reaching k_S moves u
 * up one level and resets the counter. Levels are unbounded during the
 * stream; only the finalization scan stops at level_cap.
 */
struct StreamState
{
  StreamState() = default;
  StreamState(VertexId side_size, Thresholds const& th, std::uint64_t n);

  Thresholds thresholds;
  std::uint32_t need_s = 1; ///< min integer d with d >= k_S
  std::uint32_t need_t = 1;
  std::uint32_t level_cap = 0;
  std::vector<std::uint32_t> l_s, l_t, d_s, d_t;

  [[nodiscard]] VertexId side_size() const noexcept { return static_cast<VertexId>(l_s.size()); }
  /// Integers held by the counters: 4 per directed vertex.
  [[nodiscard]] std::size_t counter_count() const noexcept
  {
    return l_s.size() + l_t.size() + d_s.size() + d_t.size();
  }
};

void stream_update(StreamState& st, VertexId u, VertexId v) noexcept;

/// |S_i| and |T_i| for i = 0..level_cap, where S_i = {v : l_S(v) >= i}.
struct LevelSizes
{
  std::vector<std::size_t> s;
  std::vector<std::size_t> t;
};

[[nodiscard]] LevelSizes level_sizes(std::span<std::uint32_t const> l_s, std::span<std::uint32_t const> l_t,
                                     std::uint32_t level_cap);

/**
 * First level i in 1..level_cap passing either size rule, or nullopt when
 * none does or when that level has an empty side.
 */
[[nodiscard]] std::optional<std::uint32_t> select_level(LevelSizes const& sizes, Thresholds const& th);

[[nodiscard]] std::optional<VertexPair> stream_finalize(StreamState const& st);

/// Work done by one edge across a block of cells.
struct UpdateWork
{
  std::size_t cells = 0;          ///< per-cell update steps
  std::size_t counter_writes = 0; ///< increments, level-ups and resets
};

/**
 * StreamState for a contiguous block of grid cells, stored vertex-major so
 * that one edge touches two contiguous rows. Optionally keeps per-level size
 * counters, updated on every level-up, so queries cost O(level_cap) per cell
 * instead of O(n).
 */
class StreamGrid
{
public:
  StreamGrid(VertexId side_size, GuessGrid const& grid, std::size_t first_cell, std::size_t cell_count,
             bool incremental_levels = false);
  /// Every cell of the grid.
  StreamGrid(VertexId side_size, GuessGrid const& grid, bool incremental_levels = false);

  void update(VertexId u, VertexId v) noexcept;
  UpdateWork update_counted(VertexId u, VertexId v) noexcept;

  [[nodiscard]] VertexId side_size() const noexcept { return side_size_; }
  [[nodiscard]] std::size_t first_cell() const noexcept { return first_cell_; }
  [[nodiscard]] std::size_t cell_count() const noexcept { return cells_; }
  [[nodiscard]] std::uint32_t level_cap() const noexcept { return level_cap_; }
  [[nodiscard]] bool incremental() const noexcept { return incremental_; }
  [[nodiscard]] Thresholds const& thresholds(std::size_t local) const { return thresholds_[local]; }

  /// From the incremental counters when kept, otherwise by a scan.
  [[nodiscard]] LevelSizes level_sizes(std::size_t local) const;
  /// Always by a scan of the level arrays.
  [[nodiscard]] LevelSizes scan_level_sizes(std::size_t local) const;
  [[nodiscard]] VertexPair level_pair(std::size_t local, std::uint32_t level) const;
  [[nodiscard]] std::optional<VertexPair> finalize(std::size_t local) const;

  /// Copy of one cell as a standalone StreamState.
  [[nodiscard]] StreamState extract(std::size_t local) const;

  /// Integers held by level/degree counters, all cells.
  [[nodiscard]] std::size_t counter_count() const noexcept { return 4 * std::size_t{side_size_} * cells_; }

  /// Bytes per cell for a graph with this many directed vertices.
  [[nodiscard]] static std::size_t bytes_per_cell(VertexId side_size, std::uint32_t level_cap, bool incremental);

private:
  struct Counter
  {
    std::uint32_t level = 0;
    std::uint32_t degree = 0;
  };

  template <bool Count>
  UpdateWork apply(VertexId u, VertexId v) noexcept;

  VertexId side_size_;
  std::size_t first_cell_;
  std::size_t cells_;
  std::uint32_t level_cap_;
  bool incremental_;
  std::vector<Thresholds> thresholds_;
  std::vector<std::uint32_t> need_s_, need_t_;
  std::vector<Counter> src_, dst_;         // [vertex * cells + local]
  std::vector<std::uint32_t> at_s_, at_t_; // [local * (level_cap + 1) + i] = |S_i|
};

struct StreamSelection
{
  std::size_t cell = 0;
  std::uint32_t level = 0;
  VertexPair pair;
  DensityValue density; ///< filled by an offline recount
};

/// Largest D with an output, then the first in ascending z; `grid_state` must cover the whole grid.
[[nodiscard]] std::optional<StreamSelection> query_anytime(StreamGrid const& grid_state, GuessGrid const& grid);

/// Per-edge update times within one batch, measured as thread CPU time.
struct BatchTiming
{
  std::size_t batch_index = 0;
  double nanos_per_edge_max = 0;
  double nanos_per_edge_mean = 0;
};

struct StreamRunOptions
{
  /// Counter memory allowed at once; larger grids are run D-row chunk by chunk,
  /// replaying the stream for each chunk.
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
  bool incremental_levels = false;
  bool count_work = false;
  bool timing = false;
  std::size_t batch_size = 10000;
  /// Timed runs are repeated and each batch keeps its fastest repetition.
  unsigned timing_repeats = 1;
  /// Also resolve the best output of every z column (needed for density sweeps).
  bool per_z = true;
  /// Recount densities of the reported pairs with an extra pass.
  bool recount = true;
};

struct StreamRunResult
{
  std::optional<StreamSelection> selected;
  std::vector<std::optional<StreamSelection>> per_z; ///< largest-D output per z column
  EdgeCount edges = 0;
  std::size_t chunks = 0;
  std::size_t passes = 0; ///< reads of the stream, recount included
  std::size_t counter_ints_per_cell = 0;
  std::size_t max_cells_per_edge = 0;
  std::size_t max_counter_writes_per_edge = 0;
  std::vector<BatchTiming> timing;
};

[[nodiscard]] StreamRunResult run_stream_grid(EdgeSource& source, GuessGrid const& grid,
                                              StreamRunOptions const& options = {});
[[nodiscard]] StreamRunResult run_stream_grid(DirectedEdgeList const& stream, GuessGrid const& grid,
                                              StreamRunOptions const& options = {});

/// |E(S, T)| for each pair in one pass over the source.
[[nodiscard]] std::vector<DensityValue> recount_densities(EdgeSource& source, std::span<VertexPair const* const> pairs);

} // namespace dds
