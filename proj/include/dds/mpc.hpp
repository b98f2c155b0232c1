#pragma once

#include "dds/graph.hpp"
#include "dds/grid.hpp"
#include "dds/rng.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace dds {

/**
 * Parameters of one MPC run. n is the bipartite vertex count of the input
 * graph and stays fixed across phases; logarithms inside p1, p2 and the
 * neighborhood bound are natural.
 */
struct MpcParams
{
  double epsilon = 0.6;
  double delta = 0.5;
  std::uint64_t n_at_start = 0;
  long double alpha = 1;           ///< (1+eps)^sqrt(log_{1+eps} n)
  std::uint32_t t = 1;             ///< max(1, floor(sqrt(delta log_{1+eps} n) / 2))
  std::size_t invocations = 1;     ///< ceil(16 sqrt(delta log_{1+eps} n) / delta)
  std::uint64_t machine_memory = 1; ///< ceil(n^delta) words
  std::uint64_t seed = 0;

  [[nodiscard]] static MpcParams make(double epsilon, double delta, std::uint64_t n, std::uint64_t seed = 0);

  /// min(1, 18 ln n / (eps^2 k)).
  [[nodiscard]] double sampling_probability(long double k) const noexcept;
  /// (36 ln n / eps^2 * alpha)^t.
  [[nodiscard]] long double neighborhood_bound() const noexcept;
  /// Rounds charged per phase: ceil(log2 max(2, t)) graph-exponentiation
  /// steps plus 3 for freezing, sampling and aggregation.
  [[nodiscard]] std::size_t rounds_per_phase() const noexcept;
};

/// Keeps each edge independently with probability p (edge order fixed by g).
/// Edges flagged in `skip` are dropped without a draw. p >= 1 keeps everything without drawing.
[[nodiscard]] BipartiteGraph sample_edges(BipartiteGraph const& g, double p, Rng& rng,
                                          std::vector<char> const& skip = {});

struct MpcPhaseResult
{
  VertexPair pair;
  bool early_return = false;
  std::size_t rounds = 0;
  std::size_t f1 = 0;
  std::size_t f2 = 0;
  std::size_t steps = 0; ///< sampling steps executed
  std::vector<VertexId> frozen_s;
  std::vector<VertexId> frozen_t;
  /// Largest t-hop ball in a sampled graph; only with audit on.
  std::optional<std::size_t> peak_neighborhood;
};

/**
 * One invocation of the freeze / sample / peel phase on the subgraph of g
 * induced by `live` (edges leaving it are ignored). Vertices with degree
 * above k * alpha are frozen and never peeled in this phase; edges between
 * two frozen vertices are not sampled.
 */
[[nodiscard]] MpcPhaseResult mpc_phase(BipartiteGraph const& g, VertexPair const& live, Thresholds const& th,
                                       MpcParams const& params, Rng& rng, bool audit = false);
/// Same, with every vertex of g live.
[[nodiscard]] MpcPhaseResult mpc_phase(BipartiteGraph const& g, Thresholds const& th, MpcParams const& params,
                                       Rng& rng, bool audit = false);

/**
 * Largest breadth-first ball of radius t (vertex count, centre included)
 * around any vertex of the bipartite graph that is not flagged in
 * skip_left / skip_right. Vertices are the 2 * side_size copies.
 */
[[nodiscard]] std::size_t audit_neighborhoods(BipartiteGraph const& sampled, std::uint32_t t,
                                              std::vector<char> const& skip_left = {},
                                              std::vector<char> const& skip_right = {});

struct PhaseRecord
{
  std::size_t cell = 0;
  long double guess_d = 0;
  long double guess_z = 0;
  std::size_t phase = 0; ///< 1-based within its cell
  std::size_t rounds = 0;
  std::size_t s_size = 0; ///< of the phase's output pair
  std::size_t t_size = 0;
  std::size_t f1 = 0;
  std::size_t f2 = 0;
  bool early_return = false;
  std::optional<VertexPair> potential_pair; ///< the early-returned pair, when recorded
};

/**
 * Rounds and phases of an MPC run. Cells run in parallel in the model, so
 * rounds_total is the largest per-cell sum; rounds_sequential adds them all.
 */
struct RoundLedger
{
  std::size_t rounds_total = 0;
  std::size_t rounds_sequential = 0;
  std::size_t rounds_per_phase = 0;
  std::size_t invocations = 0;
  std::uint64_t machine_memory = 0;
  std::vector<PhaseRecord> phases; ///< cell order, then phase order
  std::optional<std::size_t> peak_neighborhood_size;
};

struct MpcRunOptions
{
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool audit = false;
  bool record_pairs = false;
};

struct MpcRunResult
{
  VertexPair pair;
  DensityValue density;
  std::optional<std::size_t> cell; ///< cell of the best potential pair
  MpcParams params;
  RoundLedger ledger;
  /// Best potential pair per z column (max over D), by recount.
  std::vector<DensityValue> per_z;
};

/**
 * Chains up to params.invocations phases per grid cell, each on the subgraph
 * induced by the previous output. A cell stops at its first early return,
 * whose pair becomes a potential pair. The answer is the densest potential
 * pair over all cells (recounted on g; ties to the lower cell index).
 * Each cell draws from its own generator seeded by (seed, d_index, z_index).
 */
[[nodiscard]] MpcRunResult run_mpc(BipartiteGraph const& g, GuessGrid const& grid, double delta,
                                   MpcRunOptions const& options = {});

/// guess_D,guess_z,phase,rounds,s_size,t_size,f1,f2,early_return
void write_rounds_csv(std::ostream& out, RoundLedger const& ledger);

} // namespace dds
