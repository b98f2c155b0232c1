#pragma once

#include "dds/types.hpp"

#include <span>
#include <vector>

namespace dds {

/**
 * Bipartite representation of a directed graph.
 *
 * Both sides are copies of the directed vertex set, so each side has
 * side_size() vertices and n() == 2 * side_size(). A directed edge u -> v is
 * the undirected edge left(u) -- right(v). Parallel edges are kept.
 *
 * Immutable after construction; concurrent readers are fine.
 */
class BipartiteGraph
{
public:
  BipartiteGraph() = default;
  BipartiteGraph(VertexId side_size, std::span<DirectedEdge const> edges);
  BipartiteGraph(VertexId side_size, std::span<VertexId const> sources, std::span<VertexId const> targets);

  [[nodiscard]] VertexId side_size() const noexcept { return side_size_; }
  /// Total vertex count |S| + |T| of the bipartite graph.
  [[nodiscard]] std::uint64_t n() const noexcept { return 2ULL * side_size_; }
  [[nodiscard]] EdgeCount m() const noexcept { return sources_.size(); }

  [[nodiscard]] std::span<VertexId const> left_neighbors(VertexId u) const noexcept
  {
    return {left_adj_.data() + left_offsets_[u], left_adj_.data() + left_offsets_[u + 1]};
  }
  [[nodiscard]] std::span<VertexId const> right_neighbors(VertexId v) const noexcept
  {
    return {right_adj_.data() + right_offsets_[v], right_adj_.data() + right_offsets_[v + 1]};
  }
  [[nodiscard]] std::uint64_t left_degree(VertexId u) const noexcept
  {
    return left_offsets_[u + 1] - left_offsets_[u];
  }
  [[nodiscard]] std::uint64_t right_degree(VertexId v) const noexcept
  {
    return right_offsets_[v + 1] - right_offsets_[v];
  }

  /// Edge endpoints in insertion order; edge e is sources()[e] -- targets()[e].
  [[nodiscard]] std::span<VertexId const> sources() const noexcept { return sources_; }
  [[nodiscard]] std::span<VertexId const> targets() const noexcept { return targets_; }

  /// Every vertex on both sides.
  [[nodiscard]] VertexPair full_pair() const;

private:
  void build_adjacency();

  VertexId side_size_ = 0;
  std::vector<VertexId> sources_;
  std::vector<VertexId> targets_;
  std::vector<std::uint64_t> left_offsets_{0};
  std::vector<VertexId> left_adj_;
  std::vector<std::uint64_t> right_offsets_{0};
  std::vector<VertexId> right_adj_;
};

[[nodiscard]] BipartiteGraph to_bipartite(DirectedEdgeList const& g);

/// |E(S, T)| / sqrt(|S| |T|), counting parallel edges; 0 when a side is empty.
[[nodiscard]] DensityValue density(BipartiteGraph const& g, VertexPair const& p);

[[nodiscard]] DensityValue make_density(EdgeCount edges, std::size_t s_size, std::size_t t_size) noexcept;

/// Exact a > b on edge_count / sqrt(s_size * t_size); empty sides count as 0.
[[nodiscard]] bool denser_than(DensityValue const& a, DensityValue const& b) noexcept;

/// Subgraph induced by p. Vertex ids (and side_size) are unchanged.
[[nodiscard]] BipartiteGraph induced_subgraph(BipartiteGraph const& g, VertexPair const& p);

/// Membership bitmap of size side_size for a sorted id list.
[[nodiscard]] std::vector<char> membership(std::span<VertexId const> ids, VertexId side_size);

/// Builds a VertexPair from membership flags.
[[nodiscard]] VertexPair pair_from_flags(std::span<char const> in_s, std::span<char const> in_t);

} // namespace dds
