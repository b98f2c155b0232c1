#pragma once

#include "dds/types.hpp"

#include <cstdint>
#include <vector>

// Synthetic inputs: hand-checkable shapes, the peeling adversary, and seeded
// random digraphs for oracle comparisons.
namespace dds::fixtures {

/// Every undirected edge of K_k as two directed edges.
[[nodiscard]] DirectedEdgeList bidirected_clique(VertexId k);

/// Sources 0..a-1 each point at every target a..a+b-1.
[[nodiscard]] DirectedEdgeList complete_bipartite(VertexId a, VertexId b);

/// Vertex 0 points at 1..n-1.
[[nodiscard]] DirectedEdgeList out_star(VertexId n);

/// Directed G(n, p) without self-loops; ids 0..n-1 all present.
[[nodiscard]] DirectedEdgeList random_digraph(VertexId n, double p, std::uint64_t seed);

/**
 * Peeling adversary: a disjoint K_D plus a chain that needs one peeling
 * iteration per extra vertex at threshold (D - 1) / 2.
 *
 * Vertices 0..D-1 form K_D. The chain starts with a clique on (D + 1) / 2
 * vertices; each of the `extra` further vertices is joined to the (D - 3) / 2
 * vertices before it. Every undirected edge is emitted in both directions.
 * D must be odd and at least 3.
 */
[[nodiscard]] DirectedEdgeList make_peeling_adversary(int D, int extra);

struct CorpusInstance
{
  DirectedEdgeList graph;
  double edge_probability = 0;
  std::uint64_t seed = 0;
};

/**
 * Seeded random digraphs for oracle checks. Instance i has 2 + (i % (max_side - 1))
 * vertices and edge probability {0.2, 0.5, 0.8}[i % 3].
 */
[[nodiscard]] std::vector<CorpusInstance> oracle_corpus(std::size_t count, VertexId max_side, std::uint64_t seed);

} // namespace dds::fixtures
