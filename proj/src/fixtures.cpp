#include "dds/fixtures.hpp"

#include "dds/rng.hpp"

#include <string>

namespace dds::fixtures {

namespace {

void add_undirected(DirectedEdgeList& g, VertexId a, VertexId b)
{
  g.add(a, b);
  g.add(b, a);
}

} // namespace

DirectedEdgeList bidirected_clique(VertexId k)
{
  DirectedEdgeList g;
  g.n_vertices = k;
  for (VertexId i = 0; i < k; ++i)
    for (VertexId j = i + 1; j < k; ++j)
      add_undirected(g, i, j);
  return g;
}

DirectedEdgeList complete_bipartite(VertexId a, VertexId b)
{
  DirectedEdgeList g;
  g.n_vertices = a + b;
  for (VertexId i = 0; i < a; ++i)
    for (VertexId j = 0; j < b; ++j)
      g.add(i, a + j);
  return g;
}

DirectedEdgeList out_star(VertexId n)
{
  DirectedEdgeList g;
  g.n_vertices = n;
  for (VertexId v = 1; v < n; ++v)
    g.add(0, v);
  return g;
}

DirectedEdgeList random_digraph(VertexId n, double p, std::uint64_t seed)
{
  if (p < 0.0 || p > 1.0) throw InvalidArgument("edge probability must be in [0, 1]");
  Rng rng(seed);
  DirectedEdgeList g;
  g.n_vertices = n;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = 0; v < n; ++v)
      if (u != v && rng.bernoulli(p)) g.add(u, v);
  return g;
}

DirectedEdgeList make_peeling_adversary(int D, int extra)
{
  if (D < 3 || D % 2 == 0)
    throw InvalidArgument("make_peeling_adversary: D must be odd and >= 3, got " + std::to_string(D));
  if (extra < 0)
    throw InvalidArgument("make_peeling_adversary: extra must be >= 0, got " + std::to_string(extra));

  auto const clique = static_cast<VertexId>(D);
  auto const head = static_cast<VertexId>((D + 1) / 2);
  auto const back = static_cast<VertexId>((D - 3) / 2);
  auto const chain = head + static_cast<VertexId>(extra);

  DirectedEdgeList g;
  g.n_vertices = clique + chain;
  for (VertexId i = 0; i < clique; ++i)
    for (VertexId j = i + 1; j < clique; ++j)
      add_undirected(g, i, j);

  VertexId const base = clique;
  for (VertexId i = 0; i < head; ++i)
    for (VertexId j = i + 1; j < head; ++j)
      add_undirected(g, base + i, base + j);
  for (VertexId i = head; i < chain; ++i)
    for (VertexId j = i - back; j < i; ++j)
      add_undirected(g, base + j, base + i);
  return g;
}

std::vector<CorpusInstance> oracle_corpus(std::size_t count, VertexId max_side, std::uint64_t seed)
{
  if (max_side < 2) throw InvalidArgument("oracle_corpus: max_side must be >= 2");
  constexpr double kProbabilities[] = {0.2, 0.5, 0.8};
  std::vector<CorpusInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto const n = static_cast<VertexId>(2 + i % (max_side - 1));
    double const p = kProbabilities[i % 3];
    std::uint64_t const s = derive_seed(seed, i);
    out.push_back({random_digraph(n, p, s), p, s});
  }
  return out;
}

} // namespace dds::fixtures
