#include "dds/graph.hpp"

#include <cmath>
#include <numeric>

namespace dds {

BipartiteGraph::BipartiteGraph(VertexId side_size, std::span<DirectedEdge const> edges)
  : side_size_(side_size)
{
  sources_.reserve(edges.size());
  targets_.reserve(edges.size());
  for (auto const& e : edges) {
    if (e.source >= side_size || e.target >= side_size)
      throw InvalidArgument("edge endpoint outside [0, n_vertices)");
    sources_.push_back(e.source);
    targets_.push_back(e.target);
  }
  build_adjacency();
}

BipartiteGraph::BipartiteGraph(VertexId side_size, std::span<VertexId const> sources, std::span<VertexId const> targets)
  : side_size_(side_size)
  , sources_(sources.begin(), sources.end())
  , targets_(targets.begin(), targets.end())
{
  if (sources.size() != targets.size())
    throw InvalidArgument("source and target arrays differ in length");
  for (std::size_t e = 0; e < sources_.size(); ++e)
    if (sources_[e] >= side_size || targets_[e] >= side_size)
      throw InvalidArgument("edge endpoint outside [0, side_size)");
  build_adjacency();
}

void BipartiteGraph::build_adjacency()
{
  auto const n = static_cast<std::size_t>(side_size_);
  left_offsets_.assign(n + 1, 0);
  right_offsets_.assign(n + 1, 0);
  for (std::size_t e = 0; e < sources_.size(); ++e) {
    ++left_offsets_[sources_[e] + 1];
    ++right_offsets_[targets_[e] + 1];
  }
  std::partial_sum(left_offsets_.begin(), left_offsets_.end(), left_offsets_.begin());
  std::partial_sum(right_offsets_.begin(), right_offsets_.end(), right_offsets_.begin());

  left_adj_.resize(sources_.size());
  right_adj_.resize(sources_.size());
  std::vector<std::uint64_t> lpos(left_offsets_.begin(), left_offsets_.end() - 1);
  std::vector<std::uint64_t> rpos(right_offsets_.begin(), right_offsets_.end() - 1);
  for (std::size_t e = 0; e < sources_.size(); ++e) {
    left_adj_[lpos[sources_[e]]++] = targets_[e];
    right_adj_[rpos[targets_[e]]++] = sources_[e];
  }
}

VertexPair BipartiteGraph::full_pair() const
{
  VertexPair p;
  p.sources.resize(side_size_);
  std::iota(p.sources.begin(), p.sources.end(), VertexId{0});
  p.targets = p.sources;
  return p;
}

BipartiteGraph to_bipartite(DirectedEdgeList const& g)
{
  return BipartiteGraph(g.n_vertices, g.edges);
}

DensityValue make_density(EdgeCount edges, std::size_t s_size, std::size_t t_size) noexcept
{
  DensityValue d{0.0, edges, s_size, t_size};
  if (s_size > 0 && t_size > 0)
    d.value = static_cast<double>(edges) / std::sqrt(static_cast<double>(s_size) * static_cast<double>(t_size));
  return d;
}

bool denser_than(DensityValue const& a, DensityValue const& b) noexcept
{
  __extension__ typedef unsigned __int128 Wide;
  bool const a_zero = a.s_size == 0 || a.t_size == 0 || a.edge_count == 0;
  bool const b_zero = b.s_size == 0 || b.t_size == 0 || b.edge_count == 0;
  if (a_zero) return false;
  if (b_zero) return true;
  constexpr std::uint64_t kEdgeLimit = 1ULL << 31;
  constexpr std::uint64_t kSizeLimit = 1ULL << 32;
  bool const exact = a.edge_count < kEdgeLimit && b.edge_count < kEdgeLimit && a.s_size < kSizeLimit &&
                     a.t_size < kSizeLimit && b.s_size < kSizeLimit && b.t_size < kSizeLimit;
  if (exact) {
    // e^2 < 2^62 and s * t < 2^64, so each side stays below 2^126.
    Wide const lhs = Wide(a.edge_count) * a.edge_count * (Wide(b.s_size) * b.t_size);
    Wide const rhs = Wide(b.edge_count) * b.edge_count * (Wide(a.s_size) * a.t_size);
    return lhs > rhs;
  }
  return a.value > b.value;
}

std::vector<char> membership(std::span<VertexId const> ids, VertexId side_size)
{
  std::vector<char> flags(side_size, 0);
  for (VertexId v : ids) {
    if (v >= side_size) throw InvalidArgument("vertex id outside the graph");
    flags[v] = 1;
  }
  return flags;
}

VertexPair pair_from_flags(std::span<char const> in_s, std::span<char const> in_t)
{
  VertexPair p;
  for (std::size_t v = 0; v < in_s.size(); ++v)
    if (in_s[v]) p.sources.push_back(static_cast<VertexId>(v));
  for (std::size_t v = 0; v < in_t.size(); ++v)
    if (in_t[v]) p.targets.push_back(static_cast<VertexId>(v));
  return p;
}

DensityValue density(BipartiteGraph const& g, VertexPair const& p)
{
  if (p.sources.empty() || p.targets.empty())
    return make_density(0, p.sources.size(), p.targets.size());
  auto const in_t = membership(p.targets, g.side_size());
  EdgeCount count = 0;
  for (VertexId u : p.sources) {
    if (u >= g.side_size()) throw InvalidArgument("vertex id outside the graph");
    for (VertexId v : g.left_neighbors(u))
      count += static_cast<EdgeCount>(in_t[v]);
  }
  return make_density(count, p.sources.size(), p.targets.size());
}

BipartiteGraph induced_subgraph(BipartiteGraph const& g, VertexPair const& p)
{
  auto const in_s = membership(p.sources, g.side_size());
  auto const in_t = membership(p.targets, g.side_size());
  std::vector<VertexId> src, dst;
  auto const s = g.sources();
  auto const t = g.targets();
  for (std::size_t e = 0; e < s.size(); ++e) {
    if (in_s[s[e]] && in_t[t[e]]) {
      src.push_back(s[e]);
      dst.push_back(t[e]);
    }
  }
  return BipartiteGraph(g.side_size(), src, dst);
}

} // namespace dds
