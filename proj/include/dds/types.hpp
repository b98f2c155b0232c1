#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dds {

using VertexId = std::uint32_t;
using EdgeCount = std::uint64_t;

struct DirectedEdge
{
  VertexId source = 0;
  VertexId target = 0;
  std::optional<std::uint64_t> timestamp;

  friend bool operator==(DirectedEdge const&, DirectedEdge const&) = default;
};

/// Directed edges in stream order. Vertex ids are dense in [0, n_vertices).
struct DirectedEdgeList
{
  std::vector<DirectedEdge> edges;
  VertexId n_vertices = 0;

  [[nodiscard]] std::size_t size() const noexcept { return edges.size(); }
  [[nodiscard]] bool has_timestamps() const noexcept
  {
    return !edges.empty() && edges.front().timestamp.has_value();
  }

  void add(VertexId u, VertexId v, std::optional<std::uint64_t> ts = std::nullopt)
  {
    edges.push_back({u, v, ts});
    if (u >= n_vertices) n_vertices = u + 1;
    if (v >= n_vertices) n_vertices = v + 1;
  }

  friend bool operator==(DirectedEdgeList const&, DirectedEdgeList const&) = default;
};

/// A source set S (left copies) and a target set T (right copies), both sorted.
struct VertexPair
{
  std::vector<VertexId> sources;
  std::vector<VertexId> targets;

  [[nodiscard]] bool empty() const noexcept { return sources.empty() && targets.empty(); }
  [[nodiscard]] bool has_empty_side() const noexcept
  {
    return sources.empty() || targets.empty();
  }

  friend bool operator==(VertexPair const&, VertexPair const&) = default;
};

struct DensityValue
{
  double value = 0.0;
  EdgeCount edge_count = 0;
  std::size_t s_size = 0;
  std::size_t t_size = 0;

  friend bool operator==(DensityValue const&, DensityValue const&) = default;
};

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

} // namespace dds
