#pragma once

#include "dds/types.hpp"

#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>

namespace dds {

/**
 * Pull-based edge stream. read() fills a caller buffer and returns how many
 * edges were written; 0 means the stream is exhausted. rewind() restarts it
 * so that a second pass (e.g. a density recount) sees the same order.
 */
class EdgeSource
{
public:
  virtual ~EdgeSource() = default;

  [[nodiscard]] virtual std::size_t read(std::span<DirectedEdge> out) = 0;
  virtual void rewind() = 0;
  [[nodiscard]] virtual VertexId n_vertices() const noexcept = 0;
  [[nodiscard]] virtual std::optional<EdgeCount> size_hint() const noexcept { return std::nullopt; }
};

/// Streams a list held elsewhere; the list must outlive the source.
class MemoryEdgeSource final : public EdgeSource
{
public:
  explicit MemoryEdgeSource(DirectedEdgeList const& list) noexcept : list_(&list) {}

  std::size_t read(std::span<DirectedEdge> out) override;
  void rewind() override { pos_ = 0; }
  [[nodiscard]] VertexId n_vertices() const noexcept override { return list_->n_vertices; }
  [[nodiscard]] std::optional<EdgeCount> size_hint() const noexcept override { return list_->size(); }

private:
  DirectedEdgeList const* list_;
  std::size_t pos_ = 0;
};

/// Streams the records of a DGEL1 file without loading them.
class DgelFileSource final : public EdgeSource
{
public:
  explicit DgelFileSource(std::filesystem::path const& path);

  std::size_t read(std::span<DirectedEdge> out) override;
  void rewind() override;
  [[nodiscard]] VertexId n_vertices() const noexcept override { return n_vertices_; }
  [[nodiscard]] std::optional<EdgeCount> size_hint() const noexcept override { return m_; }

private:
  struct Closer
  {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
  };

  std::filesystem::path path_;
  std::unique_ptr<std::FILE, Closer> file_;
  VertexId n_vertices_ = 0;
  EdgeCount m_ = 0;
  EdgeCount read_ = 0;
};

/// Drains a source into memory (from its current position).
[[nodiscard]] DirectedEdgeList collect(EdgeSource& source);

} // namespace dds
