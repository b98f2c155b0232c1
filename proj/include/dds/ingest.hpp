#pragma once

#include "dds/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace dds {

/// Malformed SNAP input; line() is 1-based.
class ParseError : public Error
{
public:
  ParseError(std::size_t line, std::string const& what);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class MissingTimestamps : public Error
{
public:
  using Error::Error;
};

struct ParseOptions
{
  bool dedupe = false;
  bool drop_self_loops = false;
};

struct IngestStats
{
  std::uint64_t lines = 0;
  VertexId n = 0;
  EdgeCount m = 0;          ///< edges kept
  EdgeCount duplicates = 0; ///< repeated (u, v) pairs dropped; only tracked with dedupe
  EdgeCount self_loops = 0; ///< self-loops seen, whether or not dropped
  bool timestamps = false;
};

struct ParsedGraph
{
  DirectedEdgeList edges;
  /// original_ids[dense id] = id as written in the file.
  std::vector<std::uint64_t> original_ids;
  IngestStats stats;
};

/**
 * Reads a SNAP edge list: '#' comment lines, blank lines, and lines of two
 * (u v) or three (u v timestamp) non-negative integers. Ids are remapped
 * densely in order of first appearance among the kept edges.
 */
[[nodiscard]] ParsedGraph parse_snap(std::istream& in, ParseOptions const& options = {});
[[nodiscard]] ParsedGraph parse_snap(std::filesystem::path const& path, ParseOptions const& options = {});

/// Writes `u v [ts]` lines using original ids when given, dense ids otherwise.
void write_snap(std::ostream& out, DirectedEdgeList const& edges, std::vector<std::uint64_t> const& original_ids = {});

// DGEL1 cache: "DGEL1", u32 n, u64 m, then m records (u32 u, u32 v, u64 ts)
// in little-endian order. A timestamp of 0 is read back as absent.
void write_dgel(std::filesystem::path const& path, DirectedEdgeList const& edges);
[[nodiscard]] DirectedEdgeList read_dgel(std::filesystem::path const& path);

/// Parses SNAP text straight into a DGEL1 file without holding the edge list.
IngestStats snap_to_dgel(std::filesystem::path const& snap, std::filesystem::path const& dgel,
                         ParseOptions const& options = {});

/// 64-bit FNV-1a of the file contents.
[[nodiscard]] std::uint64_t content_hash(std::filesystem::path const& path);

/// DGEL1 cache file for `snap` in `cache_dir`, converting it first if absent.
[[nodiscard]] std::filesystem::path cached_dgel(std::filesystem::path const& snap,
                                                std::filesystem::path const& cache_dir,
                                                ParseOptions const& options = {});

enum class OrderMode
{
  file,
  shuffle,
  time,
};

struct StreamOrder
{
  OrderMode mode = OrderMode::file;
  std::uint64_t seed = 0;

  /// "file", "shuffle:SEED" or "time".
  [[nodiscard]] static StreamOrder parse(std::string_view text);
  [[nodiscard]] std::string to_string() const;
};

/// Edges in the requested order. Shuffling is a seeded Fisher-Yates; time
/// ordering is a stable sort and throws MissingTimestamps without them.
[[nodiscard]] DirectedEdgeList order_stream(DirectedEdgeList edges, StreamOrder const& order);

} // namespace dds
