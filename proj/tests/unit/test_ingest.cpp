#include "dds/edge_source.hpp"
#include "dds/fixtures.hpp"
#include "dds/ingest.hpp"
#include "dds/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

using namespace dds;
namespace fs = std::filesystem;

namespace {

struct TempDir
{
  fs::path path;
  TempDir()
  {
    Rng rng(static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count()));
    path = fs::temp_directory_path() / ("dds-ingest-" + std::to_string(rng.next()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ParsedGraph parse_text(std::string const& text, ParseOptions const& opts = {})
{
  std::istringstream in(text);
  return parse_snap(in, opts);
}

void write_file(fs::path const& p, std::string const& text)
{
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::vector<std::pair<VertexId, VertexId>> sorted_pairs(DirectedEdgeList const& g)
{
  std::vector<std::pair<VertexId, VertexId>> out;
  for (auto const& e : g.edges)
    out.emplace_back(e.source, e.target);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST_CASE("comments and two columns")
{
  auto const g = parse_text("# c\n0 1\n1 2\n");
  CHECK(g.edges.n_vertices == 3);
  CHECK(g.stats.m == 2);
  CHECK(g.stats.n == 3);
  CHECK(g.stats.lines == 3);
  CHECK_FALSE(g.stats.timestamps);
  CHECK(g.edges.edges[0] == DirectedEdge{0, 1, std::nullopt});
}

TEST_CASE("ids are remapped in order of first appearance")
{
  auto const g = parse_text("100 7\n7 42\n\n42 100\n");
  CHECK(g.original_ids == std::vector<std::uint64_t>{100, 7, 42});
  CHECK(g.edges.edges[1] == DirectedEdge{1, 2, std::nullopt});
  CHECK(g.edges.edges[2] == DirectedEdge{2, 0, std::nullopt});
}

TEST_CASE("tabs, carriage returns and timestamps")
{
  auto const g = parse_text("1\t2\t50\r\n2\t3\t40\r\n");
  CHECK(g.stats.timestamps);
  CHECK(g.edges.has_timestamps());
  CHECK(g.edges.edges[0].timestamp == std::optional<std::uint64_t>{50});
}

TEST_CASE("self-loops are kept unless dropped")
{
  auto const kept = parse_text("0 0\n0 1\n");
  CHECK(kept.stats.m == 2);
  CHECK(kept.stats.self_loops == 1);
  ParseOptions drop;
  drop.drop_self_loops = true;
  auto const dropped = parse_text("0 0\n0 1\n", drop);
  CHECK(dropped.stats.m == 1);
  CHECK(dropped.stats.self_loops == 1);
}

TEST_CASE("dedupe drops repeated pairs")
{
  auto const multi = parse_text("0 1\n0 1\n1 0\n");
  CHECK(multi.stats.m == 3);
  CHECK(multi.stats.duplicates == 0);
  ParseOptions opts;
  opts.dedupe = true;
  auto const simple = parse_text("0 1\n0 1\n1 0\n", opts);
  CHECK(simple.stats.m == 2);
  CHECK(simple.stats.duplicates == 1);
}

TEST_CASE("dropped edges do not introduce vertices")
{
  ParseOptions drop;
  drop.drop_self_loops = true;
  auto const g = parse_text("9 9\n1 2\n", drop);
  CHECK(g.edges.n_vertices == 2);
  CHECK(g.original_ids == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("malformed lines report their line number")
{
  auto expect_line = [](std::string const& text, std::size_t line) {
    try {
      (void)parse_text(text);
      FAIL("no error for: " << text);
    } catch (ParseError const& e) {
      CHECK(e.line() == line);
    }
  };
  expect_line("0 1\n1 x\n", 2);
  expect_line("# h\n0 1\n-1 2\n", 3);
  expect_line("0\n", 1);
  expect_line("0 1 2 3\n", 1);
  expect_line("0 1\n0 1 5\n", 2);
  expect_line("0 1 5\n# c\n1 2\n", 3);
  expect_line("0 1.5\n", 1);
}

TEST_CASE("missing files")
{
  CHECK_THROWS_AS((void)parse_snap(fs::path("/nonexistent/dds/file.txt")), Error);
  CHECK_THROWS_AS((void)read_dgel(fs::path("/nonexistent/dds/file.dgel")), Error);
}

TEST_CASE("SNAP text round trip")
{
  auto const g = parse_text("10 20 3\n20 30 1\n30 10 2\n");
  std::ostringstream out;
  write_snap(out, g.edges, g.original_ids);
  CHECK(out.str() == "10 20 3\n20 30 1\n30 10 2\n");
  auto const again = parse_text(out.str());
  CHECK(again.edges == g.edges);

  std::ostringstream dense;
  write_snap(dense, g.edges);
  CHECK(dense.str() == "0 1 3\n1 2 1\n2 0 2\n");
}

TEST_CASE("DGEL round trip and streaming source")
{
  TempDir tmp;
  auto const g = fixtures::random_digraph(40, 0.1, 3);
  write_dgel(tmp.path / "g.dgel", g);
  CHECK(read_dgel(tmp.path / "g.dgel") == g);

  DirectedEdgeList stamped;
  stamped.add(0, 1, 7);
  stamped.add(1, 2, 9);
  write_dgel(tmp.path / "t.dgel", stamped);
  CHECK(read_dgel(tmp.path / "t.dgel") == stamped);

  DgelFileSource src(tmp.path / "g.dgel");
  CHECK(src.n_vertices() == g.n_vertices);
  CHECK(src.size_hint() == std::optional<EdgeCount>{g.size()});
  auto const first = collect(src);
  src.rewind();
  auto const second = collect(src);
  CHECK(first == g);
  CHECK(second == g);

  write_file(tmp.path / "bad.dgel", "NOTDGEL");
  CHECK_THROWS_AS(DgelFileSource(tmp.path / "bad.dgel"), Error);
}

TEST_CASE("memory source reads in chunks")
{
  auto const g = fixtures::random_digraph(20, 0.3, 1);
  MemoryEdgeSource src(g);
  std::vector<DirectedEdge> buf(7);
  std::size_t total = 0, got;
  while ((got = src.read(buf)) > 0)
    total += got;
  CHECK(total == g.size());
  src.rewind();
  CHECK(collect(src) == g);
}

TEST_CASE("direct conversion matches parse then write")
{
  TempDir tmp;
  write_file(tmp.path / "g.txt", "# x\n5 6\n6 7\n5 6\n7 7\n");
  ParseOptions opts;
  opts.dedupe = true;
  auto const stats = snap_to_dgel(tmp.path / "g.txt", tmp.path / "g.dgel", opts);
  auto const parsed = parse_snap(tmp.path / "g.txt", opts);
  CHECK(stats.m == parsed.stats.m);
  CHECK(stats.n == parsed.stats.n);
  CHECK(read_dgel(tmp.path / "g.dgel") == parsed.edges);
}

TEST_CASE("content hash and cache")
{
  TempDir tmp;
  write_file(tmp.path / "a.txt", "0 1\n1 2\n");
  write_file(tmp.path / "b.txt", "0 1\n1 3\n");
  CHECK(content_hash(tmp.path / "a.txt") == content_hash(tmp.path / "a.txt"));
  CHECK(content_hash(tmp.path / "a.txt") != content_hash(tmp.path / "b.txt"));

  auto const cache = tmp.path / "cache";
  auto const p1 = cached_dgel(tmp.path / "a.txt", cache);
  CHECK(fs::exists(p1));
  auto const stamp = fs::last_write_time(p1);
  auto const p2 = cached_dgel(tmp.path / "a.txt", cache);
  CHECK(p1 == p2);
  CHECK(fs::last_write_time(p2) == stamp);
  ParseOptions opts;
  opts.dedupe = true;
  CHECK(cached_dgel(tmp.path / "a.txt", cache, opts) != p1);
  CHECK(read_dgel(p1) == parse_snap(tmp.path / "a.txt").edges);
  for (auto const& entry : fs::directory_iterator(cache))
    CHECK(entry.path().extension() == ".dgel");
}

TEST_CASE("order names")
{
  CHECK(StreamOrder::parse("file").mode == OrderMode::file);
  CHECK(StreamOrder::parse("time").mode == OrderMode::time);
  auto const s = StreamOrder::parse("shuffle:42");
  CHECK(s.mode == OrderMode::shuffle);
  CHECK(s.seed == 42);
  CHECK(s.to_string() == "shuffle:42");
  CHECK_THROWS_AS((void)StreamOrder::parse("shuffle"), InvalidArgument);
  CHECK_THROWS_AS((void)StreamOrder::parse("shuffle:x"), InvalidArgument);
  CHECK_THROWS_AS((void)StreamOrder::parse("random"), InvalidArgument);
}

TEST_CASE("shuffles are seeded permutations")
{
  auto const g = fixtures::random_digraph(30, 0.2, 8);
  auto const a = order_stream(g, {OrderMode::shuffle, 5});
  auto const b = order_stream(g, {OrderMode::shuffle, 5});
  auto const c = order_stream(g, {OrderMode::shuffle, 6});
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK_FALSE(a == g);
  CHECK(sorted_pairs(a) == sorted_pairs(g));
  CHECK(order_stream(g, {}) == g);
}

TEST_CASE("time order is a stable sort")
{
  DirectedEdgeList g;
  g.add(0, 1, 5);
  g.add(1, 2, 3);
  g.add(2, 0, 5);
  g.add(0, 2, 1);
  auto const t = order_stream(g, {OrderMode::time, 0});
  std::vector<VertexId> sources;
  for (auto const& e : t.edges)
    sources.push_back(e.source);
  CHECK(sources == std::vector<VertexId>{0, 1, 0, 2});
  CHECK(t.edges[2].target == 1);

  auto const plain = fixtures::random_digraph(5, 0.5, 1);
  CHECK_THROWS_AS((void)order_stream(plain, {OrderMode::time, 0}), MissingTimestamps);
}
