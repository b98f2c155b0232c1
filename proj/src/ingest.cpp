#include "dds/ingest.hpp"

#include "dds/edge_source.hpp"
#include "dds/rng.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace dds {

ParseError::ParseError(std::size_t line, std::string const& what)
  : Error("line " + std::to_string(line) + ": " + what)
  , line_(line)
{
}

namespace {

constexpr std::array<char, 5> kMagic{'D', 'G', 'E', 'L', '1'};
constexpr std::size_t kHeaderBytes = kMagic.size() + 4 + 8;
constexpr std::size_t kRecordBytes = 4 + 4 + 8;

void put_le(unsigned char* out, std::uint64_t value, int bytes) noexcept
{
  for (int i = 0; i < bytes; ++i)
    out[i] = static_cast<unsigned char>(value >> (8 * i));
}

std::uint64_t get_le(unsigned char const* in, int bytes) noexcept
{
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i)
    v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  return v;
}

std::string_view trim(std::string_view s) noexcept
{
  auto const first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto const last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Splits on spaces/tabs; returns the number of tokens (up to 4 kept).
std::size_t split(std::string_view s, std::array<std::string_view, 4>& tok) noexcept
{
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i == s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (count < tok.size()) tok[count] = s.substr(i, j - i);
    ++count;
    i = j;
  }
  return count;
}

std::uint64_t to_u64(std::string_view token, std::size_t line)
{
  std::uint64_t v = 0;
  auto const [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(line, "expected a non-negative integer, found '" + std::string(token) + "'");
  return v;
}

// Shared SNAP reader; `emit(u, v, ts)` receives dense ids of kept edges.
template <class Emit>
IngestStats read_snap(std::istream& in, ParseOptions const& options, std::vector<std::uint64_t>& original_ids,
                      Emit&& emit)
{
  IngestStats stats;
  std::unordered_map<std::uint64_t, VertexId> remap;
  std::unordered_set<std::uint64_t> seen;
  std::size_t columns = 0;
  std::string raw;
  std::array<std::string_view, 4> tok;

  auto dense = [&](std::uint64_t original) {
    auto [it, inserted] = remap.try_emplace(original, static_cast<VertexId>(original_ids.size()));
    if (inserted) {
      if (original_ids.size() >= UINT32_MAX) throw Error("too many distinct vertices for 32-bit ids");
      original_ids.push_back(original);
    }
    return it->second;
  };

  while (std::getline(in, raw)) {
    ++stats.lines;
    auto const line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::size_t const count = split(line, tok);
    if (count != 2 && count != 3)
      throw ParseError(stats.lines, "expected 2 or 3 columns, found " + std::to_string(count));
    if (columns == 0) {
      columns = count;
      stats.timestamps = count == 3;
    } else if (count != columns) {
      throw ParseError(stats.lines, "mixed column counts: expected " + std::to_string(columns) + ", found " +
                                      std::to_string(count));
    }
    std::uint64_t const ou = to_u64(tok[0], stats.lines);
    std::uint64_t const ov = to_u64(tok[1], stats.lines);
    std::optional<std::uint64_t> ts;
    if (count == 3) ts = to_u64(tok[2], stats.lines);

    if (ou == ov) {
      ++stats.self_loops;
      if (options.drop_self_loops) continue;
    }
    if (options.dedupe) {
      auto const iu = remap.find(ou);
      auto const iv = remap.find(ov);
      if (iu != remap.end() && iv != remap.end()) {
        std::uint64_t const key = (std::uint64_t{iu->second} << 32) | iv->second;
        if (!seen.insert(key).second) {
          ++stats.duplicates;
          continue;
        }
      } else {
        VertexId const u = dense(ou);
        VertexId const v = dense(ov);
        seen.insert((std::uint64_t{u} << 32) | v);
      }
    }
    VertexId const u = dense(ou);
    VertexId const v = dense(ov);
    emit(u, v, ts);
    ++stats.m;
  }
  if (in.bad()) throw Error("read error after line " + std::to_string(stats.lines));
  stats.n = static_cast<VertexId>(original_ids.size());
  return stats;
}

std::ifstream open_input(std::filesystem::path const& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

struct FileCloser
{
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_file(std::filesystem::path const& path, char const* mode)
{
  File f(std::fopen(path.c_str(), mode));
  if (!f) throw Error("cannot open " + path.string());
  return f;
}

void write_header(std::FILE* f, VertexId n, EdgeCount m)
{
  std::array<unsigned char, kHeaderBytes> h{};
  std::copy(kMagic.begin(), kMagic.end(), h.begin());
  put_le(h.data() + kMagic.size(), n, 4);
  put_le(h.data() + kMagic.size() + 4, m, 8);
  if (std::fwrite(h.data(), 1, h.size(), f) != h.size()) throw Error("DGEL1 write failed");
}

// Buffered record writer.
class RecordWriter
{
public:
  explicit RecordWriter(std::FILE* f) : f_(f) { buf_.reserve(kBufferRecords * kRecordBytes); }
  ~RecordWriter() = default;

  void add(VertexId u, VertexId v, std::optional<std::uint64_t> ts)
  {
    std::array<unsigned char, kRecordBytes> r{};
    put_le(r.data(), u, 4);
    put_le(r.data() + 4, v, 4);
    put_le(r.data() + 8, ts.value_or(0), 8);
    buf_.insert(buf_.end(), r.begin(), r.end());
    if (buf_.size() >= kBufferRecords * kRecordBytes) flush();
  }

  void flush()
  {
    if (!buf_.empty() && std::fwrite(buf_.data(), 1, buf_.size(), f_) != buf_.size())
      throw Error("DGEL1 write failed");
    buf_.clear();
  }

private:
  static constexpr std::size_t kBufferRecords = 1 << 16;
  std::FILE* f_;
  std::vector<unsigned char> buf_;
};

} // namespace

ParsedGraph parse_snap(std::istream& in, ParseOptions const& options)
{
  ParsedGraph g;
  g.stats = read_snap(in, options, g.original_ids,
                      [&](VertexId u, VertexId v, std::optional<std::uint64_t> ts) { g.edges.edges.push_back({u, v, ts}); });
  g.edges.n_vertices = g.stats.n;
  return g;
}

ParsedGraph parse_snap(std::filesystem::path const& path, ParseOptions const& options)
{
  auto in = open_input(path);
  return parse_snap(in, options);
}

void write_snap(std::ostream& out, DirectedEdgeList const& edges, std::vector<std::uint64_t> const& original_ids)
{
  auto id = [&](VertexId v) -> std::uint64_t { return original_ids.empty() ? v : original_ids.at(v); };
  for (auto const& e : edges.edges) {
    out << id(e.source) << ' ' << id(e.target);
    if (e.timestamp) out << ' ' << *e.timestamp;
    out << '\n';
  }
}

void write_dgel(std::filesystem::path const& path, DirectedEdgeList const& edges)
{
  File f = open_file(path, "wb");
  write_header(f.get(), edges.n_vertices, edges.size());
  RecordWriter w(f.get());
  for (auto const& e : edges.edges)
    w.add(e.source, e.target, e.timestamp);
  w.flush();
  if (std::fflush(f.get()) != 0) throw Error("DGEL1 write failed: " + path.string());
}

DirectedEdgeList read_dgel(std::filesystem::path const& path)
{
  DgelFileSource source(path);
  return collect(source);
}

IngestStats snap_to_dgel(std::filesystem::path const& snap, std::filesystem::path const& dgel,
                         ParseOptions const& options)
{
  auto in = open_input(snap);
  File f = open_file(dgel, "wb");
  write_header(f.get(), 0, 0);
  RecordWriter w(f.get());
  std::vector<std::uint64_t> ids;
  auto const stats = read_snap(in, options, ids, [&](VertexId u, VertexId v, std::optional<std::uint64_t> ts) {
    w.add(u, v, ts);
  });
  w.flush();
  std::rewind(f.get());
  write_header(f.get(), stats.n, stats.m);
  if (std::fflush(f.get()) != 0) throw Error("DGEL1 write failed: " + dgel.string());
  return stats;
}

std::uint64_t content_hash(std::filesystem::path const& path)
{
  File f = open_file(path, "rb");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::vector<unsigned char> buf(1 << 20);
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), f.get())) > 0)
    for (std::size_t i = 0; i < got; ++i) {
      h ^= buf[i];
      h *= 0x100000001b3ULL;
    }
  if (std::ferror(f.get())) throw Error("read error: " + path.string());
  return h;
}

std::filesystem::path cached_dgel(std::filesystem::path const& snap, std::filesystem::path const& cache_dir,
                                  ParseOptions const& options)
{
  char name[64];
  std::snprintf(name, sizeof name, "%016llx-%c%c.dgel", static_cast<unsigned long long>(content_hash(snap)),
                options.dedupe ? 'd' : 'k', options.drop_self_loops ? 'n' : 'l');
  std::filesystem::create_directories(cache_dir);
  auto const target = cache_dir / name;
  if (std::filesystem::exists(target)) return target;
  auto tmp = target;
  tmp += ".tmp";
  snap_to_dgel(snap, tmp, options);
  std::filesystem::rename(tmp, target);
  return target;
}

StreamOrder StreamOrder::parse(std::string_view text)
{
  if (text == "file") return {OrderMode::file, 0};
  if (text == "time") return {OrderMode::time, 0};
  constexpr std::string_view prefix = "shuffle:";
  if (text.starts_with(prefix)) {
    auto const digits = text.substr(prefix.size());
    std::uint64_t seed = 0;
    auto const [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (!digits.empty() && ec == std::errc{} && ptr == digits.data() + digits.size())
      return {OrderMode::shuffle, seed};
  }
  throw InvalidArgument("unknown stream order '" + std::string(text) + "' (use file, shuffle:SEED or time)");
}

std::string StreamOrder::to_string() const
{
  switch (mode) {
  case OrderMode::file:
    return "file";
  case OrderMode::time:
    return "time";
  case OrderMode::shuffle:
    break;
  }
  return "shuffle:" + std::to_string(seed);
}

DirectedEdgeList order_stream(DirectedEdgeList edges, StreamOrder const& order)
{
  auto& e = edges.edges;
  switch (order.mode) {
  case OrderMode::file:
    break;
  case OrderMode::shuffle: {
    Rng rng(order.seed);
    for (std::size_t i = e.size(); i > 1; --i)
      std::swap(e[i - 1], e[rng.below(i)]);
    break;
  }
  case OrderMode::time:
    if (!std::all_of(e.begin(), e.end(), [](DirectedEdge const& x) { return x.timestamp.has_value(); }))
      throw MissingTimestamps("time ordering needs a timestamp on every edge");
    std::stable_sort(e.begin(), e.end(),
                     [](DirectedEdge const& a, DirectedEdge const& b) { return *a.timestamp < *b.timestamp; });
    break;
  }
  return edges;
}

// EdgeSource implementations.

std::size_t MemoryEdgeSource::read(std::span<DirectedEdge> out)
{
  auto const& e = list_->edges;
  std::size_t const count = std::min(out.size(), e.size() - pos_);
  std::copy_n(e.begin() + static_cast<std::ptrdiff_t>(pos_), count, out.begin());
  pos_ += count;
  return count;
}

DgelFileSource::DgelFileSource(std::filesystem::path const& path)
  : path_(path)
  , file_(std::fopen(path.c_str(), "rb"))
{
  if (!file_) throw Error("cannot open " + path.string());
  std::array<unsigned char, kHeaderBytes> h{};
  if (std::fread(h.data(), 1, h.size(), file_.get()) != h.size() || !std::equal(kMagic.begin(), kMagic.end(), h.begin()))
    throw Error(path.string() + " is not a DGEL1 file");
  n_vertices_ = static_cast<VertexId>(get_le(h.data() + kMagic.size(), 4));
  m_ = get_le(h.data() + kMagic.size() + 4, 8);
}

std::size_t DgelFileSource::read(std::span<DirectedEdge> out)
{
  std::size_t const want = static_cast<std::size_t>(std::min<EdgeCount>(out.size(), m_ - read_));
  if (want == 0) return 0;
  std::vector<unsigned char> buf(want * kRecordBytes);
  if (std::fread(buf.data(), 1, buf.size(), file_.get()) != buf.size())
    throw Error(path_.string() + ": truncated DGEL1 file");
  for (std::size_t i = 0; i < want; ++i) {
    unsigned char const* r = buf.data() + i * kRecordBytes;
    auto& e = out[i];
    e.source = static_cast<VertexId>(get_le(r, 4));
    e.target = static_cast<VertexId>(get_le(r + 4, 4));
    auto const ts = get_le(r + 8, 8);
    e.timestamp = ts == 0 ? std::nullopt : std::optional<std::uint64_t>(ts);
    if (e.source >= n_vertices_ || e.target >= n_vertices_)
      throw Error(path_.string() + ": vertex id outside the header's range");
  }
  read_ += want;
  return want;
}

void DgelFileSource::rewind()
{
  if (std::fseek(file_.get(), static_cast<long>(kHeaderBytes), SEEK_SET) != 0)
    throw Error("cannot rewind " + path_.string());
  read_ = 0;
}

DirectedEdgeList collect(EdgeSource& source)
{
  DirectedEdgeList list;
  list.n_vertices = source.n_vertices();
  if (auto hint = source.size_hint()) list.edges.reserve(*hint);
  std::vector<DirectedEdge> buf(1 << 14);
  std::size_t got;
  while ((got = source.read(buf)) > 0)
    list.edges.insert(list.edges.end(), buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(got));
  return list;
}

} // namespace dds
