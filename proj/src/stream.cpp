#include "dds/stream.hpp"

#include "dds/cpu_clock.hpp"
#include "dds/numeric.hpp"

#include <algorithm>
#include <limits>

namespace dds {

namespace {

std::uint32_t clamp_need(std::uint64_t need) noexcept
{
  return static_cast<std::uint32_t>(std::clamp<std::uint64_t>(need, 1, std::numeric_limits<std::uint32_t>::max()));
}

VertexPair pair_at_level(std::span<std::uint32_t const> l_s, std::span<std::uint32_t const> l_t, std::uint32_t level)
{
  VertexPair p;
  for (std::size_t v = 0; v < l_s.size(); ++v)
    if (l_s[v] >= level) p.sources.push_back(static_cast<VertexId>(v));
  for (std::size_t v = 0; v < l_t.size(); ++v)
    if (l_t[v] >= level) p.targets.push_back(static_cast<VertexId>(v));
  return p;
}

// Turns per-level histograms (levels above the cap folded into the cap) into
// suffix counts |{v : l(v) >= i}|.
void suffix_sum(std::vector<std::size_t>& h)
{
  for (std::size_t i = h.size(); i-- > 1;)
    h[i - 1] += h[i];
}

} // namespace

std::uint32_t level_cap_for(double epsilon, std::uint64_t n)
{
  long double const l = 2 * numeric::log_base(static_cast<long double>(n), epsilon);
  return static_cast<std::uint32_t>(std::max<long double>(0, std::ceil(l - numeric::slack_for(l))));
}

StreamState::StreamState(VertexId side_size, Thresholds const& th, std::uint64_t n)
  : thresholds(th)
  , need_s(clamp_need(th.min_degree_s))
  , need_t(clamp_need(th.min_degree_t))
  , level_cap(level_cap_for(static_cast<double>(th.epsilon), n))
  , l_s(side_size, 0)
  , l_t(side_size, 0)
  , d_s(side_size, 0)
  , d_t(side_size, 0)
{
}

void stream_update(StreamState& st, VertexId u, VertexId v) noexcept
{
  std::uint32_t const lu = st.l_s[u];
  std::uint32_t const lv = st.l_t[v];
  if (lu <= lv) ++st.d_s[u];
  if (lu >= lv) ++st.d_t[v];
  if (st.d_s[u] >= st.need_s) {
    ++st.l_s[u];
    st.d_s[u] = 0;
  }
  if (st.d_t[v] >= st.need_t) {
    ++st.l_t[v];
    st.d_t[v] = 0;
  }
}

LevelSizes level_sizes(std::span<std::uint32_t const> l_s, std::span<std::uint32_t const> l_t,
                       std::uint32_t level_cap)
{
  LevelSizes out;
  out.s.assign(std::size_t{level_cap} + 1, 0);
  out.t.assign(std::size_t{level_cap} + 1, 0);
  for (auto l : l_s)
    ++out.s[std::min(l, level_cap)];
  for (auto l : l_t)
    ++out.t[std::min(l, level_cap)];
  suffix_sum(out.s);
  suffix_sum(out.t);
  return out;
}

std::optional<std::uint32_t> select_level(LevelSizes const& sizes, Thresholds const& th)
{
  long double const z2 = th.z_squared();
  long double const shrink = 1 + th.epsilon;
  for (std::size_t i = 1; i < sizes.s.size(); ++i) {
    auto const s = static_cast<long double>(sizes.s[i]);
    auto const t = static_cast<long double>(sizes.t[i]);
    bool const by_s = numeric::approx_ge(s, z2 * t) && numeric::approx_ge(s, sizes.s[i - 1] / shrink);
    bool const by_t = numeric::approx_le(s, z2 * t) && numeric::approx_ge(t, sizes.t[i - 1] / shrink);
    if (by_s || by_t) {
      if (sizes.s[i] == 0 || sizes.t[i] == 0) return std::nullopt;
      return static_cast<std::uint32_t>(i);
    }
  }
  return std::nullopt;
}

std::optional<VertexPair> stream_finalize(StreamState const& st)
{
  auto const level = select_level(level_sizes(st.l_s, st.l_t, st.level_cap), st.thresholds);
  if (!level) return std::nullopt;
  return pair_at_level(st.l_s, st.l_t, *level);
}

// StreamGrid

StreamGrid::StreamGrid(VertexId side_size, GuessGrid const& grid, std::size_t first_cell, std::size_t cell_count,
                       bool incremental_levels)
  : side_size_(side_size)
  , first_cell_(first_cell)
  , cells_(cell_count)
  , level_cap_(level_cap_for(grid.epsilon(), grid.n()))
  , incremental_(incremental_levels)
{
  if (first_cell + cell_count > grid.size()) throw InvalidArgument("cell block outside the guess grid");
  for (std::size_t c = 0; c < cells_; ++c) {
    thresholds_.push_back(grid.thresholds(first_cell + c));
    need_s_.push_back(clamp_need(thresholds_.back().min_degree_s));
    need_t_.push_back(clamp_need(thresholds_.back().min_degree_t));
  }
  src_.assign(std::size_t{side_size} * cells_, Counter{});
  dst_.assign(std::size_t{side_size} * cells_, Counter{});
  if (incremental_) {
    std::size_t const width = std::size_t{level_cap_} + 1;
    at_s_.assign(cells_ * width, 0);
    at_t_.assign(cells_ * width, 0);
    for (std::size_t c = 0; c < cells_; ++c) {
      at_s_[c * width] = side_size;
      at_t_[c * width] = side_size;
    }
  }
}

StreamGrid::StreamGrid(VertexId side_size, GuessGrid const& grid, bool incremental_levels)
  : StreamGrid(side_size, grid, 0, grid.size(), incremental_levels)
{
}

std::size_t StreamGrid::bytes_per_cell(VertexId side_size, std::uint32_t level_cap, bool incremental)
{
  std::size_t bytes = 2 * std::size_t{side_size} * sizeof(Counter) + sizeof(Thresholds) + 8;
  if (incremental) bytes += 2 * (std::size_t{level_cap} + 1) * sizeof(std::uint32_t);
  return bytes;
}

template <bool Count>
UpdateWork StreamGrid::apply(VertexId u, VertexId v) noexcept
{
  UpdateWork work;
  Counter* a = src_.data() + std::size_t{u} * cells_;
  Counter* b = dst_.data() + std::size_t{v} * cells_;
  std::size_t const width = std::size_t{level_cap_} + 1;
  for (std::size_t c = 0; c < cells_; ++c) {
    std::uint32_t const la = a[c].level;
    std::uint32_t const lb = b[c].level;
    if (la <= lb && ++a[c].degree >= need_s_[c]) {
      a[c].degree = 0;
      ++a[c].level;
      if (incremental_ && la + 1 <= level_cap_) ++at_s_[c * width + la + 1];
      if constexpr (Count) ++work.counter_writes;
    }
    if (la >= lb && ++b[c].degree >= need_t_[c]) {
      b[c].degree = 0;
      ++b[c].level;
      if (incremental_ && lb + 1 <= level_cap_) ++at_t_[c * width + lb + 1];
      if constexpr (Count) ++work.counter_writes;
    }
    if constexpr (Count) work.counter_writes += std::size_t{la <= lb} + std::size_t{la >= lb};
  }
  if constexpr (Count) work.cells = cells_;
  return work;
}

void StreamGrid::update(VertexId u, VertexId v) noexcept
{
  apply<false>(u, v);
}

UpdateWork StreamGrid::update_counted(VertexId u, VertexId v) noexcept
{
  return apply<true>(u, v);
}

LevelSizes StreamGrid::scan_level_sizes(std::size_t local) const
{
  LevelSizes out;
  out.s.assign(std::size_t{level_cap_} + 1, 0);
  out.t.assign(std::size_t{level_cap_} + 1, 0);
  for (std::size_t v = 0; v < side_size_; ++v) {
    ++out.s[std::min(src_[v * cells_ + local].level, level_cap_)];
    ++out.t[std::min(dst_[v * cells_ + local].level, level_cap_)];
  }
  suffix_sum(out.s);
  suffix_sum(out.t);
  return out;
}

LevelSizes StreamGrid::level_sizes(std::size_t local) const
{
  if (!incremental_) return scan_level_sizes(local);
  std::size_t const width = std::size_t{level_cap_} + 1;
  LevelSizes out;
  out.s.assign(at_s_.begin() + static_cast<std::ptrdiff_t>(local * width),
               at_s_.begin() + static_cast<std::ptrdiff_t>((local + 1) * width));
  out.t.assign(at_t_.begin() + static_cast<std::ptrdiff_t>(local * width),
               at_t_.begin() + static_cast<std::ptrdiff_t>((local + 1) * width));
  return out;
}

VertexPair StreamGrid::level_pair(std::size_t local, std::uint32_t level) const
{
  VertexPair p;
  for (std::size_t v = 0; v < side_size_; ++v) {
    if (src_[v * cells_ + local].level >= level) p.sources.push_back(static_cast<VertexId>(v));
    if (dst_[v * cells_ + local].level >= level) p.targets.push_back(static_cast<VertexId>(v));
  }
  return p;
}

std::optional<VertexPair> StreamGrid::finalize(std::size_t local) const
{
  auto const level = select_level(level_sizes(local), thresholds_[local]);
  if (!level) return std::nullopt;
  return level_pair(local, *level);
}

StreamState StreamGrid::extract(std::size_t local) const
{
  StreamState st;
  st.thresholds = thresholds_[local];
  st.need_s = need_s_[local];
  st.need_t = need_t_[local];
  st.level_cap = level_cap_;
  for (std::size_t v = 0; v < side_size_; ++v) {
    auto const& a = src_[v * cells_ + local];
    auto const& b = dst_[v * cells_ + local];
    st.l_s.push_back(a.level);
    st.d_s.push_back(a.degree);
    st.l_t.push_back(b.level);
    st.d_t.push_back(b.degree);
  }
  return st;
}

std::optional<StreamSelection> query_anytime(StreamGrid const& grid_state, GuessGrid const& grid)
{
  if (grid_state.first_cell() != 0 || grid_state.cell_count() != grid.size())
    throw InvalidArgument("query_anytime needs state for the whole grid");
  for (std::size_t d = grid.d_count(); d-- > 0;) {
    for (std::size_t z = 0; z < grid.z_count(); ++z) {
      std::size_t const cell = grid.index_of(d, z);
      auto const level = select_level(grid_state.level_sizes(cell), grid_state.thresholds(cell));
      if (level) return StreamSelection{cell, *level, grid_state.level_pair(cell, *level), {}};
    }
  }
  return std::nullopt;
}

std::vector<DensityValue> recount_densities(EdgeSource& source, std::span<VertexPair const* const> pairs)
{
  VertexId const side = source.n_vertices();
  std::vector<std::vector<char>> in_s, in_t;
  for (auto const* p : pairs) {
    in_s.push_back(membership(p->sources, side));
    in_t.push_back(membership(p->targets, side));
  }
  std::vector<EdgeCount> counts(pairs.size(), 0);
  source.rewind();
  std::vector<DirectedEdge> buf(1 << 14);
  std::size_t got;
  while ((got = source.read(buf)) > 0)
    for (std::size_t i = 0; i < got; ++i)
      for (std::size_t k = 0; k < pairs.size(); ++k)
        counts[k] += static_cast<EdgeCount>(in_s[k][buf[i].source] && in_t[k][buf[i].target]);
  std::vector<DensityValue> out;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    out.push_back(make_density(counts[k], pairs[k]->sources.size(), pairs[k]->targets.size()));
  return out;
}

namespace {

struct PassOutcome
{
  std::vector<std::optional<StreamSelection>> per_z;
  std::vector<std::uint64_t> edge_nanos;
  std::size_t chunks = 0;
  std::size_t passes = 0;
  EdgeCount edges = 0;
  std::size_t max_cells = 0;
  std::size_t max_writes = 0;
};

PassOutcome run_chunks(EdgeSource& source, GuessGrid const& grid, StreamRunOptions const& options)
{
  VertexId const side = source.n_vertices();
  std::size_t const zc = grid.z_count();
  std::uint32_t const cap = level_cap_for(grid.epsilon(), grid.n());
  std::size_t const row_bytes = zc * StreamGrid::bytes_per_cell(side, cap, options.incremental_levels);
  std::size_t const rows_per_chunk =
    std::clamp<std::size_t>(options.memory_budget_bytes / std::max<std::size_t>(row_bytes, 1), 1, grid.d_count());

  PassOutcome out;
  out.per_z.resize(zc);
  std::size_t undecided = zc;
  std::vector<DirectedEdge> buf(4096);

  for (std::size_t d_hi = grid.d_count(); d_hi > 0;) {
    std::size_t const d_lo = d_hi >= rows_per_chunk ? d_hi - rows_per_chunk : 0;
    StreamGrid block(side, grid, grid.index_of(d_lo, 0), (d_hi - d_lo) * zc, options.incremental_levels);
    ++out.chunks;
    ++out.passes;
    source.rewind();
    EdgeCount e = 0;
    std::size_t got;
    while ((got = source.read(buf)) > 0) {
      for (std::size_t i = 0; i < got; ++i, ++e) {
        VertexId const u = buf[i].source;
        VertexId const v = buf[i].target;
        if (u >= side || v >= side) throw InvalidArgument("edge endpoint outside [0, n_vertices)");
        if (options.timing) {
          auto const t0 = thread_cpu_nanos();
          block.update(u, v);
          auto const t1 = thread_cpu_nanos();
          if (out.edge_nanos.size() <= e) out.edge_nanos.resize(e + 1, 0);
          out.edge_nanos[e] += t1 - t0;
        } else if (options.count_work) {
          auto const w = block.update_counted(u, v);
          out.max_cells = std::max(out.max_cells, w.cells);
          out.max_writes = std::max(out.max_writes, w.counter_writes);
        } else {
          block.update(u, v);
        }
      }
    }
    out.edges = e;

    bool found_any = false;
    for (std::size_t z = 0; z < zc; ++z) {
      if (out.per_z[z]) continue;
      for (std::size_t d = d_hi; d-- > d_lo;) {
        std::size_t const local = grid.index_of(d, z) - block.first_cell();
        auto const level = select_level(block.level_sizes(local), block.thresholds(local));
        if (!level) continue;
        out.per_z[z] = StreamSelection{grid.index_of(d, z), *level, block.level_pair(local, *level), {}};
        --undecided;
        found_any = true;
        break;
      }
    }
    d_hi = d_lo;
    if (options.timing) continue;
    if (undecided == 0 || (!options.per_z && found_any)) break;
  }
  return out;
}

} // namespace

StreamRunResult run_stream_grid(EdgeSource& source, GuessGrid const& grid, StreamRunOptions const& options)
{
  if (options.timing && options.batch_size == 0) throw InvalidArgument("batch_size must be positive");
  StreamRunResult result;
  result.counter_ints_per_cell = 4 * std::size_t{source.n_vertices()};

  unsigned const repeats = options.timing ? std::max(1u, options.timing_repeats) : 1;
  PassOutcome run;
  for (unsigned r = 0; r < repeats; ++r) {
    run = run_chunks(source, grid, options);
    result.passes += run.passes;
    if (!options.timing) break;
    std::size_t const batches = (run.edge_nanos.size() + options.batch_size - 1) / options.batch_size;
    if (r == 0) result.timing.resize(batches);
    for (std::size_t b = 0; b < batches; ++b) {
      std::size_t const lo = b * options.batch_size;
      std::size_t const hi = std::min(lo + options.batch_size, run.edge_nanos.size());
      std::uint64_t total = 0, worst = 0;
      for (std::size_t e = lo; e < hi; ++e) {
        total += run.edge_nanos[e];
        worst = std::max(worst, run.edge_nanos[e]);
      }
      BatchTiming const t{b, static_cast<double>(worst), static_cast<double>(total) / static_cast<double>(hi - lo)};
      auto& slot = result.timing[b];
      if (r == 0) {
        slot = t;
      } else {
        slot.nanos_per_edge_max = std::min(slot.nanos_per_edge_max, t.nanos_per_edge_max);
        slot.nanos_per_edge_mean = std::min(slot.nanos_per_edge_mean, t.nanos_per_edge_mean);
      }
    }
  }
  result.edges = run.edges;
  result.chunks = run.chunks;
  result.max_cells_per_edge = run.max_cells;
  result.max_counter_writes_per_edge = run.max_writes;

  for (std::size_t z = 0; z < run.per_z.size(); ++z) {
    auto const& cand = run.per_z[z];
    if (!cand) continue;
    if (!result.selected || grid.cell(cand->cell).d_index > grid.cell(result.selected->cell).d_index)
      result.selected = cand;
  }
  if (options.per_z) result.per_z = std::move(run.per_z);

  if (options.recount) {
    std::vector<VertexPair const*> pairs;
    std::vector<StreamSelection*> slots;
    for (auto& s : result.per_z)
      if (s) {
        pairs.push_back(&s->pair);
        slots.push_back(&*s);
      }
    if (result.selected) {
      pairs.push_back(&result.selected->pair);
      slots.push_back(&*result.selected);
    }
    if (!pairs.empty()) {
      auto const densities = recount_densities(source, pairs);
      ++result.passes;
      for (std::size_t k = 0; k < slots.size(); ++k)
        slots[k]->density = densities[k];
    }
  }
  return result;
}

StreamRunResult run_stream_grid(DirectedEdgeList const& stream, GuessGrid const& grid, StreamRunOptions const& options)
{
  MemoryEdgeSource source(stream);
  return run_stream_grid(source, grid, options);
}

} // namespace dds
