#include "dds/edge_source.hpp"
#include "dds/fixtures.hpp"
#include "dds/ingest.hpp"
#include "dds/numeric.hpp"
#include "dds/oracle.hpp"
#include "dds/stream.hpp"

#include <doctest.h>

#include <cmath>

using namespace dds;

namespace {

DirectedEdgeList single_edge()
{
  DirectedEdgeList g;
  g.add(0, 1);
  return g;
}

StreamState fresh_state(VertexId side, long double D, long double z, double eps, std::uint64_t n)
{
  return StreamState(side, Thresholds::from_values(D, z, static_cast<long double>(eps)), n);
}

// Each directed edge repeated `copies` times, copies interleaved.
DirectedEdgeList replicate(DirectedEdgeList const& g, int copies)
{
  DirectedEdgeList out;
  out.n_vertices = g.n_vertices;
  for (int c = 0; c < copies; ++c)
    for (auto const& e : g.edges)
      out.add(e.source, e.target);
  return out;
}

} // namespace

TEST_CASE("level cap")
{
  CHECK(level_cap_for(0.2, 8) == static_cast<std::uint32_t>(std::ceil(2 * std::log(8.0) / std::log(1.2))));
  CHECK(level_cap_for(10.0, 4) == 2);
  CHECK(level_cap_for(0.2, 1) == 0);
}

TEST_CASE("update with k = 1/2 levels both endpoints")
{
  auto st = fresh_state(2, 1, 1, 0.2, 4);
  CHECK(st.need_s == 1);
  stream_update(st, 0, 1);
  CHECK(st.l_s[0] == 1);
  CHECK(st.l_t[1] == 1);
  CHECK(st.d_s[0] == 0);
  CHECK(st.d_t[1] == 0);
  CHECK(st.counter_count() == 8);
}

TEST_CASE("update only charges the lower endpoint")
{
  auto st = fresh_state(2, 4, 1, 0.2, 4);
  REQUIRE(st.need_s == 2);
  st.l_s[0] = 3;
  st.l_t[1] = 1;
  stream_update(st, 0, 1);
  CHECK(st.d_s[0] == 0);
  CHECK(st.d_t[1] == 1);
  CHECK(st.l_s[0] == 3);
  CHECK(st.l_t[1] == 1);
}

TEST_CASE("two identical edges reach level 1 at k = 2")
{
  auto st = fresh_state(2, 4, 1, 0.2, 4);
  stream_update(st, 0, 1);
  CHECK(st.l_s[0] == 0);
  CHECK(st.d_s[0] == 1);
  CHECK(st.d_t[1] == 1);
  stream_update(st, 0, 1);
  CHECK(st.l_s[0] == 1);
  CHECK(st.l_t[1] == 1);
  CHECK(st.d_s[0] == 0);
  CHECK(st.d_t[1] == 0);
}

TEST_CASE("finalize on a single edge depends on the shrink factor")
{
  auto wide = fresh_state(2, 1, 1, 10.0, 4);
  stream_update(wide, 0, 1);
  auto const out = stream_finalize(wide);
  REQUIRE(out);
  CHECK(*out == VertexPair{{0}, {1}});

  auto narrow = fresh_state(2, 1, 1, 0.2, 4);
  stream_update(narrow, 0, 1);
  CHECK_FALSE(stream_finalize(narrow));
}

TEST_CASE("empty stream has no output")
{
  auto st = fresh_state(3, 1, 1, 0.2, 6);
  CHECK_FALSE(stream_finalize(st));
  DirectedEdgeList empty;
  empty.n_vertices = 3;
  auto const r = run_stream_grid(empty, GuessGrid(0.2, 6));
  CHECK_FALSE(r.selected);
}

TEST_CASE("level sizes are suffix counts")
{
  std::vector<std::uint32_t> ls{0, 1, 2, 5}, lt{3, 3, 0, 1};
  auto const sizes = level_sizes(ls, lt, 3);
  CHECK(sizes.s == std::vector<std::size_t>{4, 3, 2, 1});
  CHECK(sizes.t == std::vector<std::size_t>{4, 3, 2, 2});
}

TEST_CASE("select level rejects an empty qualifying level")
{
  auto const th = Thresholds::from_values(1, 1, 0.2L);
  LevelSizes sizes{{4, 4, 0}, {4, 4, 0}};
  CHECK(select_level(sizes, th) == std::optional<std::uint32_t>{1});
  LevelSizes late{{4, 1, 0}, {4, 1, 0}};
  CHECK_FALSE(select_level(late, th));
}

TEST_CASE("counters obey their invariants")
{
  auto const g = fixtures::random_digraph(30, 0.2, 2);
  GuessGrid const grid(0.2, 60);
  for (std::size_t c = 0; c < grid.size(); c += 5) {
    StreamState st(30, grid.thresholds(c), 60);
    auto prev = st;
    for (auto const& e : g.edges) {
      stream_update(st, e.source, e.target);
      for (VertexId v = 0; v < 30; ++v) {
        CHECK(st.l_s[v] >= prev.l_s[v]);
        CHECK(st.l_t[v] >= prev.l_t[v]);
        CHECK(st.d_s[v] < st.need_s);
        CHECK(st.d_t[v] < st.need_t);
      }
      prev = st;
    }
  }
}

TEST_CASE("grid block matches per-cell states")
{
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto const g = fixtures::random_digraph(20, 0.25, seed);
    GuessGrid const grid(0.3, 40);
    StreamGrid plain(20, grid);
    StreamGrid incremental(20, grid, true);
    std::vector<StreamState> states;
    for (std::size_t c = 0; c < grid.size(); ++c)
      states.emplace_back(20, grid.thresholds(c), 40);
    for (auto const& e : g.edges) {
      plain.update(e.source, e.target);
      auto const w = incremental.update_counted(e.source, e.target);
      CHECK(w.cells == grid.size());
      CHECK(w.counter_writes <= 4 * grid.size());
      for (auto& st : states)
        stream_update(st, e.source, e.target);
    }
    CHECK(plain.counter_count() == 4 * 20 * grid.size());
    for (std::size_t c = 0; c < grid.size(); ++c) {
      auto const x = plain.extract(c);
      CHECK(x.l_s == states[c].l_s);
      CHECK(x.l_t == states[c].l_t);
      CHECK(x.d_s == states[c].d_s);
      CHECK(x.d_t == states[c].d_t);
      auto const inc = incremental.level_sizes(c);
      auto const scan = incremental.scan_level_sizes(c);
      CHECK(inc.s == scan.s);
      CHECK(inc.t == scan.t);
      CHECK(plain.finalize(c) == stream_finalize(states[c]));
    }
  }
}

TEST_CASE("sub-block matches the same cells of the full grid")
{
  auto const g = fixtures::random_digraph(15, 0.3, 5);
  GuessGrid const grid(0.5, 30);
  StreamGrid full(15, grid);
  StreamGrid part(15, grid, grid.z_count(), 2 * grid.z_count());
  for (auto const& e : g.edges) {
    full.update(e.source, e.target);
    part.update(e.source, e.target);
  }
  for (std::size_t c = 0; c < part.cell_count(); ++c)
    CHECK(part.finalize(c) == full.finalize(grid.z_count() + c));
  CHECK_THROWS_AS(StreamGrid(15, grid, grid.size() - 1, 2), InvalidArgument);
}

TEST_CASE("anytime query equals a fresh run on the prefix")
{
  auto const g = fixtures::random_digraph(40, 0.15, 7);
  GuessGrid const grid(0.2, 80);
  StreamGrid state(40, grid);
  CHECK_FALSE(query_anytime(state, grid));
  std::size_t const checkpoints[] = {g.size() / 4, g.size() / 2, g.size()};
  std::size_t done = 0;
  for (std::size_t stop : checkpoints) {
    for (; done < stop; ++done)
      state.update(g.edges[done].source, g.edges[done].target);
    DirectedEdgeList prefix;
    prefix.n_vertices = g.n_vertices;
    prefix.edges.assign(g.edges.begin(), g.edges.begin() + static_cast<std::ptrdiff_t>(stop));
    auto const fresh = run_stream_grid(prefix, grid);
    auto const now = query_anytime(state, grid);
    REQUIRE(now.has_value() == fresh.selected.has_value());
    if (now) {
      CHECK(now->cell == fresh.selected->cell);
      CHECK(now->level == fresh.selected->level);
      CHECK(now->pair == fresh.selected->pair);
    }
  }
  StreamGrid partial(40, grid, 0, 3);
  CHECK_THROWS_AS((void)query_anytime(partial, grid), InvalidArgument);
}

TEST_CASE("selection takes the largest D, then the smallest z")
{
  auto const g = fixtures::random_digraph(40, 0.2, 3);
  GuessGrid const grid(0.2, 80);
  auto const r = run_stream_grid(g, grid);
  REQUIRE(r.selected);
  auto const chosen = grid.cell(r.selected->cell);
  StreamGrid state(40, grid);
  for (auto const& e : g.edges)
    state.update(e.source, e.target);
  for (std::size_t c = 0; c < grid.size(); ++c) {
    auto const cell = grid.cell(c);
    bool const later = cell.d_index > chosen.d_index || (cell.d_index == chosen.d_index && cell.z_index < chosen.z_index);
    if (later) CHECK_FALSE(state.finalize(c));
  }
  CHECK(r.selected->density == density(to_bipartite(g), r.selected->pair));
}

TEST_CASE("chunked replay gives the same answers")
{
  auto const g = fixtures::random_digraph(50, 0.1, 12);
  GuessGrid const grid(0.2, 100);
  auto const whole = run_stream_grid(g, grid);
  StreamRunOptions tight;
  tight.memory_budget_bytes = grid.z_count() * StreamGrid::bytes_per_cell(50, level_cap_for(0.2, 100), false) * 2;
  auto const chunked = run_stream_grid(g, grid, tight);
  CHECK(whole.chunks == 1);
  CHECK(chunked.chunks > 1);
  REQUIRE(whole.selected.has_value() == chunked.selected.has_value());
  CHECK(whole.selected->cell == chunked.selected->cell);
  CHECK(whole.selected->pair == chunked.selected->pair);
  REQUIRE(whole.per_z.size() == chunked.per_z.size());
  for (std::size_t z = 0; z < whole.per_z.size(); ++z) {
    REQUIRE(whole.per_z[z].has_value() == chunked.per_z[z].has_value());
    if (whole.per_z[z]) CHECK(whole.per_z[z]->pair == chunked.per_z[z]->pair);
  }
  StreamRunOptions single = tight;
  single.per_z = false;
  auto const fast = run_stream_grid(g, grid, single);
  CHECK(fast.selected->cell == whole.selected->cell);
  CHECK(fast.chunks <= chunked.chunks);
}

TEST_CASE("work and memory counters")
{
  auto const g = fixtures::random_digraph(30, 0.2, 1);
  GuessGrid const grid(0.2, 60);
  StreamRunOptions opts;
  opts.count_work = true;
  auto const r = run_stream_grid(g, grid, opts);
  CHECK(r.counter_ints_per_cell == 4 * 30);
  CHECK(r.max_cells_per_edge == grid.size());
  CHECK(r.max_counter_writes_per_edge <= 4 * grid.size());
  CHECK(r.max_counter_writes_per_edge >= grid.size());
  CHECK(r.edges == g.size());
}

TEST_CASE("timing batches cover the stream")
{
  auto const g = fixtures::random_digraph(30, 0.2, 1);
  GuessGrid const grid(0.2, 60);
  StreamRunOptions opts;
  opts.timing = true;
  opts.batch_size = 50;
  opts.timing_repeats = 2;
  auto const r = run_stream_grid(g, grid, opts);
  CHECK(r.timing.size() == (g.size() + 49) / 50);
  for (auto const& b : r.timing)
    CHECK(b.nanos_per_edge_max >= b.nanos_per_edge_mean);
  opts.batch_size = 0;
  CHECK_THROWS_AS((void)run_stream_grid(g, grid, opts), InvalidArgument);
}

TEST_CASE("recount pass counts edges of each pair")
{
  auto const g = fixtures::bidirected_clique(4);
  MemoryEdgeSource src(g);
  VertexPair const a{{0, 1}, {2, 3}}, b{{0}, {}};
  VertexPair const* pairs[] = {&a, &b};
  auto const d = recount_densities(src, pairs);
  CHECK(d[0].edge_count == 4);
  CHECK(d[0].value == doctest::Approx(2.0));
  CHECK(d[1].value == 0.0);
}

TEST_CASE("endpoints outside the declared vertex range are rejected")
{
  DirectedEdgeList g;
  g.edges.push_back({0, 5, std::nullopt});
  g.n_vertices = 3;
  CHECK_THROWS_AS((void)run_stream_grid(g, GuessGrid(0.2, 6)), InvalidArgument);
}

TEST_CASE("bidirected K4 and K_{6,6}")
{
  auto const k4 = fixtures::bidirected_clique(4);
  auto const r4 = run_stream_grid(k4, GuessGrid(0.2, 8));
  REQUIRE(r4.selected);
  double const bound4 = 3.0 / (16 * 1.44 * static_cast<double>(numeric::log_base(8, 0.2L)));
  CHECK(r4.selected->density.value >= bound4);

  auto const k66 = fixtures::complete_bipartite(6, 6);
  auto const r66 = run_stream_grid(k66, GuessGrid(0.2, 24));
  REQUIRE(r66.selected);
  double const bound66 = 6.0 / (16 * 1.44 * static_cast<double>(numeric::log_base(24, 0.2L)));
  CHECK(r66.selected->density.value >= bound66);
}

TEST_CASE("single edge stream at eps = 0.2 reports nothing")
{
  auto const r = run_stream_grid(single_edge(), GuessGrid(0.2, 4));
  CHECK_FALSE(r.selected);
  auto const wide = run_stream_grid(single_edge(), GuessGrid(10.0, 4));
  REQUIRE(wide.selected);
  CHECK(wide.selected->density.value == doctest::Approx(1.0));
}

TEST_CASE("dense multigraphs keep every level non-empty at small guesses")
{
  double const eps = 0.2;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto const base = fixtures::random_digraph(8, 0.5, seed);
    auto const g = order_stream(replicate(base, 150), StreamOrder{OrderMode::shuffle, seed});
    auto const b = to_bipartite(g);
    auto const best = exact_densest(b);
    long double const n = static_cast<long double>(b.n());
    long double const limit = best.density.value / (8 * (1 + eps) * numeric::log_base(n, eps));
    long double const zstar = std::sqrt(static_cast<long double>(best.pair.sources.size()) / static_cast<long double>(best.pair.targets.size()));
    GuessGrid const grid(eps, b.n());
    StreamGrid state(b.side_size(), grid);
    for (auto const& e : g.edges)
      state.update(e.source, e.target);
    std::size_t checked = 0;
    for (std::size_t c = 0; c < grid.size(); ++c) {
      auto const th = grid.thresholds(c);
      if (th.D > limit) continue;
      if (th.z * (1 + eps) < zstar || th.z > zstar * (1 + eps)) continue;
      auto const sizes = state.scan_level_sizes(c);
      for (std::size_t i = 0; i < sizes.s.size(); ++i) {
        CHECK(sizes.s[i] > 0);
        CHECK(sizes.t[i] > 0);
      }
      ++checked;
    }
    CAPTURE(seed);
    CHECK(checked > 0);
    auto const r = run_stream_grid(g, grid);
    REQUIRE(r.selected);
    double const bound = best.density.value / (16 * (1 + eps) * (1 + eps) * static_cast<double>(numeric::log_base(n, eps)));
    CHECK(r.selected->density.value >= bound * (1 - 1e-9));
  }
}

TEST_CASE("runs over a DGEL file match the in-memory run")
{
  auto const g = fixtures::random_digraph(25, 0.2, 4);
  auto const path = std::filesystem::temp_directory_path() / "dds_stream_test.dgel";
  write_dgel(path, g);
  DgelFileSource file(path);
  GuessGrid const grid(0.2, 50);
  auto const a = run_stream_grid(file, grid);
  auto const b = run_stream_grid(g, grid);
  REQUIRE(a.selected.has_value() == b.selected.has_value());
  if (a.selected) CHECK(a.selected->pair == b.selected->pair);
  std::filesystem::remove(path);
}
