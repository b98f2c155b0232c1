#include "dds/fixtures.hpp"
#include "dds/numeric.hpp"
#include "dds/oracle.hpp"
#include "dds/peel.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace dds;

namespace {

struct NaiveOutcome
{
  VertexPair pair;
  std::size_t iterations = 0;
};

// Recomputes every degree from the edge list in each iteration.
NaiveOutcome naive_peel(BipartiteGraph const& g, Thresholds const& th)
{
  VertexId const side = g.side_size();
  std::vector<char> in_s(side, 1), in_t(side, 1);
  long double const keep = th.epsilon / (1 + th.epsilon);
  NaiveOutcome out;
  while (true) {
    ++out.iterations;
    std::vector<std::size_t> ds(side), dt(side);
    for (std::size_t e = 0; e < g.m(); ++e) {
      auto const u = g.sources()[e];
      auto const v = g.targets()[e];
      if (in_s[u] && in_t[v]) {
        ++ds[u];
        ++dt[v];
      }
    }
    std::vector<VertexId> a, b;
    std::size_t s = 0, t = 0;
    for (VertexId v = 0; v < side; ++v) {
      s += in_s[v];
      t += in_t[v];
      if (in_s[v] && !numeric::approx_ge(ds[v], th.k_s)) a.push_back(v);
      if (in_t[v] && !numeric::approx_ge(dt[v], th.k_t)) b.push_back(v);
    }
    long double const ls = s, lt = t;
    if (numeric::approx_ge(ls, th.z_squared() * lt) && numeric::approx_le(a.size(), keep * ls)) break;
    if (numeric::approx_le(ls, th.z_squared() * lt) && numeric::approx_le(b.size(), keep * lt)) break;
    for (VertexId v : a) in_s[v] = 0;
    for (VertexId v : b) in_t[v] = 0;
  }
  out.pair = pair_from_flags(in_s, in_t);
  return out;
}

std::size_t floor_log(long double x, long double eps)
{
  if (x <= 1) return 0;
  return static_cast<std::size_t>(std::floor(numeric::log_base(x, eps) + 1e-9L));
}

} // namespace

TEST_CASE("K4 at D = 3 stops at once with the whole graph")
{
  auto const g = to_bipartite(fixtures::bidirected_clique(4));
  auto const out = peel(g, Thresholds::from_values(3, 1, 0.2L));
  CHECK(out.iterations == 1);
  CHECK(out.exit == PeelExit::source_rule);
  CHECK(out.pair == g.full_pair());
  CHECK(density(g, out.pair).value == doctest::Approx(3.0));
}

TEST_CASE("single edge at D = 4 peels to nothing")
{
  DirectedEdgeList e;
  e.add(0, 1);
  auto const g = to_bipartite(e);
  auto const out = peel(g, Thresholds::from_values(4, 1, 0.2L));
  CHECK(out.pair.empty());
  CHECK(out.sizes.front() == std::pair<std::size_t, std::size_t>{2, 2});
}

TEST_CASE("empty graph")
{
  BipartiteGraph const g(4, std::span<DirectedEdge const>{});
  auto const out = peel(g, Thresholds::from_values(1, 1, 0.2L));
  CHECK(out.pair.empty());
  auto const grid = peel_grid(g, GuessGrid(0.2, g.n()));
  CHECK(grid.density.value == 0.0);
}

TEST_CASE("peel matches a degree-recounting reference")
{
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto const n = static_cast<VertexId>(3 + seed % 20);
    auto const g = to_bipartite(fixtures::random_digraph(n, 0.1 + 0.1 * static_cast<double>(seed % 6), seed));
    GuessGrid const grid(0.2 + 0.1 * static_cast<double>(seed % 3), g.n());
    for (std::size_t c = 0; c < grid.size(); c += 3) {
      auto const th = grid.thresholds(c);
      auto const fast = peel(g, th);
      auto const ref = naive_peel(g, th);
      CAPTURE(seed);
      CAPTURE(c);
      CHECK(fast.pair == ref.pair);
      CHECK(fast.iterations == ref.iterations);
    }
  }
}

TEST_CASE("sizes never grow and the output satisfies its stop rule")
{
  auto const g = to_bipartite(fixtures::random_digraph(40, 0.15, 9));
  GuessGrid const grid(0.2, g.n());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    auto const th = grid.thresholds(c);
    auto const out = peel(g, th);
    REQUIRE(out.sizes.size() == out.iterations);
    for (std::size_t i = 1; i < out.sizes.size(); ++i) {
      CHECK(out.sizes[i].first <= out.sizes[i - 1].first);
      CHECK(out.sizes[i].second <= out.sizes[i - 1].second);
    }
    CHECK(out.sizes.back() == std::pair{out.pair.sources.size(), out.pair.targets.size()});

    auto const sub = induced_subgraph(g, out.pair);
    auto const s = static_cast<long double>(out.pair.sources.size());
    auto const t = static_cast<long double>(out.pair.targets.size());
    std::size_t low_s = 0, low_t = 0;
    for (VertexId v : out.pair.sources)
      low_s += !numeric::approx_ge(sub.left_degree(v), th.k_s);
    for (VertexId v : out.pair.targets)
      low_t += !numeric::approx_ge(sub.right_degree(v), th.k_t);
    long double const keep = th.epsilon / (1 + th.epsilon);
    bool const source_ok = numeric::approx_ge(s, th.z_squared() * t) && numeric::approx_le(low_s, keep * s);
    bool const target_ok = numeric::approx_le(s, th.z_squared() * t) && numeric::approx_le(low_t, keep * t);
    CHECK((source_ok || target_ok));
  }
}

TEST_CASE("iterations stay within 2 ceil(log n) + 1 on every cell")
{
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto const g = to_bipartite(fixtures::random_digraph(30, 0.2, seed));
    for (double eps : {0.1, 0.2, 0.5}) {
      GuessGrid const grid(eps, g.n());
      auto const bound = static_cast<std::size_t>(2 * numeric::ceil_log_base(static_cast<long double>(g.n()), eps) + 1);
      for (std::size_t c = 0; c < grid.size(); ++c)
        CHECK(peel(g, grid.thresholds(c)).iterations <= bound);
    }
  }
}

TEST_CASE("stopping rules beat the adversary chain")
{
  auto const adv = to_bipartite(fixtures::make_peeling_adversary(5, 60));
  auto const th = Thresholds::from_values(4, 1, 0.2L);
  auto const guarded = peel(adv, th);
  auto const unguarded = peel_without_stopping(adv, th);
  auto const bound = static_cast<std::size_t>(2 * numeric::ceil_log_base(static_cast<long double>(adv.n()), 0.2L) + 1);
  CHECK(guarded.iterations <= bound);
  CHECK(unguarded.iterations >= 60);
  CHECK(unguarded.exit == PeelExit::exhausted);
  for (VertexId v = 0; v < 5; ++v)
    CHECK(std::binary_search(unguarded.pair.sources.begin(), unguarded.pair.sources.end(), v));
}

TEST_CASE("right guess reaches rho / (2 (1+eps)^3)")
{
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    auto const n = static_cast<VertexId>(3 + seed % 10);
    auto const g = to_bipartite(fixtures::random_digraph(n, 0.2 + 0.2 * static_cast<double>(seed % 4), seed + 100));
    auto const best = exact_densest(g);
    if (best.density.edge_count == 0) continue;
    double const eps = 0.2;
    GuessGrid const grid(eps, g.n());
    auto const di = std::min(floor_log(static_cast<long double>(best.density.value), eps), grid.d_count() - 1);
    long double const zstar = std::sqrt(static_cast<long double>(best.pair.sources.size()) / static_cast<long double>(best.pair.targets.size()));
    auto const zoff = static_cast<long double>(grid.z_count() / 2);
    auto const zj = static_cast<std::int64_t>(std::floor(std::log(zstar) / std::log1p(0.2L) + 1e-9L));
    auto const zi = static_cast<std::size_t>(std::clamp<std::int64_t>(zj + static_cast<std::int64_t>(zoff), 0, static_cast<std::int64_t>(grid.z_count() - 1)));
    auto const out = peel(g, grid.thresholds(grid.index_of(di, zi)));
    CAPTURE(seed);
    CHECK(density(g, out.pair).value >= best.density.value / (2 * std::pow(1 + eps, 3)) * (1 - 1e-9));
    CHECK(peel_grid(g, grid).density.value >= best.density.value / (2 * std::pow(1 + eps, 3)) * (1 - 1e-9));
  }
}

TEST_CASE("grid search examples")
{
  auto const k4 = to_bipartite(fixtures::bidirected_clique(4));
  CHECK(peel_grid(k4, GuessGrid(0.2, k4.n())).density.value == doctest::Approx(3.0));
  DirectedEdgeList fan;
  fan.add(0, 1);
  fan.add(0, 2);
  auto const f = to_bipartite(fan);
  CHECK(peel_grid(f, GuessGrid(0.2, f.n())).density.value >= std::sqrt(2.0) / (2 * 1.2));
}

TEST_CASE("per-z results agree with the overall best")
{
  auto const g = to_bipartite(fixtures::random_digraph(25, 0.2, 4));
  GuessGrid const grid(0.2, g.n());
  auto const overall = peel_grid(g, grid);
  auto const by_z = peel_grid_by_z(g, grid);
  REQUIRE(by_z.size() == grid.z_count());
  DensityValue top;
  for (auto const& r : by_z) {
    CHECK(density(g, r.pair) == r.density);
    if (denser_than(r.density, top)) top = r.density;
  }
  CHECK(top.value == doctest::Approx(overall.density.value));
}

TEST_CASE("peel is deterministic")
{
  auto const g = to_bipartite(fixtures::random_digraph(50, 0.1, 8));
  auto const th = Thresholds::from_values(3, 1.2L, 0.2L);
  auto const a = peel(g, th);
  auto const b = peel(g, th);
  CHECK(a.pair == b.pair);
  CHECK(a.sizes == b.sizes);
}
