#include "dds/mpc.hpp"

#include "dds/format.hpp"
#include "dds/numeric.hpp"
#include "dds/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace dds {

MpcParams MpcParams::make(double epsilon, double delta, std::uint64_t n, std::uint64_t seed)
{
  if (!(epsilon > 0 && epsilon < 1)) throw InvalidArgument("MPC needs epsilon in (0, 1)");
  if (!(delta > 0 && delta < 1)) throw InvalidArgument("MPC needs delta in (0, 1)");
  MpcParams p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.n_at_start = n;
  p.seed = seed;
  long double const L = numeric::log_base(static_cast<long double>(n), epsilon);
  long double const root = std::sqrt(delta * L);
  p.alpha = numeric::pow1p(epsilon, std::sqrt(L));
  p.t = static_cast<std::uint32_t>(std::max<long double>(1, std::floor(root / 2)));
  p.invocations = static_cast<std::size_t>(std::max<long double>(1, std::ceil(16 * root / delta)));
  p.machine_memory = static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<long double>(n), delta)));
  return p;
}

double MpcParams::sampling_probability(long double k) const noexcept
{
  if (!(k > 0)) return 1.0;
  long double const ln_n = n_at_start > 1 ? std::log(static_cast<long double>(n_at_start)) : 0.0L;
  return static_cast<double>(std::min<long double>(1, 18 * ln_n / (epsilon * epsilon * k)));
}

long double MpcParams::neighborhood_bound() const noexcept
{
  long double const ln_n = n_at_start > 1 ? std::log(static_cast<long double>(n_at_start)) : 0.0L;
  return std::pow(36 * ln_n / (epsilon * epsilon) * alpha, static_cast<long double>(t));
}

std::size_t MpcParams::rounds_per_phase() const noexcept
{
  auto const steps = std::ceil(std::log2(static_cast<double>(std::max<std::uint32_t>(2, t))));
  return static_cast<std::size_t>(steps) + 3;
}

BipartiteGraph sample_edges(BipartiteGraph const& g, double p, Rng& rng, std::vector<char> const& skip)
{
  if (!skip.empty() && skip.size() != g.m()) throw InvalidArgument("skip mask must have one flag per edge");
  std::vector<VertexId> src, dst;
  auto const s = g.sources();
  auto const t = g.targets();
  for (std::size_t e = 0; e < g.m(); ++e) {
    if (!skip.empty() && skip[e]) continue;
    if (rng.bernoulli(p)) {
      src.push_back(s[e]);
      dst.push_back(t[e]);
    }
  }
  return BipartiteGraph(g.side_size(), src, dst);
}

std::size_t audit_neighborhoods(BipartiteGraph const& sampled, std::uint32_t t, std::vector<char> const& skip_left,
                                std::vector<char> const& skip_right)
{
  VertexId const side = sampled.side_size();
  auto skipped = [&](std::size_t node) {
    if (node < side) return !skip_left.empty() && skip_left[node];
    return !skip_right.empty() && skip_right[node - side];
  };
  std::vector<std::uint32_t> stamp(2 * std::size_t{side}, 0);
  std::uint32_t generation = 0;
  std::size_t peak = 0;
  std::vector<std::size_t> frontier, next;
  for (std::size_t start = 0; start < 2 * std::size_t{side}; ++start) {
    if (skipped(start)) continue;
    ++generation;
    stamp[start] = generation;
    std::size_t visited = 1;
    frontier.assign(1, start);
    for (std::uint32_t depth = 0; depth < t && !frontier.empty(); ++depth) {
      next.clear();
      for (std::size_t node : frontier) {
        auto const nbrs = node < side ? sampled.left_neighbors(static_cast<VertexId>(node))
                                      : sampled.right_neighbors(static_cast<VertexId>(node - side));
        std::size_t const offset = node < side ? side : 0;
        for (VertexId w : nbrs) {
          std::size_t const other = offset + w;
          if (stamp[other] == generation || skipped(other)) continue;
          stamp[other] = generation;
          ++visited;
          next.push_back(other);
        }
      }
      frontier.swap(next);
    }
    peak = std::max(peak, visited);
  }
  return peak;
}

namespace {

// Subgraph induced by the live sets, edges compacted to live-live ones.
struct LiveGraph
{
  VertexId side = 0;
  std::vector<VertexId> src, dst;
  std::vector<char> in_s, in_t;
  std::vector<VertexId> s_list, t_list;

  LiveGraph(BipartiteGraph const& g, VertexPair const& live)
    : side(g.side_size())
    , in_s(membership(live.sources, g.side_size()))
    , in_t(membership(live.targets, g.side_size()))
    , s_list(live.sources)
    , t_list(live.targets)
  {
    auto const s = g.sources();
    auto const t = g.targets();
    for (std::size_t e = 0; e < g.m(); ++e)
      if (in_s[s[e]] && in_t[t[e]]) {
        src.push_back(s[e]);
        dst.push_back(t[e]);
      }
  }

  void compact_edges()
  {
    std::size_t w = 0;
    for (std::size_t e = 0; e < src.size(); ++e)
      if (in_s[src[e]] && in_t[dst[e]]) {
        src[w] = src[e];
        dst[w] = dst[e];
        ++w;
      }
    src.resize(w);
    dst.resize(w);
  }

  [[nodiscard]] VertexPair pair() const { return {s_list, t_list}; }
};

void drop(std::vector<VertexId>& list, std::vector<char>& flags, std::vector<VertexId> const& gone)
{
  for (VertexId v : gone)
    flags[v] = 0;
  std::erase_if(list, [&](VertexId v) { return !flags[v]; });
}

MpcPhaseResult run_phase(LiveGraph& lg, Thresholds const& th, MpcParams const& params, Rng& rng, bool audit)
{
  MpcPhaseResult r;
  r.rounds = params.rounds_per_phase();
  VertexId const side = lg.side;

  std::vector<std::uint64_t> deg_s(side, 0), deg_t(side, 0);
  for (std::size_t e = 0; e < lg.src.size(); ++e) {
    ++deg_s[lg.src[e]];
    ++deg_t[lg.dst[e]];
  }
  std::uint64_t const freeze_s = numeric::min_integer_above(th.k_s * params.alpha);
  std::uint64_t const freeze_t = numeric::min_integer_above(th.k_t * params.alpha);
  std::vector<char> frozen_s(side, 0), frozen_t(side, 0);
  for (VertexId u : lg.s_list)
    if (deg_s[u] >= freeze_s) {
      frozen_s[u] = 1;
      r.frozen_s.push_back(u);
    }
  for (VertexId v : lg.t_list)
    if (deg_t[v] >= freeze_t) {
      frozen_t[v] = 1;
      r.frozen_t.push_back(v);
    }
  r.f1 = r.frozen_s.size();
  r.f2 = r.frozen_t.size();

  long double const root = std::sqrt(static_cast<long double>(lg.s_list.size()) * lg.t_list.size());
  if (numeric::approx_ge(r.f1, th.z * root / params.alpha) || numeric::approx_ge(r.f2, root / (th.z * params.alpha))) {
    r.early_return = true;
    r.pair = lg.pair();
    return r;
  }

  double const p1 = params.sampling_probability(th.k_s);
  double const p2 = params.sampling_probability(th.k_t);
  std::uint64_t const need1 = numeric::min_integer_at_least(p1 * th.k_s);
  std::uint64_t const need2 = numeric::min_integer_at_least(p2 * th.k_t);
  long double const keep = static_cast<long double>(params.epsilon) / (1 + params.epsilon);
  long double const z2 = th.z_squared();

  std::vector<std::size_t> open_edges; // edges without two frozen endpoints
  for (std::size_t e = 0; e < lg.src.size(); ++e)
    if (!(frozen_s[lg.src[e]] && frozen_t[lg.dst[e]])) open_edges.push_back(e);

  std::vector<std::uint64_t> d1(side, 0), d2(side, 0);
  std::vector<VertexId> a_set, b_set, audit_src, audit_dst;
  for (std::uint32_t step = 0; step < params.t; ++step) {
    ++r.steps;
    for (VertexId u : lg.s_list)
      d1[u] = 0;
    for (VertexId v : lg.t_list)
      d2[v] = 0;
    audit_src.clear();
    audit_dst.clear();
    for (std::size_t e : open_edges) {
      VertexId const u = lg.src[e], v = lg.dst[e];
      if (!lg.in_s[u] || !lg.in_t[v]) continue;
      if (rng.bernoulli(p1)) {
        ++d1[u];
        if (audit) audit_src.push_back(u), audit_dst.push_back(v);
      }
    }
    for (std::size_t e : open_edges) {
      VertexId const u = lg.src[e], v = lg.dst[e];
      if (!lg.in_s[u] || !lg.in_t[v]) continue;
      if (rng.bernoulli(p2)) {
        ++d2[v];
        if (audit) audit_src.push_back(u), audit_dst.push_back(v);
      }
    }
    if (audit) {
      std::vector<char> skip_s(side, 1), skip_t(side, 1);
      for (VertexId u : lg.s_list)
        skip_s[u] = frozen_s[u];
      for (VertexId v : lg.t_list)
        skip_t[v] = frozen_t[v];
      BipartiteGraph const sampled(side, audit_src, audit_dst);
      std::size_t const peak = audit_neighborhoods(sampled, params.t, skip_s, skip_t);
      r.peak_neighborhood = std::max(r.peak_neighborhood.value_or(0), peak);
    }

    a_set.clear();
    b_set.clear();
    for (VertexId u : lg.s_list)
      if (!frozen_s[u] && d1[u] < need1) a_set.push_back(u);
    for (VertexId v : lg.t_list)
      if (!frozen_t[v] && d2[v] < need2) b_set.push_back(v);

    auto const s = static_cast<long double>(lg.s_list.size());
    auto const t = static_cast<long double>(lg.t_list.size());
    bool const by_s = numeric::approx_ge(s, z2 * t) &&
                      numeric::approx_le(a_set.size(), keep * s - static_cast<long double>(r.f1));
    bool const by_t = numeric::approx_le(s, z2 * t) &&
                      numeric::approx_le(b_set.size(), keep * t - static_cast<long double>(r.f2));
    if (by_s || by_t) {
      r.early_return = true;
      r.pair = lg.pair();
      return r;
    }
    drop(lg.s_list, lg.in_s, a_set);
    drop(lg.t_list, lg.in_t, b_set);
  }
  r.pair = lg.pair();
  return r;
}

struct CellOutcome
{
  std::vector<PhaseRecord> phases;
  std::optional<VertexPair> potential;
  DensityValue density;
  std::size_t rounds = 0;
  std::optional<std::size_t> peak;
};

} // namespace

MpcPhaseResult mpc_phase(BipartiteGraph const& g, VertexPair const& live, Thresholds const& th,
                         MpcParams const& params, Rng& rng, bool audit)
{
  LiveGraph lg(g, live);
  return run_phase(lg, th, params, rng, audit);
}

MpcPhaseResult mpc_phase(BipartiteGraph const& g, Thresholds const& th, MpcParams const& params, Rng& rng, bool audit)
{
  return mpc_phase(g, g.full_pair(), th, params, rng, audit);
}

MpcRunResult run_mpc(BipartiteGraph const& g, GuessGrid const& grid, double delta, MpcRunOptions const& options)
{
  MpcRunResult result;
  result.params = MpcParams::make(grid.epsilon(), delta, g.n(), options.seed);
  MpcParams const& params = result.params;

  std::vector<CellOutcome> cells(grid.size());
  parallel_for(grid.size(), options.threads, [&](std::size_t c) {
    auto const cell = grid.cell(c);
    auto const th = grid.thresholds(c);
    Rng rng(derive_seed(options.seed, cell.d_index, cell.z_index));
    LiveGraph lg(g, g.full_pair());
    CellOutcome& out = cells[c];
    for (std::size_t phase = 1; phase <= params.invocations; ++phase) {
      auto r = run_phase(lg, th, params, rng, options.audit);
      out.rounds += r.rounds;
      if (r.peak_neighborhood) out.peak = std::max(out.peak.value_or(0), *r.peak_neighborhood);
      PhaseRecord rec;
      rec.cell = c;
      rec.guess_d = th.D;
      rec.guess_z = th.z;
      rec.phase = phase;
      rec.rounds = r.rounds;
      rec.s_size = r.pair.sources.size();
      rec.t_size = r.pair.targets.size();
      rec.f1 = r.f1;
      rec.f2 = r.f2;
      rec.early_return = r.early_return;
      if (r.early_return) {
        out.density = density(g, r.pair);
        if (options.record_pairs) rec.potential_pair = r.pair;
        out.potential = std::move(r.pair);
        out.phases.push_back(std::move(rec));
        break;
      }
      out.phases.push_back(std::move(rec));
      lg.compact_edges();
    }
  });

  RoundLedger& ledger = result.ledger;
  ledger.rounds_per_phase = params.rounds_per_phase();
  ledger.invocations = params.invocations;
  ledger.machine_memory = params.machine_memory;
  result.per_z.assign(grid.z_count(), DensityValue{});
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto& out = cells[c];
    ledger.rounds_total = std::max(ledger.rounds_total, out.rounds);
    ledger.rounds_sequential += out.rounds;
    if (out.peak) ledger.peak_neighborhood_size = std::max(ledger.peak_neighborhood_size.value_or(0), *out.peak);
    for (auto& rec : out.phases)
      ledger.phases.push_back(std::move(rec));
    if (!out.potential) continue;
    auto& column = result.per_z[grid.cell(c).z_index];
    if (denser_than(out.density, column)) column = out.density;
    if (!result.cell || denser_than(out.density, result.density)) {
      result.cell = c;
      result.density = out.density;
      result.pair = std::move(*out.potential);
    }
  }
  return result;
}

void write_rounds_csv(std::ostream& out, RoundLedger const& ledger)
{
  out << "guess_D,guess_z,phase,rounds,s_size,t_size,f1,f2,early_return\n";
  for (auto const& r : ledger.phases)
    out << format_real(static_cast<double>(r.guess_d)) << ',' << format_real(static_cast<double>(r.guess_z)) << ','
        << r.phase << ',' << r.rounds << ',' << r.s_size << ',' << r.t_size << ',' << r.f1 << ',' << r.f2 << ','
        << (r.early_return ? 1 : 0) << '\n';
}

} // namespace dds
