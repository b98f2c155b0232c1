#include "dds/baseline.hpp"

#include "dds/cpu_clock.hpp"
#include "dds/numeric.hpp"
#include "dds/parallel.hpp"

#include <limits>

namespace dds {

BaselineResult baseline_peel(BipartiteGraph const& g, double epsilon, double c)
{
  if (!(c > 0)) throw InvalidArgument("baseline ratio guess must be positive");
  if (!(epsilon > 0)) throw InvalidArgument("baseline needs epsilon > 0");
  constexpr std::size_t kAlive = std::numeric_limits<std::size_t>::max();

  VertexId const side = g.side_size();
  BaselineResult r;
  r.c = c;
  std::vector<std::uint64_t> deg_s(side), deg_t(side);
  std::vector<std::size_t> gone_s(side, kAlive), gone_t(side, kAlive); // pass that removed the vertex
  std::vector<VertexId> s_list, t_list, keep;
  for (VertexId v = 0; v < side; ++v) {
    deg_s[v] = g.left_degree(v);
    deg_t[v] = g.right_degree(v);
    s_list.push_back(v);
    t_list.push_back(v);
  }
  EdgeCount edges = g.m();
  std::size_t best_pass = 0;

  while (!s_list.empty() && !t_list.empty()) {
    auto const start = thread_cpu_nanos();
    std::size_t const pass = ++r.passes;
    auto const d = make_density(edges, s_list.size(), t_list.size());
    if (pass == 1 || denser_than(d, r.best_density)) {
      r.best_density = d;
      best_pass = pass;
    }

    auto const s = static_cast<long double>(s_list.size());
    auto const t = static_cast<long double>(t_list.size());
    bool const peel_sources = numeric::approx_ge(s, static_cast<long double>(c) * t);
    auto& list = peel_sources ? s_list : t_list;
    auto& deg = peel_sources ? deg_s : deg_t;
    auto& other_deg = peel_sources ? deg_t : deg_s;
    auto& gone = peel_sources ? gone_s : gone_t;
    auto const& other_gone = peel_sources ? gone_t : gone_s;
    long double const threshold = (1 + static_cast<long double>(epsilon)) * edges / static_cast<long double>(list.size());

    keep.clear();
    std::vector<VertexId> removed;
    for (VertexId v : list) {
      if (numeric::approx_le(deg[v], threshold)) removed.push_back(v);
      else keep.push_back(v);
    }
    for (VertexId v : removed)
      gone[v] = pass;
    for (VertexId v : removed) {
      edges -= deg[v];
      auto const nbrs = peel_sources ? g.left_neighbors(v) : g.right_neighbors(v);
      for (VertexId w : nbrs)
        if (other_gone[w] == kAlive) --other_deg[w];
    }
    list.swap(keep);
    r.trace.push_back({pass, static_cast<std::size_t>(s), static_cast<std::size_t>(t), d,
                       static_cast<double>(thread_cpu_nanos() - start)});
  }

  for (VertexId v = 0; v < side; ++v) {
    if (gone_s[v] >= best_pass) r.best_pair.sources.push_back(v);
    if (gone_t[v] >= best_pass) r.best_pair.targets.push_back(v);
  }
  if (r.passes == 0) r.best_pair = {};
  return r;
}

std::vector<double> baseline_ratios(double epsilon, std::uint64_t n)
{
  auto const top = numeric::ceil_log_base(static_cast<long double>(n), epsilon);
  std::vector<double> out;
  for (std::int64_t j = -top; j <= top; ++j)
    out.push_back(static_cast<double>(numeric::pow1p(epsilon, static_cast<long double>(j))));
  return out;
}

BaselineGridResult baseline_grid(BipartiteGraph const& g, double epsilon, unsigned threads)
{
  BaselineGridResult r;
  auto const ratios = baseline_ratios(epsilon, g.n());
  r.per_c.resize(ratios.size());
  parallel_for(ratios.size(), threads, [&](std::size_t i) { r.per_c[i] = baseline_peel(g, epsilon, ratios[i]); });
  for (std::size_t i = 0; i < r.per_c.size(); ++i) {
    r.passes = std::max(r.passes, r.per_c[i].passes);
    if (i == 0 || denser_than(r.per_c[i].best_density, r.best.best_density)) r.best = r.per_c[i];
  }
  r.mpc_rounds = r.passes + 1;
  return r;
}

} // namespace dds
