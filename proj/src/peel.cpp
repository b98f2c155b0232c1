#include "dds/peel.hpp"

#include "dds/numeric.hpp"

namespace dds {

namespace {

// Induced-subgraph degrees under deletions. `low_*` holds the live vertices
// whose degree is below the side's threshold; since degrees only fall, a
// vertex enters it at most once, when its degree crosses the threshold.
class PeelState
{
public:
  PeelState(BipartiteGraph const& g, Thresholds const& th)
    : g_(g)
    , need_s_(th.min_degree_s)
    , need_t_(th.min_degree_t)
    , alive_s_(g.side_size(), 1)
    , alive_t_(g.side_size(), 1)
    , deg_s_(g.side_size())
    , deg_t_(g.side_size())
    , size_s_(g.side_size())
    , size_t_(g.side_size())
  {
    for (VertexId v = 0; v < g.side_size(); ++v) {
      deg_s_[v] = g.left_degree(v);
      deg_t_[v] = g.right_degree(v);
      if (deg_s_[v] < need_s_) low_s_.push_back(v);
      if (deg_t_[v] < need_t_) low_t_.push_back(v);
    }
  }

  [[nodiscard]] std::size_t size_s() const noexcept { return size_s_; }
  [[nodiscard]] std::size_t size_t_side() const noexcept { return size_t_; }
  [[nodiscard]] std::size_t low_s() const noexcept { return low_s_.size(); }
  [[nodiscard]] std::size_t low_t() const noexcept { return low_t_.size(); }
  [[nodiscard]] bool nothing_to_remove() const noexcept { return low_s_.empty() && low_t_.empty(); }

  void remove_low()
  {
    for (VertexId u : low_s_) alive_s_[u] = 0;
    for (VertexId v : low_t_) alive_t_[v] = 0;
    size_s_ -= low_s_.size();
    size_t_ -= low_t_.size();

    std::vector<VertexId> next_s, next_t;
    for (VertexId u : low_s_)
      for (VertexId v : g_.left_neighbors(u))
        if (alive_t_[v] && deg_t_[v]-- == need_t_) next_t.push_back(v);
    for (VertexId v : low_t_)
      for (VertexId u : g_.right_neighbors(v))
        if (alive_s_[u] && deg_s_[u]-- == need_s_) next_s.push_back(u);
    low_s_ = std::move(next_s);
    low_t_ = std::move(next_t);
  }

  [[nodiscard]] VertexPair pair() const { return pair_from_flags(alive_s_, alive_t_); }

private:
  BipartiteGraph const& g_;
  std::uint64_t need_s_;
  std::uint64_t need_t_;
  std::vector<char> alive_s_;
  std::vector<char> alive_t_;
  std::vector<std::uint64_t> deg_s_;
  std::vector<std::uint64_t> deg_t_;
  std::size_t size_s_;
  std::size_t size_t_;
  std::vector<VertexId> low_s_;
  std::vector<VertexId> low_t_;
};

} // namespace

PeelOutcome peel(BipartiteGraph const& g, Thresholds const& th)
{
  PeelState st(g, th);
  PeelOutcome out;
  long double const z2 = th.z_squared();
  long double const keep = th.epsilon / (1 + th.epsilon);

  while (true) {
    ++out.iterations;
    auto const s = static_cast<long double>(st.size_s());
    auto const t = static_cast<long double>(st.size_t_side());
    out.sizes.emplace_back(st.size_s(), st.size_t_side());

    if (numeric::approx_ge(s, z2 * t) && numeric::approx_le(st.low_s(), keep * s)) {
      out.exit = PeelExit::source_rule;
      break;
    }
    if (numeric::approx_le(s, z2 * t) && numeric::approx_le(st.low_t(), keep * t)) {
      out.exit = PeelExit::target_rule;
      break;
    }
    st.remove_low();
  }
  out.pair = st.pair();
  return out;
}

PeelOutcome peel_without_stopping(BipartiteGraph const& g, Thresholds const& th)
{
  PeelState st(g, th);
  PeelOutcome out;
  out.exit = PeelExit::exhausted;
  while (!st.nothing_to_remove()) {
    out.sizes.emplace_back(st.size_s(), st.size_t_side());
    st.remove_low();
    ++out.iterations;
  }
  out.pair = st.pair();
  return out;
}

GridResult peel_grid(BipartiteGraph const& g, GuessGrid const& grid)
{
  GridResult best;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    auto outcome = peel(g, grid.thresholds(c));
    auto const d = density(g, outcome.pair);
    if (c == 0 || denser_than(d, best.density)) {
      best.pair = std::move(outcome.pair);
      best.density = d;
      best.cell = c;
    }
  }
  return best;
}

std::vector<GridResult> peel_grid_by_z(BipartiteGraph const& g, GuessGrid const& grid)
{
  std::vector<GridResult> best(grid.z_count());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    auto const cell = grid.cell(c);
    auto outcome = peel(g, grid.thresholds(c));
    auto const d = density(g, outcome.pair);
    auto& slot = best[cell.z_index];
    if (cell.d_index == 0 || denser_than(d, slot.density)) {
      slot.pair = std::move(outcome.pair);
      slot.density = d;
      slot.cell = c;
    }
  }
  return best;
}

} // namespace dds
