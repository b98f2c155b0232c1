#include "dds/harness.hpp"

#include "dds/baseline.hpp"
#include "dds/edge_source.hpp"
#include "dds/format.hpp"
#include "dds/grid.hpp"
#include "dds/mpc.hpp"
#include "dds/oracle.hpp"
#include "dds/peel.hpp"
#include "dds/stream.hpp"

#include <json.hpp>

#include <chrono>
#include <fstream>
#include <memory>

namespace dds {

namespace {

struct EngineName
{
  Engine engine;
  char const* name;
};

constexpr EngineName kEngines[] = {
  {Engine::stream, "stream"},
  {Engine::mpc, "mpc"},
  {Engine::baseline_stream, "baseline-stream"},
  {Engine::baseline_mpc, "baseline-mpc"},
  {Engine::base_peel, "base-peel"},
  {Engine::exact, "exact"},
};

std::string join(std::vector<std::string> const& items)
{
  std::string out;
  for (auto const& s : items)
    out += (out.empty() ? "" : ", ") + s;
  return out;
}

bool needs_delta(Engine e) { return e == Engine::mpc || e == Engine::baseline_mpc; }

std::ofstream open_output(std::filesystem::path const& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

struct DensityRow
{
  double z_squared;
  double density;
};

void write_density_csv(std::filesystem::path const& path, std::vector<DensityRow> const& rows, Engine engine,
                       double epsilon)
{
  auto out = open_output(path);
  out << "z_squared,density,engine,epsilon\n";
  for (auto const& r : rows)
    out << format_real(r.z_squared) << ',' << format_real(r.density) << ',' << engine_name(engine) << ','
        << format_real(epsilon) << '\n';
}

void write_timing_csv(std::filesystem::path const& path, std::vector<BatchTiming> const& rows)
{
  auto out = open_output(path);
  out << "batch_index,nanos_per_edge_max,nanos_per_edge_mean\n";
  for (auto const& r : rows)
    out << r.batch_index << ',' << format_real(r.nanos_per_edge_max) << ',' << format_real(r.nanos_per_edge_mean)
        << '\n';
}

// Loaded input: either a list in memory or a file-backed stream.
struct Input
{
  DirectedEdgeList list;
  std::unique_ptr<EdgeSource> source;
  std::optional<IngestStats> stats;
};

Input load(ExperimentConfig const& cfg, bool stream_only)
{
  Input in;
  if (cfg.cache_dir) {
    auto const cached = cached_dgel(cfg.input, *cfg.cache_dir, cfg.parse);
    if (stream_only && cfg.order.mode == OrderMode::file) {
      in.source = std::make_unique<DgelFileSource>(cached);
      return in;
    }
    in.list = read_dgel(cached);
  } else {
    auto parsed = parse_snap(cfg.input, cfg.parse);
    in.list = std::move(parsed.edges);
    in.stats = parsed.stats;
  }
  in.list = order_stream(std::move(in.list), cfg.order);
  in.source = std::make_unique<MemoryEdgeSource>(in.list);
  return in;
}

double z_squared_of(GuessGrid const& grid, std::size_t z_index)
{
  long double const z = grid.z_value(z_index);
  return static_cast<double>(z * z);
}

} // namespace

Engine parse_engine(std::string_view name)
{
  for (auto const& e : kEngines)
    if (name == e.name) return e.engine;
  throw InvalidArgument("unknown engine '" + std::string(name) + "'");
}

std::string engine_name(Engine e)
{
  for (auto const& x : kEngines)
    if (x.engine == e) return x.name;
  return "unknown";
}

std::vector<std::string> engine_names()
{
  std::vector<std::string> out;
  for (auto const& e : kEngines)
    out.emplace_back(e.name);
  return out;
}

ConfigError::ConfigError(std::vector<std::string> fields)
  : Error("invalid configuration: " + join(fields))
  , fields_(std::move(fields))
{
}

double ExperimentConfig::effective_epsilon() const noexcept
{
  if (epsilon) return *epsilon;
  return needs_delta(engine) ? 0.6 : 0.2;
}

std::vector<std::string> ExperimentConfig::problems() const
{
  std::vector<std::string> bad;
  double const eps = effective_epsilon();
  bool const eps_ok = needs_delta(engine) ? (eps > 0 && eps < 1) : (eps > 0);
  if (!eps_ok) bad.emplace_back("epsilon");
  if (needs_delta(engine) != delta.has_value() || (delta && !(*delta > 0 && *delta < 1))) bad.emplace_back("delta");
  if (batch_size == 0) bad.emplace_back("batch-size");
  if (input.empty()) bad.emplace_back("input");
  if (out_dir.empty()) bad.emplace_back("out-dir");
  if (timing_repeats == 0) bad.emplace_back("timing-repeats");
  if (memory_budget_mb == 0) bad.emplace_back("memory-budget-mb");
  return bad;
}

RunSummary run_experiment(ExperimentConfig const& cfg)
{
  if (auto bad = cfg.problems(); !bad.empty()) throw ConfigError(std::move(bad));
  auto const started = std::chrono::steady_clock::now();
  double const eps = cfg.effective_epsilon();
  std::filesystem::create_directories(cfg.out_dir);

  RunSummary sum;
  sum.engine = cfg.engine;
  sum.epsilon = eps;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
  std::vector<DensityRow> rows;
  auto const density_path = cfg.out_dir / "density.csv";

  bool const streaming = cfg.engine == Engine::stream;
  Input in = load(cfg, streaming);
  sum.n_vertices = in.source->n_vertices();
  sum.m = in.source->size_hint().value_or(in.list.size());

  if (streaming) {
    GuessGrid const grid(eps, 2ULL * sum.n_vertices);
    StreamRunOptions opt;
    opt.memory_budget_bytes = cfg.memory_budget_mb << 20;
    opt.timing = true;
    opt.batch_size = cfg.batch_size;
    opt.timing_repeats = cfg.timing_repeats;
    auto const r = run_stream_grid(*in.source, grid, opt);
    sum.grid_cells = grid.size();
    sum.passes = r.passes;
    for (std::size_t z = 0; z < grid.z_count(); ++z)
      rows.push_back({z_squared_of(grid, z), r.per_z[z] ? r.per_z[z]->density.value : 0.0});
    if (r.selected) {
      sum.best_density = r.selected->density.value;
      sum.best_s = r.selected->pair.sources.size();
      sum.best_t = r.selected->pair.targets.size();
      auto const cell = grid.cell(r.selected->cell);
      extra["selected_D"] = static_cast<double>(grid.d_values()[cell.d_index]);
      extra["selected_z"] = static_cast<double>(grid.z_value(cell.z_index));
      extra["selected_level"] = r.selected->level;
    }
    extra["chunks"] = r.chunks;
    extra["counter_ints_per_cell"] = r.counter_ints_per_cell;
    auto const timing_path = cfg.out_dir / "timing.csv";
    write_timing_csv(timing_path, r.timing);
    sum.files.push_back(timing_path);
  } else {
    BipartiteGraph const g = to_bipartite(in.list);
    switch (cfg.engine) {
    case Engine::base_peel: {
      GuessGrid const grid(eps, g.n());
      sum.grid_cells = grid.size();
      auto const per_z = peel_grid_by_z(g, grid);
      DensityValue best;
      for (std::size_t z = 0; z < per_z.size(); ++z) {
        auto const d = density(g, per_z[z].pair);
        rows.push_back({z_squared_of(grid, z), d.value});
        if (denser_than(d, best)) best = d;
      }
      sum.best_density = best.value;
      sum.best_s = best.s_size;
      sum.best_t = best.t_size;
      break;
    }
    case Engine::mpc: {
      GuessGrid const grid(eps, g.n());
      sum.grid_cells = grid.size();
      MpcRunOptions opt;
      opt.seed = cfg.seed;
      opt.threads = cfg.threads;
      auto const r = run_mpc(g, grid, *cfg.delta, opt);
      for (std::size_t z = 0; z < grid.z_count(); ++z)
        rows.push_back({z_squared_of(grid, z), r.per_z[z].value});
      auto const d = density(g, r.pair);
      sum.best_density = d.value;
      sum.best_s = r.pair.sources.size();
      sum.best_t = r.pair.targets.size();
      sum.rounds_total = r.ledger.rounds_total;
      extra["rounds_sequential"] = r.ledger.rounds_sequential;
      extra["rounds_per_phase"] = r.ledger.rounds_per_phase;
      extra["invocations"] = r.ledger.invocations;
      extra["machine_memory_words"] = r.ledger.machine_memory;
      extra["alpha"] = static_cast<double>(r.params.alpha);
      extra["t"] = r.params.t;
      auto const rounds_path = cfg.out_dir / "rounds.csv";
      auto out = open_output(rounds_path);
      write_rounds_csv(out, r.ledger);
      sum.files.push_back(rounds_path);
      break;
    }
    case Engine::baseline_stream:
    case Engine::baseline_mpc: {
      auto const r = baseline_grid(g, eps, cfg.threads);
      sum.grid_cells = r.per_c.size();
      for (auto const& c : r.per_c)
        rows.push_back({c.c, density(g, c.best_pair).value});
      auto const best = density(g, r.best.best_pair);
      sum.best_density = best.value;
      sum.best_s = r.best.best_pair.sources.size();
      sum.best_t = r.best.best_pair.targets.size();
      sum.passes = r.passes;
      if (cfg.engine == Engine::baseline_mpc) {
        sum.rounds_total = r.mpc_rounds;
        auto const rounds_path = cfg.out_dir / "rounds.csv";
        auto out = open_output(rounds_path);
        out << "guess_c,pass,rounds,s_size,t_size,density\n";
        for (auto const& c : r.per_c)
          for (auto const& p : c.trace)
            out << format_real(c.c) << ',' << p.pass << ",1," << p.s_size << ',' << p.t_size << ','
                << format_real(p.density.value) << '\n';
        sum.files.push_back(rounds_path);
      } else {
        // Passes are shared by all ratio guesses, so pass i costs the sum of
        // their i-th iterations.
        std::vector<BatchTiming> timing(r.passes);
        for (std::size_t i = 0; i < timing.size(); ++i)
          timing[i].batch_index = i;
        for (auto const& c : r.per_c)
          for (auto const& p : c.trace)
            timing[p.pass - 1].nanos_per_edge_max += p.nanos;
        for (auto& t : timing) {
          t.nanos_per_edge_max /= static_cast<double>(std::max<EdgeCount>(1, g.m()));
          t.nanos_per_edge_mean = t.nanos_per_edge_max;
        }
        auto const timing_path = cfg.out_dir / "timing.csv";
        write_timing_csv(timing_path, timing);
        sum.files.push_back(timing_path);
      }
      break;
    }
    case Engine::exact: {
      auto const r = exact_densest(g, cfg.oracle_cap);
      auto const d = density(g, r.pair);
      double const z2 = r.pair.targets.empty() ? 0.0
                                               : static_cast<double>(r.pair.sources.size()) /
                                                   static_cast<double>(r.pair.targets.size());
      rows.push_back({z2, d.value});
      sum.best_density = d.value;
      sum.best_s = r.pair.sources.size();
      sum.best_t = r.pair.targets.size();
      break;
    }
    case Engine::stream:
      break;
    }
  }

  write_density_csv(density_path, rows, cfg.engine, eps);
  sum.files.insert(sum.files.begin(), density_path);

  nlohmann::ordered_json j;
  j["engine"] = engine_name(cfg.engine);
  j["epsilon"] = eps;
  if (cfg.delta) j["delta"] = *cfg.delta;
  j["order"] = cfg.order.to_string();
  j["seed"] = cfg.seed;
  j["input"] = cfg.input.string();
  j["n_vertices"] = sum.n_vertices;
  j["m"] = sum.m;
  if (in.stats) {
    j["ingest"] = {{"lines", in.stats->lines},
                   {"duplicates_dropped", in.stats->duplicates},
                   {"self_loops", in.stats->self_loops},
                   {"timestamps", in.stats->timestamps}};
  }
  j["grid_cells"] = sum.grid_cells;
  j["best_density"] = sum.best_density;
  j["best_s_size"] = sum.best_s;
  j["best_t_size"] = sum.best_t;
  if (sum.rounds_total) j["rounds_total"] = *sum.rounds_total;
  if (sum.passes) j["passes"] = *sum.passes;
  for (auto const& [k, v] : extra.items())
    j[k] = v;
  j["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  auto const summary_path = cfg.out_dir / "summary.json";
  auto out = open_output(summary_path);
  out << j.dump(2) << '\n';
  sum.files.push_back(summary_path);
  return sum;
}

} // namespace dds
