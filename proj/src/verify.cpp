#include "dds/verify.hpp"

#include "dds/baseline.hpp"
#include "dds/fixtures.hpp"
#include "dds/harness.hpp"
#include "dds/mpc.hpp"
#include "dds/numeric.hpp"
#include "dds/oracle.hpp"
#include "dds/peel.hpp"
#include "dds/stream.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

namespace dds::verify {

namespace {

using Clock = std::chrono::steady_clock;

// Relative tolerance on "density >= bound": densities are ratios of small
// integers and square roots, so only rounding noise needs absorbing.
constexpr double kTolerance = 1e-9;

bool meets(double value, double bound) { return value >= bound * (1 - kTolerance); }

struct Tally
{
  Check check;
  double worst = std::numeric_limits<double>::infinity(); // min value / bound
  std::vector<std::string> examples;

  explicit Tally(std::string name) { check.name = std::move(name); }

  void add(bool ok, double value, double bound, std::string const& where)
  {
    ++check.cases;
    if (bound > 0) worst = std::min(worst, value / bound);
    if (!ok) {
      ++check.failures;
      if (examples.size() < 5) examples.push_back(where);
    }
  }

  Check finish(double required_fraction = 1.0)
  {
    double const ok = static_cast<double>(check.cases - check.failures);
    check.passed = check.cases == 0 || ok >= required_fraction * static_cast<double>(check.cases) - 1e-9;
    std::ostringstream d;
    d << (check.cases - check.failures) << "/" << check.cases << " within bound";
    if (std::isfinite(worst)) d << "; worst value/bound " << worst;
    if (!examples.empty()) {
      d << "; failing:";
      for (auto const& e : examples)
        d << ' ' << e;
    }
    check.detail = d.str();
    return check;
  }
};

Report finish(std::string suite, std::vector<Check> checks, Clock::time_point started)
{
  Report r;
  r.suite = std::move(suite);
  r.checks = std::move(checks);
  r.passed = std::all_of(r.checks.begin(), r.checks.end(), [](Check const& c) { return c.passed; });
  r.seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return r;
}

std::string slurp(std::filesystem::path const& p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path make_temp_dir()
{
  auto pattern = (std::filesystem::temp_directory_path() / "dds-verify-XXXXXX").string();
  if (!mkdtemp(pattern.data())) throw Error("cannot create a temporary directory");
  return pattern;
}

std::int64_t peel_bound(double eps, std::uint64_t n) { return 2 * numeric::ceil_log_base(n, eps) + 1; }

} // namespace

Check const* Report::find(std::string const& name) const
{
  for (auto const& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string Report::to_json() const
{
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["passed"] = passed;
  j["seconds"] = seconds;
  j["checks"] = nlohmann::ordered_json::array();
  for (auto const& c : checks)
    j["checks"].push_back(
      {{"name", c.name}, {"passed", c.passed}, {"cases", c.cases}, {"failures", c.failures}, {"detail", c.detail}});
  return j.dump(2);
}

std::vector<std::string> suite_names() { return {"small-oracle", "sampling-lemma", "adversary", "determinism"}; }

Report small_oracle(SmallOracleConfig const& cfg)
{
  auto const started = Clock::now();
  double const eps = cfg.epsilon;
  Tally peel_t("base-peel"), stream_t("stream"), mpc_t("mpc"), base_t("baseline");

  auto const corpus = fixtures::oracle_corpus(cfg.instances, cfg.max_side, cfg.seed);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto const& inst = corpus[i];
    BipartiteGraph const g = to_bipartite(inst.graph);
    double const rho = exact_densest(g, cfg.max_side).density.value;
    GuessGrid const grid(eps, g.n());
    std::string const id = "#" + std::to_string(i);

    double const peel_bound_v = rho / (2 * std::pow(1 + eps, 3));
    double const peel_d = peel_grid(g, grid).density.value;
    peel_t.add(meets(peel_d, peel_bound_v), peel_d, peel_bound_v, id);

    double const stream_bound = rho / (16 * std::pow(1 + eps, 2) * static_cast<double>(numeric::log_base(g.n(), eps)));
    for (std::size_t o = 0; o <= cfg.shuffles; ++o) {
      StreamOrder const order = o == 0 ? StreamOrder{} : StreamOrder{OrderMode::shuffle, derive_seed(cfg.seed, i, o)};
      auto const r = run_stream_grid(order_stream(inst.graph, order), grid);
      double const d = r.selected ? r.selected->density.value : 0.0;
      stream_t.add(meets(d, stream_bound), d, stream_bound, id + "/" + order.to_string());
    }

    double const mpc_bound = rho / (2 * std::pow(1 + eps, 6));
    for (std::size_t s = 0; s < cfg.mpc_seeds; ++s) {
      MpcRunOptions opt;
      opt.seed = derive_seed(cfg.seed, i, 1000 + s);
      double const d = run_mpc(g, grid, cfg.delta, opt).density.value;
      mpc_t.add(meets(d, mpc_bound), d, mpc_bound, id + "/seed" + std::to_string(s));
    }

    double const base_bound = rho / (2 + eps + 0.01);
    double const base_d = baseline_grid(g, eps).best.best_density.value;
    base_t.add(meets(base_d, base_bound), base_d, base_bound, id);
  }
  return finish("small-oracle", {peel_t.finish(), stream_t.finish(), mpc_t.finish(cfg.mpc_required_fraction), base_t.finish()},
                started);
}

Report adversary(AdversaryConfig const& cfg)
{
  auto const started = Clock::now();
  double const eps = cfg.epsilon;
  std::vector<Check> checks;

  auto const adv = fixtures::make_peeling_adversary(cfg.D, cfg.extra);
  BipartiteGraph const g = to_bipartite(adv);
  std::int64_t const bound = peel_bound(eps, g.n());

  {
    Check c{"adversary-guarded-peel", true, 0, 0, {}};
    GuessGrid const grid(eps, g.n());
    std::size_t worst = 0;
    for (std::size_t cell = 0; cell < grid.size(); ++cell) {
      auto const it = peel(g, grid.thresholds(cell)).iterations;
      worst = std::max(worst, it);
      ++c.cases;
      if (static_cast<std::int64_t>(it) > bound) ++c.failures;
    }
    c.passed = c.failures == 0;
    c.detail = "max iterations over " + std::to_string(grid.size()) + " cells: " + std::to_string(worst) +
               " (bound " + std::to_string(bound) + ")";
    checks.push_back(c);
  }
  {
    Check c{"adversary-unguarded-peel", false, 1, 0, {}};
    auto const th = Thresholds::from_values(cfg.D - 1, 1, eps);
    auto const it = peel_without_stopping(g, th).iterations;
    c.passed = it >= cfg.unguarded_min_iterations;
    c.failures = c.passed ? 0 : 1;
    c.detail = "iterations at k = " + std::to_string((cfg.D - 1) / 2) + ": " + std::to_string(it) + " (need >= " +
               std::to_string(cfg.unguarded_min_iterations) + ")";
    checks.push_back(c);
  }
  {
    Check c{"adversary-baseline-passes", true, 0, 0, {}};
    std::size_t worst = 0;
    for (double ratio : baseline_ratios(eps, g.n())) {
      auto const p = baseline_peel(g, eps, ratio).passes;
      worst = std::max(worst, p);
      ++c.cases;
      if (static_cast<std::int64_t>(p) > bound + 1) ++c.failures;
    }
    c.passed = c.failures == 0;
    c.detail = "max passes: " + std::to_string(worst) + " (bound " + std::to_string(bound + 1) + ")";
    checks.push_back(c);
  }
  {
    Check peel_c{"corpus-peel-iterations", true, 0, 0, {}};
    Check base_c{"corpus-baseline-passes", true, 0, 0, {}};
    auto const corpus = fixtures::oracle_corpus(cfg.corpus_instances, cfg.corpus_max_side, cfg.corpus_seed);
    for (auto const& inst : corpus) {
      BipartiteGraph const cg = to_bipartite(inst.graph);
      std::int64_t const b = peel_bound(eps, cg.n());
      GuessGrid const grid(eps, cg.n());
      for (std::size_t cell = 0; cell < grid.size(); ++cell) {
        ++peel_c.cases;
        if (static_cast<std::int64_t>(peel(cg, grid.thresholds(cell)).iterations) > b) ++peel_c.failures;
      }
      for (double ratio : baseline_ratios(eps, cg.n())) {
        ++base_c.cases;
        if (static_cast<std::int64_t>(baseline_peel(cg, eps, ratio).passes) > b + 1) ++base_c.failures;
      }
    }
    for (Check* c : {&peel_c, &base_c}) {
      c->passed = c->failures == 0;
      c->detail = std::to_string(c->cases - c->failures) + "/" + std::to_string(c->cases) + " runs within bound";
      checks.push_back(*c);
    }
  }
  return finish("adversary", std::move(checks), started);
}

Report sampling_lemma(SamplingLemmaConfig const& cfg)
{
  auto const started = Clock::now();
  double const eps = cfg.epsilon;
  auto const low = static_cast<VertexId>(std::ceil(cfg.k / (1 + eps)) - 1);
  auto const high = static_cast<VertexId>(std::ceil((1 + eps) * cfg.k) + 1);
  if (high > cfg.right) throw InvalidArgument("sampling lemma graph needs right >= ceil((1+eps)k) + 1");

  std::vector<VertexId> src, dst;
  for (VertexId u = 0; u < cfg.left; ++u) {
    VertexId const deg = u < cfg.left / 2 ? low : high;
    for (VertexId j = 0; j < deg; ++j) {
      src.push_back(u);
      dst.push_back((u * 7 + j) % cfg.right);
    }
  }
  BipartiteGraph const g(std::max(cfg.left, cfg.right), src, dst);

  MpcParams params;
  params.epsilon = eps;
  params.n_at_start = std::uint64_t{cfg.left} + cfg.right;
  double const p = params.sampling_probability(cfg.k);
  double const pk = p * cfg.k;

  std::size_t bad_trials = 0;
  std::vector<std::uint64_t> deg(g.side_size());
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    Rng rng(derive_seed(cfg.seed, trial));
    auto const h = sample_edges(g, p, rng);
    bool bad = false;
    for (VertexId u = 0; u < cfg.left && !bad; ++u) {
      double const d = static_cast<double>(h.left_degree(u));
      bad = u < cfg.left / 2 ? d >= pk : d <= pk;
    }
    bad_trials += bad;
  }
  double const n = static_cast<double>(params.n_at_start);
  double const q = 2 / (n * n);
  double const sigma = std::sqrt(q * (1 - q) / static_cast<double>(cfg.trials));
  double const rate = static_cast<double>(bad_trials) / static_cast<double>(cfg.trials);

  Check c{"misclassification-rate", rate <= q + 3 * sigma, cfg.trials, bad_trials, {}};
  std::ostringstream d;
  d << "p = " << p << ", degrees " << low << "/" << high << ", rate " << rate << " vs bound " << q + 3 * sigma;
  c.detail = d.str();
  return finish("sampling-lemma", {c}, started);
}

Report determinism(DeterminismConfig const& cfg)
{
  auto const started = Clock::now();
  auto const dir = cfg.work_dir.empty() ? make_temp_dir() : cfg.work_dir;
  std::filesystem::create_directories(dir);

  auto write_input = [&](std::filesystem::path const& path, VertexId n, double prob) {
    std::ofstream out(path);
    write_snap(out, fixtures::random_digraph(n, prob, cfg.seed));
  };
  auto const big = dir / "input.txt";
  auto const small = dir / "input-small.txt";
  write_input(big, cfg.vertices, cfg.edge_probability);
  write_input(small, 10, 0.4);

  std::vector<Check> checks;
  for (auto const& name : engine_names()) {
    Engine const engine = parse_engine(name);
    Check c{name, true, 0, 0, {}};
    std::string outputs[2][2];
    for (int run = 0; run < 2; ++run) {
      ExperimentConfig ec;
      ec.engine = engine;
      ec.input = engine == Engine::exact ? small : big;
      ec.out_dir = dir / ("run" + std::to_string(run)) / name;
      ec.seed = cfg.seed;
      ec.order = StreamOrder{OrderMode::shuffle, cfg.seed};
      if (engine == Engine::mpc || engine == Engine::baseline_mpc) ec.delta = 0.6;
      run_experiment(ec);
      outputs[run][0] = slurp(ec.out_dir / "density.csv");
      outputs[run][1] = std::filesystem::exists(ec.out_dir / "rounds.csv") ? slurp(ec.out_dir / "rounds.csv") : "";
    }
    for (int f = 0; f < 2; ++f) {
      ++c.cases;
      if (outputs[0][f] != outputs[1][f]) ++c.failures;
    }
    c.passed = c.failures == 0 && !outputs[0][0].empty();
    c.detail = c.passed ? "CSV output identical across runs" : "outputs differ between runs";
    checks.push_back(c);
  }
  if (cfg.work_dir.empty()) std::filesystem::remove_all(dir);
  return finish("determinism", std::move(checks), started);
}

Report run_suite(std::string const& name)
{
  if (name == "small-oracle") return small_oracle();
  if (name == "sampling-lemma") return sampling_lemma();
  if (name == "adversary") return adversary();
  if (name == "determinism") return determinism();
  throw InvalidArgument("unknown suite '" + name + "'");
}

} // namespace dds::verify
