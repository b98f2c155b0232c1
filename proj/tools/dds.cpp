// dds: run a densest-subgraph engine on a SNAP edge list, or a verification suite.

#include "dds/harness.hpp"
#include "dds/verify.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Approximate directed densest subgraph: streaming, MPC simulation and baselines"};
  app.set_version_flag("--version", "dds 0.1.0");

  std::string engine = "stream";
  std::string order = "file";
  std::string suite;
  std::optional<double> epsilon, delta;
  dds::ExperimentConfig cfg;
  std::string cache_dir;

  app.add_option("--engine", engine, "Engine to run")
    ->check(CLI::IsMember(dds::engine_names()))
    ->capture_default_str();
  app.add_option("--epsilon", epsilon, "Grid step (default 0.2; 0.6 for mpc engines)");
  app.add_option("--delta", delta, "Per-machine memory exponent, required by mpc engines");
  app.add_option("--order", order, "Stream order: file, shuffle:SEED or time")->capture_default_str();
  app.add_option("--batch-size", cfg.batch_size, "Edges per timing batch")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  app.add_flag("--dedupe", cfg.parse.dedupe, "Drop repeated (u, v) edges");
  app.add_flag("--drop-self-loops", cfg.parse.drop_self_loops, "Drop u -> u edges");
  app.add_option("--input", cfg.input, "SNAP edge list");
  app.add_option("--out-dir", cfg.out_dir, "Directory for CSV and JSON output");
  app.add_option("--cache-dir", cache_dir, "Keep a binary DGEL1 copy of the input here");
  app.add_option("--timing-repeats", cfg.timing_repeats, "Repeat the timed stream, keeping each batch's fastest run")
    ->capture_default_str();
  app.add_option("--memory-budget-mb", cfg.memory_budget_mb, "Streaming counter memory per replay chunk")
    ->capture_default_str();
  app.add_option("--threads", cfg.threads, "Workers for grid cells (0 = all cores)")->capture_default_str();
  app.add_option("--verify", suite, "Run a verification suite instead")->check(CLI::IsMember(dds::verify::suite_names()));

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (!suite.empty()) {
    try {
      auto const report = dds::verify::run_suite(suite);
      std::cout << report.to_json() << '\n';
      return report.passed ? kOk : kVerifyFailed;
    } catch (std::exception const& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
    }
  }

  try {
    cfg.engine = dds::parse_engine(engine);
    cfg.epsilon = epsilon;
    cfg.delta = delta;
    cfg.order = dds::StreamOrder::parse(order);
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
    auto const summary = dds::run_experiment(cfg);
    std::cerr << dds::engine_name(summary.engine) << ": n=" << summary.n_vertices << " m=" << summary.m
              << " best density " << summary.best_density << " (|S|=" << summary.best_s << ", |T|=" << summary.best_t
              << ")\n";
    for (auto const& f : summary.files)
      std::cout << f.string() << '\n';
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
