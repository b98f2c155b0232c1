#pragma once

#include "dds/ingest.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dds {

enum class Engine
{
  stream,
  mpc,
  baseline_stream,
  baseline_mpc,
  base_peel,
  exact,
};

[[nodiscard]] Engine parse_engine(std::string_view name);
[[nodiscard]] std::string engine_name(Engine e);
[[nodiscard]] std::vector<std::string> engine_names();

/// Invalid experiment configuration; fields() lists the offending flags.
class ConfigError : public Error
{
public:
  explicit ConfigError(std::vector<std::string> fields);
  [[nodiscard]] std::vector<std::string> const& fields() const noexcept { return fields_; }

private:
  std::vector<std::string> fields_;
};

struct ExperimentConfig
{
  Engine engine = Engine::stream;
  std::optional<double> epsilon; ///< 0.2 for stream engines, 0.6 for MPC engines, 0.2 otherwise
  std::optional<double> delta;   ///< required by mpc and baseline-mpc
  StreamOrder order;
  std::size_t batch_size = 10000;
  std::uint64_t seed = 0;
  ParseOptions parse;
  std::filesystem::path input;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> cache_dir;
  unsigned timing_repeats = 1;
  std::size_t memory_budget_mb = 1024;
  unsigned threads = 1;
  VertexId oracle_cap = 14;

  [[nodiscard]] double effective_epsilon() const noexcept;
  /// Offending field names; empty when valid.
  [[nodiscard]] std::vector<std::string> problems() const;
};

struct RunSummary
{
  Engine engine = Engine::stream;
  double epsilon = 0;
  VertexId n_vertices = 0;
  EdgeCount m = 0;
  double best_density = 0;
  std::size_t best_s = 0;
  std::size_t best_t = 0;
  std::size_t grid_cells = 0;
  std::optional<std::size_t> rounds_total;
  std::optional<std::size_t> passes;
  std::vector<std::filesystem::path> files;
};

/**
 * Loads the input, runs one engine and writes density.csv, summary.json and,
 * depending on the engine, rounds.csv and timing.csv into out_dir.
 * Throws ConfigError for invalid configurations and propagates ingest errors.
 */
RunSummary run_experiment(ExperimentConfig const& config);

} // namespace dds
