#pragma once

#include "dds/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

// Property suites behind `dds --verify`. Each returns a report instead of
// throwing so that every check is listed even when some fail.
namespace dds::verify {

struct Check
{
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string detail;
};

struct Report
{
  std::string suite;
  bool passed = false;
  double seconds = 0;
  std::vector<Check> checks;

  [[nodiscard]] Check const* find(std::string const& name) const;
  [[nodiscard]] std::string to_json() const;
};

[[nodiscard]] std::vector<std::string> suite_names();

struct SmallOracleConfig
{
  std::size_t instances = 200;
  VertexId max_side = 12;
  std::uint64_t seed = 20240917;
  double epsilon = 0.2;
  double delta = 0.5;
  std::size_t shuffles = 3;
  std::size_t mpc_seeds = 5;
  double mpc_required_fraction = 0.95;
};

/// base-peel, stream, mpc and baseline approximation ratios against exact_densest.
[[nodiscard]] Report small_oracle(SmallOracleConfig const& cfg = {});

struct AdversaryConfig
{
  int D = 5;
  int extra = 200;
  double epsilon = 0.2;
  std::size_t unguarded_min_iterations = 150;
  /// Iteration and pass bounds are also checked on this many corpus graphs.
  std::size_t corpus_instances = 200;
  VertexId corpus_max_side = 12;
  std::uint64_t corpus_seed = 20240917;
};

[[nodiscard]] Report adversary(AdversaryConfig const& cfg = {});

struct SamplingLemmaConfig
{
  VertexId left = 512;
  VertexId right = 512;
  double k = 64;
  double epsilon = 0.5;
  std::size_t trials = 1000;
  std::uint64_t seed = 7;
};

/**
 * Half of the left vertices get degree ceil(k/(1+eps)) - 1 and half
 * ceil((1+eps)k) + 1; each trial samples at p = min(1, 18 ln n/(eps^2 k))
 * with n = left + right and counts trials where some vertex lands on the wrong
 * side of p k. Passes when the rate is <= 2/n^2 + 3 sigma.
 */
[[nodiscard]] Report sampling_lemma(SamplingLemmaConfig const& cfg = {});

struct DeterminismConfig
{
  std::filesystem::path work_dir; ///< defaults to a fresh temporary directory
  VertexId vertices = 60;
  double edge_probability = 0.08;
  std::uint64_t seed = 11;
};

/// Runs every engine twice with identical inputs and compares CSV bytes (timing.csv excluded).
[[nodiscard]] Report determinism(DeterminismConfig const& cfg = {});

/// Runs a suite by name with default settings; throws InvalidArgument for unknown names.
[[nodiscard]] Report run_suite(std::string const& name);

} // namespace dds::verify
