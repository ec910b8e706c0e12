#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wecfarm/evaluator.hpp"
#include "wecfarm/objective.hpp"
#include "wecfarm/params.hpp"

namespace wecfarm {

// Identifiers accepted by run_algorithm, in registry order.
const std::vector<std::string>& algorithm_ids();
bool is_algorithm(std::string_view id);

RunRecord run_algorithm(std::string_view id, const Problem& problem, const Budget& budget,
                        const OptimizerParams& params, std::uint64_t seed);

enum class FriedmanMode { per_run, per_mean };

struct ClimateSource {
  std::string site = "perth_like";  // used when csv is empty
  std::filesystem::path csv;
};

struct ExperimentConfig {
  std::vector<std::string> algorithms;
  std::size_t buoys = 16;
  ClimateSource climate;
  std::filesystem::path hydro_table;  // optional CSV
  Budget budget;
  std::vector<std::uint64_t> seeds;
  OptimizerParams params;
  std::filesystem::path output_dir = "results";
  std::size_t workers = 1;
  FriedmanMode friedman = FriedmanMode::per_run;
  std::size_t grid_omegas = 20;
  std::size_t grid_betas = 12;

  // Error(invalid_params / unknown_algorithm / invalid_budget).
  void validate() const;
};

// JSON document with sections "experiment", "climate", "budget", "ea",
// "ls_nm", "cls", "discrete", "hybrid". Relative paths resolve against
// `base_dir`.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

WaveClimate load_climate(const ClimateSource& source, std::size_t omegas = 20, std::size_t betas = 12);
std::shared_ptr<const FarmEvaluator> make_evaluator(const ExperimentConfig& config);

struct SummaryStats {
  double max = 0.0;
  double min = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;  // sample (n - 1)
};
SummaryStats summarize(const std::vector<double>& values);

// results[a][i] = final best of algorithm a on instance i. Rank 1 = highest,
// ties share the mean rank.
std::vector<double> friedman_ranks(const std::vector<std::vector<double>>& results);

struct AlgorithmResult {
  std::string algorithm;
  std::vector<RunRecord> runs;  // seed order
  SummaryStats stats;
};

struct ExperimentResult {
  std::vector<AlgorithmResult> algorithms;
  std::vector<double> friedman;  // empty with a single algorithm
};

// Runs every (algorithm, seed) pair and, when `write` is set, stores the
// outputs under config.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config, bool write = true);

struct RemovalStep {
  std::size_t remaining = 0;
  double power = 0.0;
  double q = 0.0;
  std::optional<std::size_t> removed;  // original index of the buoy dropped next
};
std::vector<RemovalStep> buoy_removal_analysis(const Layout& layout, const FarmEvaluator& evaluator);

struct LandscapeNode {
  Point position;
  bool masked = false;
  double buoy_power = 0.0;
  double total_power = 0.0;
};
struct Landscape {
  double step = 25.0;
  std::size_t per_side = 0;
  std::vector<LandscapeNode> nodes;  // row-major in x then y
};
Landscape landscape_scan(const Layout& fixed, const FarmEvaluator& evaluator, double step = 25.0);

}  // namespace wecfarm
