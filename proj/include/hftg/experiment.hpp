#pragma once

#include "hftg/forward.hpp"
#include "hftg/frac_ops.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hftg {

enum class Problem { Deconvolution, HeatSource, Elliptic };

std::string_view to_string(Problem p);
Problem parse_problem(std::string_view name);

// Fractional order, or the "tv" label (alpha = 1, central difference: the TG baseline).
struct Order {
  double alpha = 0.9;
  bool tv = false;

  double value() const { return tv ? 1.0 : alpha; }
  std::string label() const;
};

struct ExperimentConfig {
  Problem problem = Problem::Deconvolution;
  double a = 1.0;
  double b = 2.0;
  int intervals = 100;
  Order order;
  double lambda = 2.0;
  double gamma = 0.01;
  double length = 0.02;
  double noise_sigma = 0.01;
  double kernel_width = 0.03;  // deconvolution only
  HeatSettings heat;           // heat_source only
  double beta = 0.03;
  std::int64_t n_samples = 200000;
  std::int64_t burn_in = 40000;
  std::int64_t thin = 1;
  std::uint64_t seed = 1;
  bool prior_initial_state = false;  // false: u0 = 0
  int repeats = 1;
  std::optional<std::filesystem::path> data_file;
  bool export_chain = false;
  std::filesystem::path output_dir = "out";
};

// Per-problem settings of the reference experiments, including the default lambda for alpha.
ExperimentConfig default_config(Problem problem);

// Default lambda for (problem, order); nullopt when the table has no entry.
std::optional<double> default_lambda(Problem problem, const Order& order);

/// Parses and validates a JSON config; missing fields take the per-problem defaults.
/// Throws ConfigError naming the offending field ("parse" with line/column for syntax errors).
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

// Piecewise true field of each reference problem at a single point.
double truth_value(Problem problem, double x);

// Nodewise truth of each reference problem; the grid must cover the problem's domain.
Field make_truth(Problem problem, const LogGrid& grid);

double relative_error(const Field& estimate, const Field& truth);

struct MetricsReport {
  double relative_l2_error = 0.0;
  double acceptance_rate = 0.0;
  std::int64_t n_samples = 0;
  std::int64_t burn_in = 0;
  double wall_time_seconds = 0.0;
  std::vector<double> repeat_errors;
  double prior_jitter = 0.0;
  nlohmann::json config;
};

/// End to end: truth, synthetic data, prior, regularizer, pCN, posterior mean.
/// Writes truth.csv, data.csv, posterior_mean.csv and metrics.json to cfg.output_dir
/// (plus chain.csv when export_chain).  Artifacts are removed if the run fails.
MetricsReport run_experiment(const ExperimentConfig& cfg);

struct MeshRow {
  int intervals = 0;
  double relative_l2_error = 0.0;
  double acceptance_rate = 0.0;
};

/// Runs the base config at each grid size; row seed = base seed + N, output in
/// <output_dir>/N<N>/, table in <output_dir>/mesh_study.csv.
std::vector<MeshRow> mesh_study(const ExperimentConfig& base, const std::vector<int>& sizes);

}  // namespace hftg
