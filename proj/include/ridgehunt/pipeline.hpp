#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ridgehunt/filtering.hpp"
#include "ridgehunt/synthdata.hpp"

namespace ridgehunt {

enum class BandwidthMode { silverman, silverman_half, fixed };
enum class ThresholdMethod { heuristic, null_mc, fixed };
enum class RipsMethod { auto_null, fixed };
enum class MinSizeMethod { none, null_mc, fixed };

struct ThresholdSpec {
  ThresholdMethod method = ThresholdMethod::heuristic;
  double fixed_value = 0.0;
};

/// Everything one pipeline run depends on. With a seed set, the run is a
/// pure function of (input, config, seed).
struct PipelineConfig {
  std::string input_path;       // CSV input, or
  std::string generator;        // named generator with args
  nlohmann::json generator_args = nlohmann::json::object();

  std::vector<int> dims;        // which d to extract

  BandwidthMode bandwidth_mode = BandwidthMode::silverman;
  double bandwidth_value = 0.0;

  ThresholdSpec threshold_default;
  std::map<int, ThresholdSpec> threshold_by_dim;

  RipsMethod rips_method = RipsMethod::auto_null;
  double rips_value = 0.0;

  MinSizeMethod min_size_method = MinSizeMethod::null_mc;
  int min_size_value = 1;

  int mc_reps = 50;             // null Monte-Carlo replications
  double mc_quantile = 0.95;
  int eps_reps = 16;            // replications for the mean-NN epsilon

  double tolerance = 0.0;       // 0 = 1e-7 * data diameter
  int max_iter = 500;
  bool include_nonconverged = false;

  std::optional<std::uint64_t> seed;
  std::string output_dir;       // empty = no files written
  bool parallel = true;
};

/// One row of the per-point table.
struct PointRecord {
  int origin = -1;
  Eigen::VectorXd destination;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  bool degenerate_gap = false;
  double signature = 0.0;  // S_d at the destination
  int component = -1;      // index into the FeatureSet components, -1 = none
  bool kept = false;
};

struct DimensionReport {
  int d = 0;
  ThresholdEstimate threshold;
  double epsilon = 0.0;
  Provenance epsilon_provenance = Provenance::user;
  int min_size = 1;
  Provenance min_size_provenance = Provenance::user;
  std::vector<PointRecord> table;          // one row per mesh point
  std::vector<int> retained;               // table indices entering the analysis
  std::vector<double> signature_values;    // S_d on the retained points
  FeatureSet features;
};

struct RunReport {
  Eigen::Index n = 0;
  int D = 0;
  double bandwidth = 0.0;
  double tolerance = 0.0;
  std::vector<DimensionReport> dims;
  std::vector<std::string> labels;  // per input point, when the input had them
  double elapsed_seconds = 0.0;
  nlohmann::json config_echo;
};

/// Build the configured input (CSV or named generator).
LabeledCloud load_pipeline_input(const PipelineConfig& config);

/// Dispatch to a generator by CLI name with JSON-encoded arguments.
LabeledCloud generate_named(const std::string& name, const nlohmann::json& args,
                            std::uint64_t seed);

/// density fit -> per-d SCMS -> signature threshold -> Rips components ->
/// size pruning; writes diagnostics when config.output_dir is set.
RunReport run_pipeline(const PipelineConfig& config);

/// Write signatures_d{d}.csv, cdf_d{d}.csv, hist_d{d}.csv, features_d{d}.csv
/// and summary.json into dir.
void export_diagnostics(const RunReport& report, const std::string& dir);

/// Best kept-component Hausdorff distance per ground-truth structure.
struct StructureEval {
  std::string name;
  int dim = 0;
  int best_component = -1;  // -1 when no kept component of that dimension
  double hausdorff_distance = 0.0;
};

std::vector<StructureEval> evaluate_against_truth(const RunReport& report,
                                                  const GroundTruth& truth,
                                                  int sample_points = 2048);

nlohmann::json config_to_json(const PipelineConfig& config);

}  // namespace ridgehunt
