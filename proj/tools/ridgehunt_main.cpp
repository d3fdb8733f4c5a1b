// ridgehunt: extract low-dimensional high-density structures (modes,
// filaments, walls) from noisy point clouds.
//
// Verbs: gen (synthetic datasets), run (full pipeline), null-calibrate
// (uniform-reference tuning constants), eval (recovered features vs ground
// truth).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "ridgehunt/csv_io.hpp"
#include "ridgehunt/errors.hpp"
#include "ridgehunt/filtering.hpp"
#include "ridgehunt/pipeline.hpp"
#include "ridgehunt/synthdata.hpp"

namespace {

using namespace ridgehunt;

nlohmann::json parse_gen_args(const std::vector<std::string>& kvs) {
  nlohmann::json args = nlohmann::json::object();
  for (const std::string& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw config_error("generator argument must look like key=value: '" + kv + "'");
    }
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    auto parse_num = [](const std::string& s, double* out) {
      try {
        std::size_t used = 0;
        *out = std::stod(s, &used);
        return used == s.size();
      } catch (...) {
        return false;
      }
    };
    if (val.find(',') != std::string::npos) {
      nlohmann::json arr = nlohmann::json::array();
      std::stringstream ss(val);
      std::string cell;
      while (std::getline(ss, cell, ',')) {
        double num = 0.0;
        if (!parse_num(cell, &num)) {
          throw config_error("generator argument '" + key + "' has a non-numeric entry");
        }
        arr.push_back(num);
      }
      args[key] = arr;
    } else {
      double num = 0.0;
      args[key] = parse_num(val, &num) ? nlohmann::json(num) : nlohmann::json(val);
    }
  }
  return args;
}

ThresholdSpec parse_threshold(const std::string& s) {
  ThresholdSpec spec;
  if (s == "heuristic") {
    spec.method = ThresholdMethod::heuristic;
  } else if (s == "null-mc") {
    spec.method = ThresholdMethod::null_mc;
  } else {
    try {
      std::size_t used = 0;
      spec.fixed_value = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      spec.method = ThresholdMethod::fixed;
    } catch (...) {
      throw config_error("threshold must be 'heuristic', 'null-mc' or a number: '" + s + "'");
    }
  }
  return spec;
}

struct RunFlags {
  std::string input;
  std::string generator;
  std::vector<std::string> gen_args;
  std::vector<int> dims;
  std::string bandwidth = "auto";
  std::string threshold = "heuristic";
  std::vector<std::string> threshold_by_dim;
  std::string rips = "auto";
  std::string min_size = "null-mc";
  int reps = 50;
  double quantile = 0.95;
  int eps_reps = 16;
  double tol = 0.0;
  int max_iter = 500;
  bool include_nonconverged = false;
  std::int64_t seed = -1;
  std::string out;
};

void add_run_flags(CLI::App* cmd, RunFlags* f, bool require_out) {
  cmd->add_option("--input", f->input, "input CSV (one point per row)");
  cmd->add_option("--generator", f->generator, "named generator instead of a CSV");
  cmd->add_option("--arg", f->gen_args, "generator argument key=value")->take_all();
  cmd->add_option("--dims", f->dims, "feature dimensions to extract")
      ->required()
      ->delimiter(',');
  cmd->add_option("--bandwidth", f->bandwidth, "auto | auto-half | <value>");
  cmd->add_option("--threshold", f->threshold, "heuristic | null-mc | <value>");
  cmd->add_option("--threshold-d", f->threshold_by_dim, "per-d override d=spec")->take_all();
  cmd->add_option("--rips", f->rips, "auto | <epsilon>");
  cmd->add_option("--min-size", f->min_size, "none | null-mc | <count>");
  cmd->add_option("--reps", f->reps, "null Monte-Carlo replications");
  cmd->add_option("--quantile", f->quantile, "null Monte-Carlo quantile");
  cmd->add_option("--eps-reps", f->eps_reps, "replications for the mean-NN epsilon");
  cmd->add_option("--tol", f->tol, "SCMS stopping tolerance (0 = auto)");
  cmd->add_option("--max-iter", f->max_iter, "SCMS iteration cap");
  cmd->add_flag("--include-nonconverged", f->include_nonconverged,
                "keep non-converged trajectories in the analysis");
  cmd->add_option("--seed", f->seed, "RNG seed (required with null-mc methods)");
  auto* out = cmd->add_option("--out", f->out, "output directory");
  if (require_out) out->required();
}

PipelineConfig to_config(const RunFlags& f) {
  PipelineConfig config;
  config.input_path = f.input;
  config.generator = f.generator;
  config.generator_args = parse_gen_args(f.gen_args);
  config.dims = f.dims;
  if (f.bandwidth == "auto") {
    config.bandwidth_mode = BandwidthMode::silverman;
  } else if (f.bandwidth == "auto-half") {
    config.bandwidth_mode = BandwidthMode::silverman_half;
  } else {
    config.bandwidth_mode = BandwidthMode::fixed;
    try {
      config.bandwidth_value = std::stod(f.bandwidth);
    } catch (...) {
      throw config_error("bandwidth must be 'auto', 'auto-half' or a number");
    }
  }
  config.threshold_default = parse_threshold(f.threshold);
  for (const std::string& kv : f.threshold_by_dim) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw config_error("per-d threshold must look like d=spec: '" + kv + "'");
    }
    config.threshold_by_dim[std::stoi(kv.substr(0, eq))] = parse_threshold(kv.substr(eq + 1));
  }
  if (f.rips == "auto") {
    config.rips_method = RipsMethod::auto_null;
  } else {
    config.rips_method = RipsMethod::fixed;
    try {
      config.rips_value = std::stod(f.rips);
    } catch (...) {
      throw config_error("rips must be 'auto' or a number");
    }
  }
  if (f.min_size == "none") {
    config.min_size_method = MinSizeMethod::none;
  } else if (f.min_size == "null-mc") {
    config.min_size_method = MinSizeMethod::null_mc;
  } else {
    config.min_size_method = MinSizeMethod::fixed;
    try {
      config.min_size_value = std::stoi(f.min_size);
    } catch (...) {
      throw config_error("min-size must be 'none', 'null-mc' or an integer");
    }
  }
  config.mc_reps = f.reps;
  config.mc_quantile = f.quantile;
  config.eps_reps = f.eps_reps;
  config.tolerance = f.tol;
  config.max_iter = f.max_iter;
  config.include_nonconverged = f.include_nonconverged;
  if (f.seed >= 0) config.seed = static_cast<std::uint64_t>(f.seed);
  config.output_dir = f.out;
  return config;
}

void print_run_summary(const RunReport& report) {
  std::printf("n = %lld, D = %d, h = %s\n", static_cast<long long>(report.n), report.D,
              format_double(report.bandwidth).c_str());
  for (const auto& dim : report.dims) {
    int kept = 0;
    for (bool k : dim.features.kept) kept += k ? 1 : 0;
    std::printf(
        "d = %d: threshold %s (%s), epsilon %s, min size %d, %zu sharp points, "
        "%zu components, %d kept\n",
        dim.d, format_double(dim.threshold.value).c_str(),
        provenance_name(dim.threshold.provenance), format_double(dim.epsilon).c_str(),
        dim.min_size, dim.features.sharp_origin.size(), dim.features.components.size(), kept);
  }
}

int run_main(const RunFlags& flags) {
  const RunReport report = run_pipeline(to_config(flags));
  print_run_summary(report);
  return 0;
}

int gen_main(const std::string& name, const std::vector<std::string>& kvs, std::int64_t seed,
             const std::string& out) {
  if (seed < 0) throw config_error("gen: --seed is required");
  const LabeledCloud lc =
      generate_named(name, parse_gen_args(kvs), static_cast<std::uint64_t>(seed));
  write_cloud(out, lc.cloud, &lc.labels);
  if (!lc.truth.structures.empty()) save_truth_json(lc.truth, out + ".truth.json");
  std::printf("wrote %lld points (D = %d) to %s\n", static_cast<long long>(lc.cloud.size()),
              lc.cloud.dim(), out.c_str());
  return 0;
}

int null_calibrate_main(const std::string& input, std::vector<double> lo, std::vector<double> hi,
                        Eigen::Index n, double h, int d, int reps, double quantile,
                        std::int64_t seed) {
  if (seed < 0) throw config_error("null-calibrate: --seed is required");
  Box box;
  if (!input.empty()) {
    const CloudReadResult read = read_cloud(input);
    box = Box::bounding(read.cloud);
    if (n == 0) n = read.cloud.size();
    if (!(h > 0.0)) h = silverman_bandwidth(read.cloud);
  } else {
    if (lo.empty() || lo.size() != hi.size()) {
      throw config_error("null-calibrate: need --lo/--hi of equal length or --input");
    }
    box.lo = Eigen::Map<const Eigen::VectorXd>(lo.data(), lo.size());
    box.hi = Eigen::Map<const Eigen::VectorXd>(hi.data(), hi.size());
    box.validate();
    if (n == 0) throw config_error("null-calibrate: --n is required with --lo/--hi");
    if (!(h > 0.0)) throw config_error("null-calibrate: --h is required with --lo/--hi");
  }
  const std::uint64_t s = static_cast<std::uint64_t>(seed);
  nlohmann::json out;
  out["n"] = n;
  out["h"] = h;
  out["d"] = d;
  out["threshold"] = null_threshold_mc(box, n, h, d, reps, quantile, s);
  const double eps = rips_epsilon_null(box, n, 16, s + 1);
  out["epsilon"] = eps;
  out["min_size"] = min_size_null(box, n, eps, reps, quantile, s + 2);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int eval_main(const RunFlags& flags, const std::string& truth_path) {
  const GroundTruth truth = load_truth_json(truth_path);
  const RunReport report = run_pipeline(to_config(flags));
  print_run_summary(report);
  for (const auto& ev : evaluate_against_truth(report, truth)) {
    if (ev.best_component < 0) {
      std::printf("structure %-10s d=%d  NOT RECOVERED\n", ev.name.c_str(), ev.dim);
    } else {
      std::printf("structure %-10s d=%d  component %d  hausdorff %s\n", ev.name.c_str(), ev.dim,
                  ev.best_component, format_double(ev.hausdorff_distance).c_str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"singular-structure extraction from point clouds"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "write a synthetic labeled dataset");
  std::string gen_name, gen_out;
  std::vector<std::string> gen_kvs;
  std::int64_t gen_seed = -1;
  gen->add_option("name", gen_name,
                  "modes-ring-2d | modes-ring-wall-3d | intersecting-curves | "
                  "voronoi-foam | uniform-box")
      ->required();
  gen->add_option("--arg", gen_kvs, "generator argument key=value")->take_all();
  gen->add_option("--seed", gen_seed, "RNG seed")->required();
  gen->add_option("--out", gen_out, "output CSV path")->required();

  auto* run = app.add_subcommand("run", "run the extraction pipeline");
  RunFlags run_flags;
  add_run_flags(run, &run_flags, /*require_out=*/true);

  auto* nullcal = app.add_subcommand("null-calibrate", "uniform-reference tuning constants");
  std::string nc_input;
  std::vector<double> nc_lo, nc_hi;
  std::int64_t nc_n = 0, nc_seed = -1;
  double nc_h = 0.0, nc_quantile = 0.95;
  int nc_d = 0, nc_reps = 50;
  nullcal->add_option("--input", nc_input, "CSV whose bounding box defines the domain");
  nullcal->add_option("--lo", nc_lo, "box lower corner")->delimiter(',');
  nullcal->add_option("--hi", nc_hi, "box upper corner")->delimiter(',');
  nullcal->add_option("--n", nc_n, "points per replication");
  nullcal->add_option("--bandwidth", nc_h, "bandwidth (defaults to Silverman of --input)");
  nullcal->add_option("--d", nc_d, "feature dimension")->required();
  nullcal->add_option("--reps", nc_reps, "replications");
  nullcal->add_option("--quantile", nc_quantile, "upper quantile");
  nullcal->add_option("--seed", nc_seed, "RNG seed")->required();

  auto* eval = app.add_subcommand("eval", "Hausdorff distances against ground truth");
  RunFlags eval_flags;
  std::string truth_path;
  add_run_flags(eval, &eval_flags, /*require_out=*/false);
  eval->add_option("--truth", truth_path, "truth JSON written by gen")->required();

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return gen_main(gen_name, gen_kvs, gen_seed, gen_out);
    if (run->parsed()) return run_main(run_flags);
    if (nullcal->parsed()) {
      return null_calibrate_main(nc_input, nc_lo, nc_hi, nc_n, nc_h, nc_d, nc_reps, nc_quantile,
                                 nc_seed);
    }
    if (eval->parsed()) return eval_main(eval_flags, truth_path);
    return 4;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 4;
  } catch (const ridgehunt::io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ridgehunt::config_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
