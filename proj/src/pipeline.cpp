#include "ridgehunt/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ridgehunt/csv_io.hpp"
#include "ridgehunt/errors.hpp"
#include "ridgehunt/ridges.hpp"
#include "ridgehunt/rng.hpp"

namespace ridgehunt {

namespace {

double arg_num(const nlohmann::json& args, const std::string& key, double fallback) {
  if (!args.contains(key)) return fallback;
  if (!args.at(key).is_number()) throw config_error("generator arg '" + key + "' must be numeric");
  return args.at(key).get<double>();
}

int arg_int(const nlohmann::json& args, const std::string& key, int fallback) {
  return static_cast<int>(std::llround(arg_num(args, key, fallback)));
}

Eigen::VectorXd arg_vec(const nlohmann::json& args, const std::string& key) {
  if (!args.contains(key) || !args.at(key).is_array()) {
    throw config_error("generator arg '" + key + "' must be an array");
  }
  const auto& arr = args.at(key);
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[Eigen::Index(i)] = arr[i].get<double>();
  return v;
}

const ThresholdSpec& threshold_spec_for(const PipelineConfig& config, int d) {
  const auto it = config.threshold_by_dim.find(d);
  return it == config.threshold_by_dim.end() ? config.threshold_default : it->second;
}

bool uses_null_mc(const PipelineConfig& config) {
  if (config.rips_method == RipsMethod::auto_null) return true;
  if (config.min_size_method == MinSizeMethod::null_mc) return true;
  if (config.threshold_default.method == ThresholdMethod::null_mc) return true;
  for (const auto& [d, spec] : config.threshold_by_dim) {
    (void)d;
    if (spec.method == ThresholdMethod::null_mc) return true;
  }
  return false;
}

std::string method_name(ThresholdMethod m) {
  switch (m) {
    case ThresholdMethod::heuristic: return "heuristic";
    case ThresholdMethod::null_mc: return "null-mc";
    case ThresholdMethod::fixed: return "fixed";
  }
  return "?";
}

}  // namespace

LabeledCloud generate_named(const std::string& name, const nlohmann::json& args,
                            std::uint64_t seed) {
  if (name == "modes-ring-2d") {
    return gen_modes_ring_2d(arg_int(args, "n-per-mode", 150), arg_int(args, "n-ring", 510),
                             arg_num(args, "noise-sd", 0.2), arg_int(args, "clutter", 90), seed);
  }
  if (name == "modes-ring-wall-3d") {
    ModesRingWall3dCounts counts;
    counts.per_mode = arg_int(args, "n-per-mode", 250);
    counts.ring = arg_int(args, "n-ring", 1200);
    counts.wall = arg_int(args, "n-wall", 1500);
    return gen_modes_ring_wall_3d(counts, arg_num(args, "noise-sd", 0.2),
                                  arg_int(args, "clutter", 300), seed);
  }
  if (name == "intersecting-curves") {
    return gen_intersecting_curves(arg_int(args, "n", 600), arg_num(args, "noise-sd", 0.1),
                                   arg_int(args, "clutter", 120), seed);
  }
  if (name == "voronoi-foam") {
    return gen_voronoi_foam(arg_int(args, "seeds", 12), arg_num(args, "f-node", 0.05),
                            arg_num(args, "f-filament", 0.15), arg_num(args, "f-wall", 0.5),
                            arg_int(args, "n", 3000), arg_num(args, "clutter-frac", 0.3), seed);
  }
  if (name == "uniform-box") {
    Box box;
    box.lo = arg_vec(args, "lo");
    box.hi = arg_vec(args, "hi");
    LabeledCloud out;
    out.cloud = gen_uniform_box(box, arg_int(args, "n", 500), seed);
    out.labels.assign(out.cloud.size(), "clutter");
    return out;
  }
  throw config_error("unknown generator '" + name + "'");
}

LabeledCloud load_pipeline_input(const PipelineConfig& config) {
  if (!config.input_path.empty() && !config.generator.empty()) {
    throw config_error("pipeline: give either an input path or a generator, not both");
  }
  if (!config.input_path.empty()) {
    CloudReadResult read = read_cloud(config.input_path);
    LabeledCloud out;
    out.cloud = std::move(read.cloud);
    out.labels = std::move(read.labels);
    return out;
  }
  if (!config.generator.empty()) {
    if (!config.seed) throw config_error("pipeline: generator input requires a seed");
    return generate_named(config.generator, config.generator_args, *config.seed);
  }
  throw config_error("pipeline: no input configured");
}

RunReport run_pipeline(const PipelineConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();

  if (config.dims.empty()) throw config_error("pipeline: no dimensions requested");
  if (uses_null_mc(config) && !config.seed) {
    throw config_error("pipeline: null Monte-Carlo methods require a seed");
  }

  const LabeledCloud input = load_pipeline_input(config);
  const PointCloud& cloud = input.cloud;
  const int D = cloud.dim();
  for (int d : config.dims) {
    if (d < 0 || d >= D) {
      throw config_error("pipeline: dimension " + std::to_string(d) +
                         " out of range for D = " + std::to_string(D));
    }
  }

  double h = 0.0;
  switch (config.bandwidth_mode) {
    case BandwidthMode::silverman: h = silverman_bandwidth(cloud); break;
    case BandwidthMode::silverman_half: h = 0.5 * silverman_bandwidth(cloud); break;
    case BandwidthMode::fixed:
      if (!(config.bandwidth_value > 0.0)) throw config_error("pipeline: bandwidth must be > 0");
      h = config.bandwidth_value;
      break;
  }
  const DensityModel model(cloud, h);
  const double tol = config.tolerance > 0.0 ? config.tolerance : default_tolerance(model);
  const Box domain = Box::bounding(cloud);
  const std::uint64_t seed = config.seed.value_or(0);

  RunReport report;
  report.n = cloud.size();
  report.D = D;
  report.bandwidth = h;
  report.tolerance = tol;
  report.labels = input.labels;
  report.config_echo = config_to_json(config);

  // epsilon and the component-size floor do not depend on d
  double epsilon = 0.0;
  Provenance epsilon_prov;
  if (config.rips_method == RipsMethod::auto_null) {
    epsilon = rips_epsilon_null(domain, cloud.size(), config.eps_reps, derive_seed(seed, 9001),
                                config.parallel);
    epsilon_prov = Provenance::null_mc;
  } else {
    if (!(config.rips_value > 0.0)) throw config_error("pipeline: rips epsilon must be > 0");
    epsilon = config.rips_value;
    epsilon_prov = Provenance::user;
  }
  int min_size = 1;
  Provenance min_size_prov = Provenance::user;
  switch (config.min_size_method) {
    case MinSizeMethod::none:
      min_size = 1;
      break;
    case MinSizeMethod::fixed:
      if (config.min_size_value < 1) throw config_error("pipeline: min size must be >= 1");
      min_size = config.min_size_value;
      break;
    case MinSizeMethod::null_mc:
      min_size = min_size_null(domain, cloud.size(), epsilon, config.mc_reps, config.mc_quantile,
                               derive_seed(seed, 9002), config.parallel);
      min_size_prov = Provenance::null_mc;
      break;
  }

  for (int d : config.dims) {
    DimensionReport dim;
    dim.d = d;
    dim.epsilon = epsilon;
    dim.epsilon_provenance = epsilon_prov;
    dim.min_size = min_size;
    dim.min_size_provenance = min_size_prov;

    const RidgeSet ridge =
        estimate_ridge(model, d, cloud.matrix(), tol, config.max_iter, config.parallel);

    dim.table.resize(ridge.points.size());
    for (std::size_t i = 0; i < ridge.points.size(); ++i) {
      const RidgePoint& p = ridge.points[i];
      PointRecord& rec = dim.table[i];
      rec.origin = p.origin_index;
      rec.destination = p.destination;
      rec.converged = p.converged;
      rec.iterations = p.iterations;
      rec.residual = p.residual;
      rec.degenerate_gap = p.degenerate_gap;
      rec.signature = p.signature.size() > d ? p.signature[d] : 0.0;
      if (p.converged || config.include_nonconverged) {
        dim.retained.push_back(static_cast<int>(i));
        dim.signature_values.push_back(rec.signature);
      }
    }

    const ThresholdSpec& spec = threshold_spec_for(config, d);
    switch (spec.method) {
      case ThresholdMethod::heuristic:
        dim.threshold = threshold_heuristic(dim.signature_values);
        break;
      case ThresholdMethod::null_mc:
        dim.threshold.value =
            null_threshold_mc(domain, cloud.size(), h, d, config.mc_reps, config.mc_quantile,
                              derive_seed(seed, 7000 + std::uint64_t(d)), config.parallel);
        dim.threshold.provenance = Provenance::null_mc;
        break;
      case ThresholdMethod::fixed:
        dim.threshold.value = spec.fixed_value;
        dim.threshold.provenance = Provenance::user;
        break;
    }

    const std::vector<int> sharp_local = filter_sharp(dim.signature_values, dim.threshold.value);
    Eigen::MatrixXd sharp_pts(sharp_local.size(), D);
    std::vector<int> sharp_origin(sharp_local.size());
    for (std::size_t k = 0; k < sharp_local.size(); ++k) {
      const int table_idx = dim.retained[sharp_local[k]];
      sharp_pts.row(Eigen::Index(k)) = dim.table[table_idx].destination.transpose();
      sharp_origin[k] = dim.table[table_idx].origin;
    }
    dim.features =
        prune(make_feature_set(d, sharp_pts, sharp_origin, epsilon), std::size_t(min_size));

    for (std::size_t c = 0; c < dim.features.components.size(); ++c) {
      for (int member : dim.features.components[c]) {
        const int table_idx = dim.retained[sharp_local[member]];
        dim.table[table_idx].component = static_cast<int>(c);
        dim.table[table_idx].kept = dim.features.kept[c];
      }
    }
    report.dims.push_back(std::move(dim));
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  if (!config.output_dir.empty()) export_diagnostics(report, config.output_dir);
  return report;
}

void export_diagnostics(const RunReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("export diagnostics: cannot create directory " + dir);

  auto open = [&](const std::string& name) {
    std::ofstream out(fs::path(dir) / name);
    if (!out) throw io_error("export diagnostics: cannot write " + name);
    return out;
  };

  for (const DimensionReport& dim : report.dims) {
    const std::string suffix = "_d" + std::to_string(dim.d) + ".csv";
    {
      auto out = open("signatures" + suffix);
      out << "origin,signature\n";
      for (std::size_t k = 0; k < dim.retained.size(); ++k) {
        out << dim.table[dim.retained[k]].origin << ","
            << format_double(dim.signature_values[k]) << "\n";
      }
    }
    {
      auto out = open("cdf" + suffix);
      out << "signature,cdf\n";
      std::vector<double> sorted = dim.signature_values;
      std::sort(sorted.begin(), sorted.end());
      const double n = static_cast<double>(sorted.size());
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        out << format_double(sorted[i]) << "," << format_double(double(i + 1) / n) << "\n";
      }
    }
    {
      auto out = open("hist" + suffix);
      out << "bin_lo,bin_hi,count\n";
      if (!dim.signature_values.empty()) {
        const auto [mn, mx] = std::minmax_element(dim.signature_values.begin(),
                                                  dim.signature_values.end());
        const int bins = *mx > *mn ? 32 : 1;
        const double width = (*mx - *mn) / bins;
        std::vector<long> count(bins, 0);
        for (double v : dim.signature_values) {
          int b = width > 0.0 ? static_cast<int>((v - *mn) / width) : 0;
          if (b >= bins) b = bins - 1;
          ++count[b];
        }
        for (int b = 0; b < bins; ++b) {
          out << format_double(*mn + b * width) << "," << format_double(*mn + (b + 1) * width)
              << "," << count[b] << "\n";
        }
      }
    }
    {
      auto out = open("features" + suffix);
      for (int j = 0; j < report.D; ++j) out << "x" << (j + 1) << ",";
      out << "component,kept\n";
      const FeatureSet& fs = dim.features;
      for (std::size_t c = 0; c < fs.components.size(); ++c) {
        for (int member : fs.components[c]) {
          for (int j = 0; j < report.D; ++j) {
            out << format_double(fs.sharp_points(member, j)) << ",";
          }
          out << c << "," << (fs.kept[c] ? 1 : 0) << "\n";
        }
      }
    }
  }

  nlohmann::json summary;
  summary["config"] = report.config_echo;
  summary["n"] = report.n;
  summary["D"] = report.D;
  summary["bandwidth"] = report.bandwidth;
  summary["tolerance"] = report.tolerance;
  summary["timing_seconds"] = report.elapsed_seconds;
  summary["dimensions"] = nlohmann::json::array();
  for (const DimensionReport& dim : report.dims) {
    nlohmann::json j;
    j["d"] = dim.d;
    j["threshold"] = dim.threshold.value;
    j["threshold_provenance"] = provenance_name(dim.threshold.provenance);
    j["epsilon"] = dim.epsilon;
    j["epsilon_provenance"] = provenance_name(dim.epsilon_provenance);
    j["min_size"] = dim.min_size;
    j["min_size_provenance"] = provenance_name(dim.min_size_provenance);
    j["points"] = dim.table.size();
    j["retained"] = dim.retained.size();
    j["sharp"] = dim.features.sharp_origin.size();
    nlohmann::json sizes = nlohmann::json::array();
    nlohmann::json kept = nlohmann::json::array();
    for (std::size_t c = 0; c < dim.features.components.size(); ++c) {
      sizes.push_back(dim.features.components[c].size());
      kept.push_back(static_cast<bool>(dim.features.kept[c]));
    }
    j["component_sizes"] = sizes;
    j["component_kept"] = kept;
    summary["dimensions"].push_back(std::move(j));
  }
  auto out = open("summary.json");
  out << summary.dump(2) << "\n";
}

std::vector<StructureEval> evaluate_against_truth(const RunReport& report,
                                                  const GroundTruth& truth, int sample_points) {
  std::vector<StructureEval> evals;
  for (const StructureTruth& st : truth.structures) {
    if (st.kind == StructureTruth::Kind::seeds) continue;
    const DimensionReport* dim = nullptr;
    for (const auto& d : report.dims) {
      if (d.d == st.dim) dim = &d;
    }
    if (!dim) continue;
    StructureEval ev;
    ev.name = st.name;
    ev.dim = st.dim;
    ev.best_component = -1;
    ev.hausdorff_distance = std::numeric_limits<double>::infinity();
    const Eigen::MatrixXd ref = st.sample(sample_points);
    for (std::size_t c = 0; c < dim->features.components.size(); ++c) {
      if (!dim->features.kept[c]) continue;
      const auto& members = dim->features.components[c];
      Eigen::MatrixXd pts(members.size(), report.D);
      for (std::size_t k = 0; k < members.size(); ++k) {
        pts.row(Eigen::Index(k)) = dim->features.sharp_points.row(members[k]);
      }
      const double hd = hausdorff(pts, ref);
      if (hd < ev.hausdorff_distance) {
        ev.hausdorff_distance = hd;
        ev.best_component = static_cast<int>(c);
      }
    }
    evals.push_back(std::move(ev));
  }
  return evals;
}

nlohmann::json config_to_json(const PipelineConfig& config) {
  nlohmann::json j;
  j["input_path"] = config.input_path;
  j["generator"] = config.generator;
  j["generator_args"] = config.generator_args;
  j["dims"] = config.dims;
  switch (config.bandwidth_mode) {
    case BandwidthMode::silverman: j["bandwidth"] = "auto"; break;
    case BandwidthMode::silverman_half: j["bandwidth"] = "auto-half"; break;
    case BandwidthMode::fixed: j["bandwidth"] = config.bandwidth_value; break;
  }
  j["threshold"] = method_name(config.threshold_default.method);
  if (config.threshold_default.method == ThresholdMethod::fixed) {
    j["threshold_value"] = config.threshold_default.fixed_value;
  }
  for (const auto& [d, spec] : config.threshold_by_dim) {
    j["threshold_d" + std::to_string(d)] = method_name(spec.method);
    if (spec.method == ThresholdMethod::fixed) {
      j["threshold_value_d" + std::to_string(d)] = spec.fixed_value;
    }
  }
  j["rips"] = config.rips_method == RipsMethod::auto_null ? nlohmann::json("auto-null")
                                                          : nlohmann::json(config.rips_value);
  switch (config.min_size_method) {
    case MinSizeMethod::none: j["min_size"] = "none"; break;
    case MinSizeMethod::null_mc: j["min_size"] = "null-mc"; break;
    case MinSizeMethod::fixed: j["min_size"] = config.min_size_value; break;
  }
  j["mc_reps"] = config.mc_reps;
  j["mc_quantile"] = config.mc_quantile;
  j["eps_reps"] = config.eps_reps;
  j["tolerance"] = config.tolerance;
  j["max_iter"] = config.max_iter;
  j["include_nonconverged"] = config.include_nonconverged;
  if (config.seed) j["seed"] = *config.seed;
  return j;
}

}  // namespace ridgehunt
