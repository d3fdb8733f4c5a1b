#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ridgehunt/point_cloud.hpp"
#include "ridgehunt/ridges.hpp"

namespace ridgehunt {

enum class Provenance { heuristic, null_mc, user, fallback };

const char* provenance_name(Provenance p);

struct ThresholdEstimate {
  double value = 0.0;
  Provenance provenance = Provenance::user;
};

/// Indices of values strictly above the threshold, order preserved.
std::vector<int> filter_sharp(const std::vector<double>& signature_values, double threshold);

/// Data-driven threshold: Gaussian KDE of the signature values on a 512-point
/// grid over [min, max]; returns the rightmost strict interior local minimum,
/// or the median (provenance fallback) when no interior minimum exists.
ThresholdEstimate threshold_heuristic(std::vector<double> signature_values, int grid_size = 512);

/// Null Monte-Carlo threshold: per replication, draw n uniform points on the
/// box, run SCMS with the same bandwidth and d, and record the maximum
/// signature among converged destinations; returns the requested upper
/// quantile of those maxima. Replications run concurrently on derived seeds.
double null_threshold_mc(const Box& domain, Eigen::Index n, double h, int d, int reps,
                         double quantile, std::uint64_t seed, bool parallel = true);

/// Monte-Carlo mean nearest-neighbor distance among n uniform points.
double rips_epsilon_null(const Box& domain, Eigen::Index n, int reps, std::uint64_t seed,
                         bool parallel = true);

/// Connected components of the graph joining points at distance <= epsilon
/// (equivalently: single-linkage clusters cut at epsilon). Components are
/// ordered by decreasing size, ties broken by smallest member index; members
/// are listed in ascending index order.
std::vector<std::vector<int>> rips_components(const Eigen::MatrixXd& points, double epsilon);

/// Upper quantile of the largest Rips-component size over uniform draws.
int min_size_null(const Box& domain, Eigen::Index n, double epsilon, int reps, double quantile,
                  std::uint64_t seed, bool parallel = true);

/// Sharp points of one dimension with their Rips components and pruning
/// verdicts; kept holds exactly when the component size is >= the min size.
struct FeatureSet {
  int d = 0;
  Eigen::MatrixXd sharp_points;            // one row per sharp point
  std::vector<int> sharp_origin;           // origin index of each sharp point
  std::vector<std::vector<int>> components;  // index groups into sharp_points
  std::vector<bool> kept;
};

FeatureSet make_feature_set(int d, const Eigen::MatrixXd& sharp_points,
                            const std::vector<int>& sharp_origin, double epsilon);

/// Set kept flags: kept iff component size >= min_size.
FeatureSet prune(FeatureSet fs, std::size_t min_size);

/// Hausdorff distance between two nonempty point sets (rows are points).
double hausdorff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Empirical upper quantile: the ceil(q * n)-th order statistic, so q = 1
/// gives the maximum.
double upper_quantile(std::vector<double> values, double q);

}  // namespace ridgehunt
