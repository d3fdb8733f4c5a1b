#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace ridgehunt {

/// Ordered sample of n points in R^D (one point per row).
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(Eigen::MatrixXd points);

  Eigen::Index size() const { return points_.rows(); }
  int dim() const { return static_cast<int>(points_.cols()); }
  const Eigen::MatrixXd& matrix() const { return points_; }
  Eigen::VectorXd point(Eigen::Index i) const { return points_.row(i).transpose(); }

  /// Per-coordinate sample standard deviations (n-1 denominator; 0 when n == 1).
  Eigen::VectorXd column_std() const;

 private:
  Eigen::MatrixXd points_;
};

/// Axis-aligned box, used as the null-calibration domain and for clutter.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double diameter() const { return (hi - lo).norm(); }
  bool contains(const Eigen::VectorXd& x) const;
  void validate() const;  // throws config_error on lo/hi mismatch or hi < lo

  static Box of(std::initializer_list<double> lo_list, std::initializer_list<double> hi_list);
  static Box bounding(const PointCloud& cloud);
};

/// i.i.d. uniform sample on the box, deterministic per seed.
PointCloud sample_uniform_box(const Box& box, Eigen::Index n, std::uint64_t seed);

}  // namespace ridgehunt
