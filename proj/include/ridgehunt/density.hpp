#pragma once

#include <Eigen/Dense>

#include "ridgehunt/point_cloud.hpp"

namespace ridgehunt {

/// Density, gradient of log p, and Hessian of log p at one point.
struct LocalDensity {
  Eigen::VectorXd x;
  double p = 0.0;
  Eigen::VectorXd g;  // grad log p
  Eigen::MatrixXd H;  // hess log p, symmetric
};

/// Gaussian kernel density estimate with closed-form derivatives.
///
/// p(x) = (1/n) sum_i h^{-D} K(||x - X_i|| / h),  K(u) = (2*pi)^{-D/2} exp(-u^2/2).
///
/// Immutable after construction; every evaluation is a pure function, so a
/// single model can be shared across threads.
class DensityModel {
 public:
  DensityModel(PointCloud data, double bandwidth);

  const PointCloud& data() const { return data_; }
  double bandwidth() const { return h_; }
  int dim() const { return static_cast<int>(cols_.rows()); }
  Eigen::Index size() const { return cols_.cols(); }
  const Eigen::MatrixXd& data_cols() const { return cols_; }  // D x n layout
  double log_normalizer() const { return log_norm_; }

  double density(const Eigen::VectorXd& x) const;
  Eigen::VectorXd log_gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd log_hessian(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd raw_hessian(const Eigen::VectorXd& x) const;  // hessian of p itself
  LocalDensity local(const Eigen::VectorXd& x) const;

  /// One mean-shift update: the kernel-weighted mean of the data at x.
  Eigen::VectorXd mean_shift_target(const Eigen::VectorXd& x) const;

 private:
  PointCloud data_;
  Eigen::MatrixXd cols_;  // transposed copy for evaluation
  double h_ = 0.0;
  double log_norm_ = 0.0;  // log[(2*pi)^{-D/2} h^{-D} / n]
};

/// Scalar normal-reference bandwidth
/// h = (4 / (n (D+2)))^{1/(D+4)} * s with s^2 the mean per-coordinate variance.
double silverman_bandwidth(const PointCloud& cloud);

/// Reusable evaluation workspace. Kernel weights are computed with a
/// max-log shift, so gradients and Hessians of log p stay valid far past the
/// point where p itself underflows to zero; update() only fails (returns
/// false) once every squared distance overflows.
class DensityEvaluator {
 public:
  explicit DensityEvaluator(const DensityModel& model);

  bool update(const Eigen::VectorXd& x, bool need_second_moment);

  bool ok() const { return ok_; }
  double density() const;
  const Eigen::VectorXd& mean_offset() const { return mean_off_; }  // mu(x) - x
  Eigen::VectorXd log_gradient() const;
  Eigen::MatrixXd log_hessian() const;
  Eigen::MatrixXd raw_hessian() const;

 private:
  const DensityModel* model_;
  Eigen::MatrixXd diffs_;
  Eigen::ArrayXd weights_;
  Eigen::VectorXd mean_off_;
  Eigen::MatrixXd second_moment_;  // sum w * dd^T / sum w
  double log_weight_sum_ = 0.0;
  bool ok_ = false;
  bool have_second_ = false;
};

}  // namespace ridgehunt
