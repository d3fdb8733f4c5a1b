#include "ridgehunt/density.hpp"

#include <cmath>
#include <numbers>

#include "ridgehunt/errors.hpp"

namespace ridgehunt {

DensityModel::DensityModel(PointCloud data, double bandwidth)
    : data_(std::move(data)), h_(bandwidth) {
  if (!(h_ > 0.0) || !std::isfinite(h_)) {
    throw config_error("density model: bandwidth must be positive and finite");
  }
  cols_ = data_.matrix().transpose();
  const double D = static_cast<double>(dim());
  log_norm_ = -0.5 * D * std::log(2.0 * std::numbers::pi) - D * std::log(h_) -
              std::log(static_cast<double>(size()));
}

double silverman_bandwidth(const PointCloud& cloud) {
  const Eigen::Index n = cloud.size();
  if (n < 2) throw config_error("silverman bandwidth: need at least 2 points");
  const double D = static_cast<double>(cloud.dim());
  const double s2 = cloud.column_std().array().square().mean();
  if (!(s2 > 0.0)) throw numeric_error("silverman bandwidth: zero scale");
  return std::pow(4.0 / (double(n) * (D + 2.0)), 1.0 / (D + 4.0)) * std::sqrt(s2);
}

DensityEvaluator::DensityEvaluator(const DensityModel& model) : model_(&model) {
  const int D = model.dim();
  const Eigen::Index n = model.size();
  diffs_.resize(D, n);
  weights_.resize(n);
  mean_off_.resize(D);
  second_moment_.resize(D, D);
}

bool DensityEvaluator::update(const Eigen::VectorXd& x, bool need_second_moment) {
  const DensityModel& m = *model_;
  if (x.size() != m.dim() || !x.allFinite()) {
    throw config_error("density evaluation: point has wrong dimension or non-finite entries");
  }
  const double inv2h2 = 0.5 / (m.bandwidth() * m.bandwidth());
  diffs_ = m.data_cols().colwise() - x;
  Eigen::ArrayXd q = -inv2h2 * diffs_.colwise().squaredNorm().transpose().array();
  const double qmax = q.maxCoeff();
  if (!std::isfinite(qmax)) {
    ok_ = false;
    have_second_ = false;
    return false;
  }
  weights_ = (q - qmax).exp();
  const double wsum = weights_.sum();
  log_weight_sum_ = qmax + std::log(wsum);
  mean_off_ = (diffs_ * weights_.matrix()) / wsum;
  if (need_second_moment) {
    second_moment_.noalias() =
        (diffs_.array().rowwise() * weights_.transpose()).matrix() * diffs_.transpose() / wsum;
    second_moment_ = 0.5 * (second_moment_ + second_moment_.transpose()).eval();
    have_second_ = true;
  } else {
    have_second_ = false;
  }
  ok_ = true;
  return true;
}

double DensityEvaluator::density() const {
  if (!ok_) return 0.0;
  return std::exp(model_->log_normalizer() + log_weight_sum_);
}

Eigen::VectorXd DensityEvaluator::log_gradient() const {
  if (!ok_) throw numeric_error("log gradient: evaluation point outside effective support");
  const double h2 = model_->bandwidth() * model_->bandwidth();
  return mean_off_ / h2;
}

Eigen::MatrixXd DensityEvaluator::log_hessian() const {
  if (!ok_ || !have_second_) {
    throw numeric_error("log hessian: evaluation point outside effective support");
  }
  const int D = model_->dim();
  const double h2 = model_->bandwidth() * model_->bandwidth();
  const Eigen::VectorXd g = mean_off_ / h2;
  Eigen::MatrixXd H = second_moment_ / (h2 * h2);
  H -= Eigen::MatrixXd::Identity(D, D) / h2;
  H -= g * g.transpose();
  return 0.5 * (H + H.transpose()).eval();
}

Eigen::MatrixXd DensityEvaluator::raw_hessian() const {
  if (!ok_ || !have_second_) {
    throw numeric_error("density hessian: evaluation point outside effective support");
  }
  const int D = model_->dim();
  const double h2 = model_->bandwidth() * model_->bandwidth();
  Eigen::MatrixXd H = second_moment_ / (h2 * h2);
  H -= Eigen::MatrixXd::Identity(D, D) / h2;
  return density() * 0.5 * (H + H.transpose()).eval();
}

double DensityModel::density(const Eigen::VectorXd& x) const {
  DensityEvaluator ev(*this);
  ev.update(x, false);
  return ev.density();
}

Eigen::VectorXd DensityModel::log_gradient(const Eigen::VectorXd& x) const {
  DensityEvaluator ev(*this);
  ev.update(x, false);
  return ev.log_gradient();
}

Eigen::MatrixXd DensityModel::log_hessian(const Eigen::VectorXd& x) const {
  DensityEvaluator ev(*this);
  ev.update(x, true);
  return ev.log_hessian();
}

Eigen::MatrixXd DensityModel::raw_hessian(const Eigen::VectorXd& x) const {
  DensityEvaluator ev(*this);
  ev.update(x, true);
  return ev.raw_hessian();
}

LocalDensity DensityModel::local(const Eigen::VectorXd& x) const {
  DensityEvaluator ev(*this);
  ev.update(x, true);
  LocalDensity out;
  out.x = x;
  out.p = ev.density();
  out.g = ev.log_gradient();
  out.H = ev.log_hessian();
  return out;
}

Eigen::VectorXd DensityModel::mean_shift_target(const Eigen::VectorXd& x) const {
  DensityEvaluator ev(*this);
  if (!ev.update(x, false)) {
    throw numeric_error("mean shift target: evaluation point outside effective support");
  }
  return x + ev.mean_offset();
}

}  // namespace ridgehunt
