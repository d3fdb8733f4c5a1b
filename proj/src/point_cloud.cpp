#include "ridgehunt/point_cloud.hpp"

#include <random>
#include <string>

#include "ridgehunt/errors.hpp"
#include "ridgehunt/rng.hpp"

namespace ridgehunt {

PointCloud::PointCloud(Eigen::MatrixXd points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw config_error("point cloud: need at least one point and one dimension");
  }
  if (!points_.allFinite()) {
    throw numeric_error("point cloud: non-finite coordinate");
  }
}

Eigen::VectorXd PointCloud::column_std() const {
  const Eigen::Index n = points_.rows();
  if (n < 2) return Eigen::VectorXd::Zero(points_.cols());
  const Eigen::RowVectorXd mean = points_.colwise().mean();
  const Eigen::RowVectorXd var =
      (points_.rowwise() - mean).array().square().colwise().sum() / double(n - 1);
  return var.array().sqrt().transpose();
}

bool Box::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lo.size()) return false;
  return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

void Box::validate() const {
  if (lo.size() == 0 || lo.size() != hi.size()) {
    throw config_error("box: lo/hi dimension mismatch");
  }
  if (!lo.allFinite() || !hi.allFinite() || (hi.array() < lo.array()).any()) {
    throw config_error("box: requires finite bounds with hi >= lo");
  }
}

Box Box::of(std::initializer_list<double> lo_list, std::initializer_list<double> hi_list) {
  Box b;
  b.lo = Eigen::Map<const Eigen::VectorXd>(lo_list.begin(), lo_list.size());
  b.hi = Eigen::Map<const Eigen::VectorXd>(hi_list.begin(), hi_list.size());
  b.validate();
  return b;
}

Box Box::bounding(const PointCloud& cloud) {
  Box b;
  b.lo = cloud.matrix().colwise().minCoeff().transpose();
  b.hi = cloud.matrix().colwise().maxCoeff().transpose();
  return b;
}

PointCloud sample_uniform_box(const Box& box, Eigen::Index n, std::uint64_t seed) {
  box.validate();
  if (n < 1) throw config_error("uniform sample: n must be >= 1");
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd pts(n, box.dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < box.dim(); ++j) {
      pts(i, j) = box.lo[j] + (box.hi[j] - box.lo[j]) * unit(rng);
    }
  }
  return PointCloud(std::move(pts));
}

}  // namespace ridgehunt
