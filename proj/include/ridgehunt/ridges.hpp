#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ridgehunt/density.hpp"
#include "ridgehunt/point_cloud.hpp"

namespace ridgehunt {

/// Destination of one mean-shift / SCMS trajectory.
struct RidgePoint {
  Eigen::VectorXd destination;
  int origin_index = -1;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;                 // final step length
  double projected_grad_norm = 0.0;      // ||L g|| at the destination
  Eigen::VectorXd signature;             // S_0..S_{D-1} at the destination
  bool degenerate_gap = false;           // eigengap at the cut fell below tolerance
};

/// All destinations produced for one (model, d, tolerance) run.
struct RidgeSet {
  int d = 0;
  double bandwidth = 0.0;
  Eigen::Index sample_size = 0;
  double tolerance = 0.0;
  int max_iterations = 0;
  std::vector<RidgePoint> points;
};

/// Default stopping tolerance: 1e-7 times the data bounding-box diameter.
double default_tolerance(const DensityModel& model);

/// Gradient-ascent mode seeking: iterate the kernel-weighted mean until the
/// step length drops below tol. A start whose kernel weights all underflow
/// is returned non-converged rather than throwing.
RidgePoint mean_shift(const DensityModel& model, const Eigen::VectorXd& start, double tol,
                      int max_iter = 500);

/// Subspace-constrained mean shift on log p: the mean-shift step is projected
/// through V V^T, V spanning the D-d smallest-eigenvalue eigenvectors of the
/// log-density Hessian at the current point. d = 0 is exactly mean shift.
RidgePoint scms(const DensityModel& model, int d, const Eigen::VectorXd& start, double tol,
                int max_iter = 500);

/// Run SCMS from every mesh row; results ordered by origin index regardless
/// of execution order. Trajectories are independent, so mesh points run
/// concurrently against the shared immutable model.
RidgeSet estimate_ridge(const DensityModel& model, int d, const Eigen::MatrixXd& mesh,
                        double tol, int max_iter = 500, bool parallel = true);

/// Regular grid mesh over a box, for dense ridge tracing.
Eigen::MatrixXd grid_mesh(const Box& box, int points_per_axis);

}  // namespace ridgehunt
