#include "ridgehunt/ridges.hpp"

#include <cmath>

#include "ridgehunt/errors.hpp"
#include "ridgehunt/parallel.hpp"
#include "ridgehunt/signatures.hpp"
#include "ridgehunt/spectral.hpp"

namespace ridgehunt {

namespace {

RidgePoint run_trajectory(const DensityModel& model, DensityEvaluator& ev, int d,
                          const Eigen::VectorXd& start, double tol, int max_iter) {
  const int D = model.dim();
  RidgePoint out;
  out.destination = start;
  out.signature = Eigen::VectorXd::Zero(D);
  out.residual = std::numeric_limits<double>::infinity();
  out.projected_grad_norm = std::numeric_limits<double>::infinity();

  Eigen::VectorXd m = start;
  Eigen::VectorXd step(D);
  bool weights_ok = true;
  for (int it = 1; it <= max_iter; ++it) {
    if (!ev.update(m, d > 0)) {
      weights_ok = false;
      break;
    }
    if (d == 0) {
      step = ev.mean_offset();
    } else {
      const Spectrum s = spectrum(ev.log_hessian());
      const Projector proj = normal_projector(s, d);
      out.degenerate_gap = out.degenerate_gap || proj.degenerate_gap;
      step.noalias() = proj.L * ev.mean_offset();
    }
    m += step;
    out.iterations = it;
    out.residual = step.norm();
    if (out.residual <= tol) {
      out.converged = true;
      break;
    }
  }
  out.destination = m;

  // Diagnostics at the destination, not the origin.
  if (weights_ok && ev.update(m, true)) {
    const Spectrum s = spectrum(ev.log_hessian());
    out.signature = signature_vector(s.values);
    const Projector proj = normal_projector(s, d);
    out.degenerate_gap = out.degenerate_gap || proj.degenerate_gap;
    out.projected_grad_norm = projected_gradient(ev.log_gradient(), proj).norm();
  } else {
    out.converged = false;
  }
  return out;
}

}  // namespace

double default_tolerance(const DensityModel& model) {
  const double diam = Box::bounding(model.data()).diameter();
  return 1e-7 * (diam > 0.0 ? diam : 1.0);
}

RidgePoint mean_shift(const DensityModel& model, const Eigen::VectorXd& start, double tol,
                      int max_iter) {
  return scms(model, 0, start, tol, max_iter);
}

RidgePoint scms(const DensityModel& model, int d, const Eigen::VectorXd& start, double tol,
                int max_iter) {
  if (d < 0 || d >= model.dim()) throw config_error("scms: requires 0 <= d < D");
  if (!(tol > 0.0)) throw config_error("scms: tolerance must be positive");
  if (max_iter < 1) throw config_error("scms: max_iter must be >= 1");
  DensityEvaluator ev(model);
  return run_trajectory(model, ev, d, start, tol, max_iter);
}

RidgeSet estimate_ridge(const DensityModel& model, int d, const Eigen::MatrixXd& mesh,
                        double tol, int max_iter, bool parallel) {
  if (d < 0 || d >= model.dim()) throw config_error("estimate ridge: requires 0 <= d < D");
  if (mesh.rows() == 0) throw config_error("estimate ridge: empty mesh");
  if (mesh.cols() != model.dim()) throw config_error("estimate ridge: mesh dimension mismatch");
  if (!(tol > 0.0)) throw config_error("estimate ridge: tolerance must be positive");

  RidgeSet out;
  out.d = d;
  out.bandwidth = model.bandwidth();
  out.sample_size = model.size();
  out.tolerance = tol;
  out.max_iterations = max_iter;
  out.points.resize(mesh.rows());

  run_parallel(static_cast<std::size_t>(mesh.rows()), parallel, [&](IndexPool& pool) {
    DensityEvaluator ev(model);
    std::size_t b, e;
    while (pool.next(b, e)) {
      for (std::size_t i = b; i < e; ++i) {
        RidgePoint rp =
            run_trajectory(model, ev, d, mesh.row(Eigen::Index(i)).transpose(), tol, max_iter);
        rp.origin_index = static_cast<int>(i);
        out.points[i] = std::move(rp);
      }
    }
  });
  return out;
}

Eigen::MatrixXd grid_mesh(const Box& box, int points_per_axis) {
  box.validate();
  if (points_per_axis < 2) throw config_error("grid mesh: need >= 2 points per axis");
  const int D = box.dim();
  Eigen::Index total = 1;
  for (int j = 0; j < D; ++j) total *= points_per_axis;
  Eigen::MatrixXd mesh(total, D);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rem = idx;
    for (int j = 0; j < D; ++j) {
      const Eigen::Index k = rem % points_per_axis;
      rem /= points_per_axis;
      mesh(idx, j) = box.lo[j] + (box.hi[j] - box.lo[j]) * double(k) / double(points_per_axis - 1);
    }
  }
  return mesh;
}

}  // namespace ridgehunt
