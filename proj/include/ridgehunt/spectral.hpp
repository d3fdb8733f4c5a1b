#pragma once

#include <Eigen/Dense>

#include "ridgehunt/density.hpp"

namespace ridgehunt {

/// Eigendecomposition of a symmetric matrix, eigenvalues sorted descending,
/// eigenvector columns paired with the values. Index 0 of value_or_zero is
/// the conventional lambda_0 == 0 slot used by the signature formulas.
struct Spectrum {
  Eigen::VectorXd values;   // lambda_1 >= ... >= lambda_D
  Eigen::MatrixXd vectors;  // orthonormal, column j pairs with values[j]

  int dim() const { return static_cast<int>(values.size()); }
  double value_or_zero(int j) const { return j == 0 ? 0.0 : values[j - 1]; }

  /// Gap between the d-th and (d+1)-th eigenvalue (1-based); the boundary the
  /// normal-space projector cuts at. Only meaningful for 1 <= d < D.
  double gap(int d) const { return values[d - 1] - values[d]; }
};

/// Decompose a symmetric matrix. The sign of each eigenvector is fixed so
/// its largest-magnitude entry is positive; exactly tied eigenvalues are
/// ordered by lexicographic comparison of the sign-fixed eigenvectors.
Spectrum spectrum(const Eigen::MatrixXd& H);

/// Projector onto the normal space: the span of the D-d smallest-eigenvalue
/// eigenvectors.
struct Projector {
  Eigen::MatrixXd L;  // V * V^T, symmetric idempotent, rank D-d
  Eigen::MatrixXd V;  // D x (D-d) retained eigenvectors
  int d = 0;
  bool degenerate_gap = false;  // eigengap at the cut below tolerance
};

Projector normal_projector(const Spectrum& s, int d, double gap_tol = 1e-10);

Eigen::VectorXd projected_gradient(const Eigen::VectorXd& g, const Projector& proj);

/// Ridge-membership diagnostics at x: ||L g|| and lambda_{D-d} of the
/// log-density Hessian (descending 1-based indexing).
struct RidgeResidual {
  double projected_grad_norm = 0.0;
  double lambda_normal = 0.0;
};

RidgeResidual ridge_residual(const DensityModel& model, const Eigen::VectorXd& x, int d);

}  // namespace ridgehunt
