#pragma once

#include <Eigen/Dense>

#include "ridgehunt/density.hpp"
#include "ridgehunt/spectral.hpp"

namespace ridgehunt {

/// Eigensignatures S_0..S_{D-1} of a descending eigenvalue list.
///
/// S_j = I(l_{j+1} < 0) * |l_{j+1}| * (|l_{j+1}| / |l_D|)
///       * prod_{i=0}^{j} (1 - |min(l_i, 0)| / |l_D|)
///
/// with the convention l_0 == 0. S_j is large exactly when the local
/// curvature pattern matches a j-dimensional structure: the j largest
/// eigenvalues are near zero and the remaining D-j are strongly negative.
Eigen::VectorXd signature_vector(const Eigen::VectorXd& eigenvalues_desc);

/// Plug-in signature at x: component d of the signature of the log-density
/// Hessian spectrum.
double signature_at(const DensityModel& model, const Eigen::VectorXd& x, int d);

/// D x D Jacobian of the signature map S = s(lambda). Undefined (throws) at
/// non-smooth points: tied eigenvalues, a zero eigenvalue, or l_D >= 0.
Eigen::MatrixXd signature_jacobian(const Eigen::VectorXd& eigenvalues_desc);

/// D x D^2 Jacobian of the eigenvalue map lambda = l(vec H): row j is
/// vec(u_j u_j^T)^T. Requires a simple spectrum (eigengaps above gap_tol).
Eigen::MatrixXd eigenvalue_jacobian(const Spectrum& s, double gap_tol = 1e-10);

/// Asymptotic covariance of the half-vectorized kernel Hessian estimator:
/// Sigma(x) = R(vech hess K) * p(x), entries computed by numerical
/// quadrature of products of Gaussian-kernel second derivatives.
/// vech enumerates (i,j), i <= j, row-major.
Eigen::MatrixXd kernel_hessian_covariance(int dim, double density_at_x);

struct SignatureUncertainty {
  Eigen::MatrixXd gamma;  // asymptotic covariance of the signature vector
  double stderr_d = 0.0;  // sqrt(gamma_dd / (n h^{D+4}))
};

/// Delta-method variance of the plug-in signature at x.
SignatureUncertainty signature_variance(const DensityModel& model, const Eigen::VectorXd& x,
                                        int d);

}  // namespace ridgehunt
