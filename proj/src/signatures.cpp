#include "ridgehunt/signatures.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "ridgehunt/errors.hpp"

namespace ridgehunt {

namespace {

void check_descending(const Eigen::VectorXd& lam) {
  if (lam.size() < 1) throw config_error("signature: empty eigenvalue list");
  if (!lam.allFinite()) throw numeric_error("signature: non-finite eigenvalue");
  for (Eigen::Index k = 0; k + 1 < lam.size(); ++k) {
    if (lam[k] < lam[k + 1]) {
      throw config_error("signature: eigenvalues must be sorted descending");
    }
  }
}

// int t^k exp(-t^2) dt over the real line, by composite Simpson quadrature.
// The integrand is dead beyond |t| ~ 9; [0, 12] doubled covers even k.
double gauss_moment(int k) {
  if (k % 2 == 1) return 0.0;
  const int steps = 4800;
  const double a = 0.0, b = 12.0;
  const double dt = (b - a) / steps;
  auto f = [&](double t) { return std::pow(t, k) * std::exp(-t * t); };
  double acc = f(a) + f(b);
  for (int i = 1; i < steps; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * dt);
  return 2.0 * acc * dt / 3.0;
}

}  // namespace

Eigen::VectorXd signature_vector(const Eigen::VectorXd& lam) {
  check_descending(lam);
  const int D = static_cast<int>(lam.size());
  Eigen::VectorXd S = Eigen::VectorXd::Zero(D);
  const double denom = std::abs(lam[D - 1]);
  for (int j = 0; j < D; ++j) {
    const double l_next = lam[j];  // lambda_{j+1}, 1-based
    if (!(l_next < 0.0)) continue;
    // l_next < 0 forces lam[D-1] <= l_next < 0, so denom > 0 here
    double prod = 1.0;
    for (int i = 1; i <= j; ++i) {
      prod *= 1.0 - std::abs(std::min(lam[i - 1], 0.0)) / denom;
    }
    S[j] = std::abs(l_next) * (std::abs(l_next) / denom) * prod;
  }
  return S;
}

double signature_at(const DensityModel& model, const Eigen::VectorXd& x, int d) {
  if (d < 0 || d >= model.dim()) throw config_error("signature_at: d out of range");
  const Spectrum s = spectrum(model.log_hessian(x));
  return signature_vector(s.values)[d];
}

Eigen::MatrixXd signature_jacobian(const Eigen::VectorXd& lam) {
  check_descending(lam);
  const int D = static_cast<int>(lam.size());
  const double lam_min = lam[D - 1];
  if (!(lam_min < 0.0)) {
    throw numeric_error("signature jacobian: requires lambda_D < 0");
  }
  for (int k = 0; k < D; ++k) {
    if (lam[k] == 0.0 || (k + 1 < D && lam[k] == lam[k + 1])) {
      throw numeric_error("signature jacobian: Jacobian undefined at non-smooth point");
    }
  }
  const Eigen::VectorXd S = signature_vector(lam);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(D, D);
  for (int j = 0; j < D; ++j) {
    if (!(lam[j] < 0.0)) continue;  // S_j vanishes on a neighborhood
    for (int c = 0; c < j; ++c) {
      if (lam[c] < 0.0) J(j, c) = S[j] / (lam[c] - lam_min);
    }
    if (j < D - 1) J(j, j) = S[j] * 2.0 / lam[j];
    double acc = 0.0;
    for (int i = 1; i <= (j < D - 1 ? j : D - 1); ++i) {
      const double li = lam[i - 1];
      if (li < 0.0) acc += li / (lam_min - li);
    }
    const double lead = j < D - 1 ? -1.0 : 1.0;
    J(j, D - 1) = S[j] * (lead + acc) / lam_min;
  }
  return J;
}

Eigen::MatrixXd eigenvalue_jacobian(const Spectrum& s, double gap_tol) {
  const int D = s.dim();
  for (int j = 0; j + 1 < D; ++j) {
    if (s.values[j] - s.values[j + 1] <= gap_tol) {
      throw numeric_error("eigenvalue jacobian: degenerate spectrum");
    }
  }
  Eigen::MatrixXd J(D, D * D);
  for (int j = 0; j < D; ++j) {
    const Eigen::MatrixXd outer = s.vectors.col(j) * s.vectors.col(j).transpose();
    J.row(j) = Eigen::Map<const Eigen::RowVectorXd>(outer.data(), D * D);
  }
  return J;
}

Eigen::MatrixXd kernel_hessian_covariance(int dim, double density_at_x) {
  if (dim < 1) throw config_error("kernel hessian covariance: dim must be >= 1");
  if (density_at_x < 0.0) {
    throw config_error("kernel hessian covariance: density must be >= 0");
  }
  const int D = dim;
  const int m = D * (D + 1) / 2;
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(m);
  for (int i = 0; i < D; ++i) {
    for (int j = i; j < D; ++j) pairs.emplace_back(i, j);
  }
  // R entry = (2*pi)^{-D} int (x_i x_j - d_ij)(x_k x_l - d_kl) e^{-||x||^2} dx.
  // Each term factorizes over coordinates into 1-d moments int t^a e^{-t^2} dt.
  const double moment0 = gauss_moment(0);
  auto monomial_integral = [&](const std::vector<int>& expo) {
    double prod = 1.0;
    for (int a : expo) prod *= a == 0 ? moment0 : gauss_moment(a);
    return prod;
  };
  Eigen::MatrixXd R(m, m);
  const double norm = std::pow(2.0 * std::numbers::pi, -double(D));
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      const auto [i, j] = pairs[a];
      const auto [k, l] = pairs[b];
      const double dij = i == j ? 1.0 : 0.0;
      const double dkl = k == l ? 1.0 : 0.0;
      double entry = 0.0;
      std::vector<int> expo(D, 0);
      // x_i x_j x_k x_l
      expo[i]++; expo[j]++; expo[k]++; expo[l]++;
      entry += monomial_integral(expo);
      // - d_kl x_i x_j
      if (dkl != 0.0) {
        std::fill(expo.begin(), expo.end(), 0);
        expo[i]++; expo[j]++;
        entry -= monomial_integral(expo);
      }
      // - d_ij x_k x_l
      if (dij != 0.0) {
        std::fill(expo.begin(), expo.end(), 0);
        expo[k]++; expo[l]++;
        entry -= monomial_integral(expo);
      }
      // + d_ij d_kl
      if (dij != 0.0 && dkl != 0.0) {
        std::fill(expo.begin(), expo.end(), 0);
        entry += monomial_integral(expo);
      }
      R(a, b) = norm * entry;
      R(b, a) = R(a, b);
    }
  }
  return density_at_x * R;
}

SignatureUncertainty signature_variance(const DensityModel& model, const Eigen::VectorXd& x,
                                        int d) {
  const int D = model.dim();
  if (d < 0 || d >= D) throw config_error("signature variance: d out of range");
  const double p = model.density(x);
  if (!(p > 0.0)) {
    throw numeric_error("signature variance: zero density at evaluation point");
  }
  const Spectrum s = spectrum(model.log_hessian(x));
  if (s.values.cwiseAbs().minCoeff() <= 0.0) {
    throw numeric_error("signature variance: zero eigenvalue violates theorem hypotheses");
  }
  const Eigen::MatrixXd J_lambda = eigenvalue_jacobian(s);  // throws on ties
  const Eigen::MatrixXd J_s = signature_jacobian(s.values);

  // Sigma is stated for the raw-density Hessian estimator; the signature is a
  // function of the log-density Hessian, whose leading-order fluctuation is
  // the raw one divided by p(x).
  const Eigen::MatrixXd sigma_vech = kernel_hessian_covariance(D, p) / (p * p);

  // vec = Dup * vech for symmetric matrices; off-diagonal entries are
  // perfectly correlated with their transposes.
  const int m = D * (D + 1) / 2;
  Eigen::MatrixXd dup = Eigen::MatrixXd::Zero(D * D, m);
  {
    int v = 0;
    for (int i = 0; i < D; ++i) {
      for (int j = i; j < D; ++j, ++v) {
        dup(j * D + i, v) = 1.0;
        dup(i * D + j, v) = 1.0;
      }
    }
  }
  const Eigen::MatrixXd sigma_vec = dup * sigma_vech * dup.transpose();

  SignatureUncertainty out;
  Eigen::MatrixXd gamma = J_s * J_lambda * sigma_vec * J_lambda.transpose() * J_s.transpose();
  out.gamma = 0.5 * (gamma + gamma.transpose());
  const double n = static_cast<double>(model.size());
  const double h = model.bandwidth();
  out.stderr_d = std::sqrt(std::max(0.0, out.gamma(d, d)) / (n * std::pow(h, D + 4)));
  return out;
}

}  // namespace ridgehunt
