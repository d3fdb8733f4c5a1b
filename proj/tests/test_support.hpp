#pragma once

// Shared oracles for the test suites. Everything here recomputes expected
// values by an independent route (finite differences, direct quadrature,
// exhaustive search) and must not call into the code paths it checks.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

inline double rel_error(double got, double want) {
  const double scale = std::max(1e-12, std::abs(want));
  return std::abs(got - want) / scale;
}

inline double rel_error(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  const double scale = std::max(1e-12, want.norm());
  return (got - want).norm() / scale;
}

// Central-difference gradient of a scalar field.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Eigen::VectorXd hi = x, lo = x;
    hi[j] += step;
    lo[j] -= step;
    g[j] = (f(hi) - f(lo)) / (2.0 * step);
  }
  return g;
}

// Central-difference Hessian of a scalar field.
inline Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                  const Eigen::VectorXd& x, double step) {
  const Eigen::Index D = x.size();
  Eigen::MatrixXd H(D, D);
  const double f0 = f(x);
  for (Eigen::Index i = 0; i < D; ++i) {
    Eigen::VectorXd hi = x, lo = x;
    hi[i] += step;
    lo[i] -= step;
    H(i, i) = (f(hi) - 2.0 * f0 + f(lo)) / (step * step);
    for (Eigen::Index j = i + 1; j < D; ++j) {
      Eigen::VectorXd pp = x, pm = x, mp = x, mm = x;
      pp[i] += step; pp[j] += step;
      pm[i] += step; pm[j] -= step;
      mp[i] -= step; mp[j] += step;
      mm[i] -= step; mm[j] -= step;
      H(i, j) = H(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * step * step);
    }
  }
  return H;
}

// Jacobian of a vector field by central differences.
inline Eigen::MatrixXd fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    double step) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd J(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Eigen::VectorXd hi = x, lo = x;
    hi[j] += step;
    lo[j] -= step;
    J.col(j) = (f(hi) - f(lo)) / (2.0 * step);
  }
  return J;
}

inline Eigen::MatrixXd random_cloud(int n, int dim, std::mt19937_64& rng, double spread = 1.0) {
  std::normal_distribution<double> gauss(0.0, spread);
  Eigen::MatrixXd m(n, dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = gauss(rng);
  }
  return m;
}

inline Eigen::MatrixXd random_symmetric(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = gauss(rng);
  }
  return 0.5 * (a + a.transpose());
}

// Naive agglomerative single linkage: merge the closest pair of clusters
// while the single-link distance is <= eps. Returns the partition as sorted
// groups of sorted indices.
inline std::vector<std::vector<int>> single_linkage_cut(const Eigen::MatrixXd& pts, double eps) {
  const int n = static_cast<int>(pts.rows());
  std::vector<std::vector<int>> clusters;
  clusters.reserve(n);
  for (int i = 0; i < n; ++i) clusters.push_back({i});
  auto link = [&](const std::vector<int>& a, const std::vector<int>& b) {
    double best = std::numeric_limits<double>::infinity();
    for (int i : a) {
      for (int j : b) best = std::min(best, (pts.row(i) - pts.row(j)).norm());
    }
    return best;
  };
  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double d = link(clusters[i], clusters[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (best > eps) break;
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    clusters.erase(clusters.begin() + bj);
  }
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  std::sort(clusters.begin(), clusters.end());
  return clusters;
}

// Brute-force Hausdorff distance.
inline double hausdorff_brute(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  auto one_way = [](const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < q.rows(); ++j) {
        best = std::min(best, (p.row(i) - q.row(j)).norm());
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

// Direct grid quadrature of R(vech hess K)_ab = int (d2K)_a (d2K)_b dx for the
// standard Gaussian kernel, 1D or 2D only; independent of the implementation's
// monomial factorization.
inline double kernel_hessian_product_quadrature_1d(double half_range = 10.0, int steps = 4000) {
  const double dx = 2.0 * half_range / steps;
  double acc = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double x = -half_range + i * dx;
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    const double d2 = (x * x - 1.0) * phi;
    const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    acc += w * d2 * d2;
  }
  return acc * dx;
}

inline Eigen::MatrixXd kernel_hessian_product_quadrature_2d(double half_range = 8.0,
                                                            int steps = 400) {
  // vech order (0,0), (0,1), (1,1)
  const double dx = 2.0 * half_range / steps;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(3, 3);
  for (int i = 0; i <= steps; ++i) {
    const double x = -half_range + i * dx;
    const double wi = (i == 0 || i == steps) ? 0.5 : 1.0;
    for (int j = 0; j <= steps; ++j) {
      const double y = -half_range + j * dx;
      const double wj = (j == 0 || j == steps) ? 0.5 : 1.0;
      const double k = std::exp(-0.5 * (x * x + y * y)) / (2.0 * M_PI);
      Eigen::Vector3d d2;
      d2 << (x * x - 1.0) * k, x * y * k, (y * y - 1.0) * k;
      acc += wi * wj * d2 * d2.transpose();
    }
  }
  return acc * dx * dx;
}

}  // namespace oracle
