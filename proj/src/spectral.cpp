#include "ridgehunt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ridgehunt/errors.hpp"

namespace ridgehunt {

namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  double best_abs = std::abs(v[0]);
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (v[best] < 0.0) v = -v;
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace

Spectrum spectrum(const Eigen::MatrixXd& H) {
  if (H.rows() != H.cols() || H.rows() < 1) {
    throw config_error("spectrum: matrix must be square");
  }
  if (!H.allFinite()) throw numeric_error("spectrum: non-finite entries");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw config_error("spectrum: matrix is not symmetric within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (H + H.transpose()));
  if (solver.info() != Eigen::Success) {
    throw numeric_error("spectrum: eigendecomposition failed");
  }
  const int D = static_cast<int>(H.rows());
  Eigen::MatrixXd vecs = solver.eigenvectors();
  for (int j = 0; j < D; ++j) fix_sign(vecs.col(j));

  std::vector<int> order(D);
  std::iota(order.begin(), order.end(), 0);
  const Eigen::VectorXd& vals = solver.eigenvalues();  // ascending
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (vals[a] != vals[b]) return vals[a] > vals[b];
    return lex_less(vecs.col(a), vecs.col(b));
  });

  Spectrum s;
  s.values.resize(D);
  s.vectors.resize(D, D);
  for (int j = 0; j < D; ++j) {
    s.values[j] = vals[order[j]];
    s.vectors.col(j) = vecs.col(order[j]);
  }
  return s;
}

Projector normal_projector(const Spectrum& s, int d, double gap_tol) {
  const int D = s.dim();
  if (d < 0 || d >= D) throw config_error("normal projector: requires 0 <= d < D");
  Projector p;
  p.d = d;
  p.V = s.vectors.rightCols(D - d);
  p.L = p.V * p.V.transpose();
  p.L = 0.5 * (p.L + p.L.transpose()).eval();
  p.degenerate_gap = d >= 1 && s.gap(d) <= gap_tol;
  return p;
}

Eigen::VectorXd projected_gradient(const Eigen::VectorXd& g, const Projector& proj) {
  if (g.size() != proj.L.rows()) {
    throw config_error("projected gradient: dimension mismatch");
  }
  return proj.L * g;
}

RidgeResidual ridge_residual(const DensityModel& model, const Eigen::VectorXd& x, int d) {
  const LocalDensity loc = model.local(x);
  const Spectrum s = spectrum(loc.H);
  const Projector proj = normal_projector(s, d);
  RidgeResidual r;
  r.projected_grad_norm = projected_gradient(loc.g, proj).norm();
  r.lambda_normal = s.values[model.dim() - d - 1];  // lambda_{D-d}, 1-based
  return r;
}

}  // namespace ridgehunt
