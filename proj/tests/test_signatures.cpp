#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ridgehunt/errors.hpp"
#include "ridgehunt/signatures.hpp"
#include "test_support.hpp"

using namespace ridgehunt;

namespace {

Eigen::VectorXd lam3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

// strictly descending all-negative spectrum
Eigen::VectorXd random_negative_spectrum(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  Eigen::VectorXd v(dim);
  double acc = -unit(rng);
  for (int j = 0; j < dim; ++j) {
    v[j] = acc;
    acc -= unit(rng);
  }
  return v;
}

}  // namespace

TEST_CASE("idealized signature table is reproduced exactly") {
  for (double C : {0.5, 1.0, 2.0, 10.0}) {
    const Eigen::VectorXd mode = signature_vector(lam3(-C, -C, -C));
    CHECK(mode[0] == C);
    CHECK(mode[1] == 0.0);
    CHECK(mode[2] == 0.0);
    const Eigen::VectorXd filament = signature_vector(lam3(0, -C, -C));
    CHECK(filament[0] == 0.0);
    CHECK(filament[1] == C);
    CHECK(filament[2] == 0.0);
    const Eigen::VectorXd wall = signature_vector(lam3(0, 0, -C));
    CHECK(wall[0] == 0.0);
    CHECK(wall[1] == 0.0);
    CHECK(wall[2] == C);
  }
}

TEST_CASE("signature of a general spectrum") {
  const Eigen::VectorXd S = signature_vector(lam3(-1, -2, -4));
  CHECK(S[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(S[1] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(S[2] == doctest::Approx(1.5).epsilon(1e-14));

  const Eigen::VectorXd none = signature_vector(lam3(1.0, 0.5, 0.1));
  CHECK(none.norm() == 0.0);

  CHECK_THROWS_AS(signature_vector(lam3(-4, -2, -1)), config_error);  // not descending
}

TEST_CASE("signatures scale linearly and the argmax is scale free") {
  std::mt19937_64 rng(404);
  for (int t = 0; t < 25; ++t) {
    const Eigen::VectorXd lam = random_negative_spectrum(3 + t % 2, rng);
    const Eigen::VectorXd S = signature_vector(lam);
    for (double c : {0.5, 2.0, 10.0}) {
      const Eigen::VectorXd Sc = signature_vector(c * lam);
      CHECK((Sc - c * S).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, c * S.maxCoeff()));
    }
  }
}

TEST_CASE("mode-to-filament transition is monotone") {
  double prev_s0 = std::numeric_limits<double>::infinity();
  double prev_s1 = -1.0;
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const Eigen::VectorXd S = signature_vector(lam3(-1.0 + t, -1.0, -1.0));
    CHECK(S[0] <= prev_s0 + 1e-15);
    CHECK(S[1] >= prev_s1 - 1e-15);
    prev_s0 = S[0];
    prev_s1 = S[1];
  }
}

TEST_CASE("plug-in signature on analytic models") {
  const DensityModel one(PointCloud(Eigen::MatrixXd::Zero(1, 2)), 1.0);
  CHECK(signature_at(one, Eigen::Vector2d(0, 0), 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(signature_at(one, Eigen::Vector2d(0, 0), 1) == doctest::Approx(0.0));

  Eigen::MatrixXd two(2, 2);
  two << -1, 0, 1, 0;
  const DensityModel pair(PointCloud(two), 1.0);
  const double s1 = signature_at(pair, Eigen::Vector2d(0.3, 0.0), 1);
  const double s0 = signature_at(pair, Eigen::Vector2d(0.3, 0.0), 0);
  CHECK(s1 > 0.5);
  CHECK(s0 < 0.1 * s1);
}

TEST_CASE("signature jacobian matches finite differences") {
  auto sig = [](const Eigen::VectorXd& lam) { return signature_vector(lam); };
  const Eigen::VectorXd lam = lam3(-1, -2, -4);
  CHECK(oracle::rel_error(signature_jacobian(lam), oracle::fd_jacobian(sig, lam, 1e-6)) < 1e-6);

  std::mt19937_64 rng(919);
  for (int t = 0; t < 30; ++t) {
    const Eigen::VectorXd l = random_negative_spectrum(2 + t % 3, rng);
    CHECK(oracle::rel_error(signature_jacobian(l), oracle::fd_jacobian(sig, l, 1e-6)) < 1e-5);
  }
}

TEST_CASE("signature jacobian edge behavior") {
  // positive leading eigenvalue: S_0 vanishes on a neighborhood, row 0 is zero
  const Eigen::MatrixXd J = signature_jacobian(lam3(0.5, -2, -4));
  CHECK(J.row(0).norm() == 0.0);
  auto sig = [](const Eigen::VectorXd& lam) { return signature_vector(lam); };
  CHECK(oracle::rel_error(J, oracle::fd_jacobian(sig, lam3(0.5, -2, -4), 1e-6)) < 1e-6);

  // degree-0 homogeneity of the derivative
  std::mt19937_64 rng(5);
  const Eigen::VectorXd lam = random_negative_spectrum(3, rng);
  const Eigen::MatrixXd J1 = signature_jacobian(lam);
  for (double c : {0.5, 2.0, 7.0}) {
    CHECK(oracle::rel_error(signature_jacobian(c * lam), J1) < 1e-12);
  }

  CHECK_THROWS_AS(signature_jacobian(lam3(-1, -2, -2)), numeric_error);  // tie
  CHECK_THROWS_AS(signature_jacobian(lam3(0, -2, -4)), numeric_error);   // zero eigenvalue
  CHECK_THROWS_AS(signature_jacobian(lam3(3, 2, 1)), numeric_error);     // lambda_D >= 0
}

TEST_CASE("eigenvalue jacobian") {
  Eigen::Matrix2d H;
  H << 3, 0, 0, 1;
  const Spectrum s = spectrum(H);
  const Eigen::MatrixXd J = eigenvalue_jacobian(s);
  Eigen::RowVector4d row0(1, 0, 0, 0), row1(0, 0, 0, 1);  // vec(e1 e1^T), vec(e2 e2^T)
  CHECK((J.row(0) - row0).norm() < 1e-12);
  CHECK((J.row(1) - row1).norm() < 1e-12);

  std::mt19937_64 rng(2222);
  for (int t = 0; t < 20; ++t) {
    const Eigen::MatrixXd A = oracle::random_symmetric(3, rng);
    Spectrum sa = spectrum(A);
    if (sa.gap(1) < 1e-3 || sa.gap(2) < 1e-3) continue;
    const Eigen::MatrixXd Ja = eigenvalue_jacobian(sa);
    for (Eigen::Index r = 0; r < 3; ++r) {
      CHECK(Ja.row(r).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    const Eigen::MatrixXd E = oracle::random_symmetric(3, rng);
    const double t_step = 1e-7;
    const Spectrum sb = spectrum(A + t_step * E);
    const Eigen::VectorXd want = (sb.values - sa.values) / t_step;
    const Eigen::VectorXd got =
        Ja * Eigen::Map<const Eigen::VectorXd>(E.data(), 9);
    CHECK((got - want).norm() < 1e-4 * std::max(1.0, want.norm()));
  }

  CHECK_THROWS_AS(eigenvalue_jacobian(spectrum(-Eigen::MatrixXd::Identity(2, 2))),
                  numeric_error);
}

TEST_CASE("kernel hessian covariance against direct quadrature") {
  const Eigen::MatrixXd sigma1 = kernel_hessian_covariance(1, 1.0);
  CHECK(sigma1.rows() == 1);
  CHECK(std::abs(sigma1(0, 0) - 0.2115710938304086) < 1e-10);
  CHECK(std::abs(sigma1(0, 0) - oracle::kernel_hessian_product_quadrature_1d()) < 1e-8);

  CHECK(kernel_hessian_covariance(2, 0.0).norm() == 0.0);

  const Eigen::MatrixXd sigma2 = kernel_hessian_covariance(2, 1.0);
  CHECK(sigma2.rows() == 3);
  CHECK((sigma2 - sigma2.transpose()).norm() < 1e-14);
  CHECK(sigma2(0, 0) > 0.0);
  CHECK(sigma2(1, 1) > 0.0);
  CHECK(sigma2(2, 2) > 0.0);
  const Eigen::MatrixXd want = oracle::kernel_hessian_product_quadrature_2d();
  CHECK(oracle::rel_error(sigma2, want) < 1e-6);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma2);
  CHECK(eig.eigenvalues().minCoeff() > -1e-12);

  // scaling by the density value
  CHECK(oracle::rel_error(kernel_hessian_covariance(2, 0.35), 0.35 * sigma2) < 1e-14);
}

TEST_CASE("signature variance plumbing") {
  std::mt19937_64 rng(10);
  const PointCloud cloud(oracle::random_cloud(60, 2, rng));
  const DensityModel model(cloud, 0.9);

  Eigen::Vector2d x(0.4, -0.2);
  const SignatureUncertainty u = signature_variance(model, x, 0);
  CHECK((u.gamma - u.gamma.transpose()).norm() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(u.gamma);
  CHECK(eig.eigenvalues().minCoeff() > -1e-8 * std::max(1.0, u.gamma.norm()));

  // stderr scales as n^{-1/2} at fixed h: doubling the data halves the variance
  Eigen::MatrixXd doubled(cloud.size() * 2, 2);
  doubled << cloud.matrix(), cloud.matrix();
  const DensityModel model2(PointCloud(doubled), 0.9);
  const SignatureUncertainty u2 = signature_variance(model2, x, 0);
  CHECK(oracle::rel_error(u2.stderr_d, u.stderr_d / std::sqrt(2.0)) < 1e-9);

  // tied eigenvalues violate the theorem hypotheses
  const DensityModel iso(PointCloud(Eigen::MatrixXd::Zero(1, 2)), 1.0);
  CHECK_THROWS_AS(signature_variance(iso, Eigen::Vector2d(0, 0), 0), numeric_error);
}
