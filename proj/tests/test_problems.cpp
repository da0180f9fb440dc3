#include <doctest.h>

#include <cmath>
#include <random>

#include "scorch/problems.hpp"

using namespace scorch;

namespace {

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) A(i, j) = gauss(rng);
  return A;
}

Vector random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5555);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = gauss(rng);
  return x;
}

Vector random_labels(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0xaaaa);
  Vector y(m);
  for (int i = 0; i < m; ++i) y[i] = (rng() & 1) ? 1.0 : -1.0;
  return y;
}

void check_gradient(const CompositeProblem& p, const Vector& x, double tol) {
  Vector g = p.grad_f(x);
  for (int i = 0; i < p.n; ++i) {
    double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    double fd = (p.f(xp) - p.f(xm)) / (2 * h);
    CHECK(g[i] == doctest::Approx(fd).epsilon(tol).scale(1.0));
  }
}

void check_hessian(const CompositeProblem& p, const Vector& x, double tol) {
  Matrix H = p.hess_f(x);
  CHECK((H - H.transpose()).cwiseAbs().maxCoeff() <
        1e-10 * std::max(1.0, H.cwiseAbs().maxCoeff()));
  for (int i = 0; i < p.n; ++i) {
    double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    Vector fd = (p.grad_f(xp) - p.grad_f(xm)) / (2 * h);
    for (int j = 0; j < p.n; ++j)
      CHECK(H(j, i) == doctest::Approx(fd[j]).epsilon(tol).scale(1.0));
  }
}

}  // namespace

TEST_CASE("logistic problem basics") {
  Matrix A = random_matrix(8, 3, 1);
  Vector y = random_labels(8, 1);
  auto p = logistic_problem(A, y, 0.3, 1.0);
  // f(0) = m log 2
  CHECK(p.f(Vector::Zero(3)) ==
        doctest::Approx(8 * std::log(2.0)).epsilon(1e-12));
  // single sample closed form
  Matrix A1(1, 1);
  A1 << 1.0;
  Vector y1(1);
  y1 << 1.0;
  auto p1 = logistic_problem(A1, y1, 0.0, 1.0);
  Vector x10(1);
  x10 << 10.0;
  CHECK(p1.f(x10) ==
        doctest::Approx(std::log1p(std::exp(-10.0))).epsilon(1e-12));
  // bad labels
  Vector bad = y;
  bad[0] = 0.5;
  CHECK_THROWS_AS(logistic_problem(A, bad, 0.3, 1.0), std::invalid_argument);
}

TEST_CASE("logistic derivatives match finite differences") {
  Matrix A = random_matrix(20, 5, 2);
  Vector y = random_labels(20, 2);
  auto p = logistic_problem(A, y, 0.1, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Vector x = random_vector(5, 100 + trial);
    check_gradient(p, x, 1e-5);
    check_hessian(p, x, 1e-4);
  }
  // loss curvature is nonnegative
  const ResidualModel& model = *p.residual;
  for (int trial = 0; trial < 50; ++trial) {
    double yi = (trial & 1) ? 1.0 : -1.0;
    double yhat = -3.0 + 0.12 * trial;
    CHECK(model.d2loss(yi, yhat) >= 0.0);
  }
}

TEST_CASE("least squares problem basics") {
  Matrix A = random_matrix(6, 4, 3);
  Vector xsol = random_vector(4, 3);
  Vector y = A * xsol;
  auto p = least_squares_problem(A, y, PenaltySpec::l1(0.1), 0.5);
  CHECK(p.f(xsol) == doctest::Approx(0.0).scale(1.0));
  CHECK(p.grad_f(xsol).norm() == doctest::Approx(0.0).scale(1e-10));
  Matrix H = p.hess_f(Vector::Zero(4));
  CHECK((H - A.transpose() * A).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(H(0, 0) == doctest::Approx(A.col(0).squaredNorm()));
  Vector yshort(3);
  CHECK_THROWS_AS(least_squares_problem(A, yshort, PenaltySpec::l1(0.1), 0.5),
                  std::invalid_argument);
  for (int trial = 0; trial < 5; ++trial) {
    check_gradient(p, random_vector(4, 40 + trial), 1e-5);
    check_hessian(p, random_vector(4, 50 + trial), 1e-4);
  }
}

TEST_CASE("augmented jacobian structure and identity") {
  Matrix A = random_matrix(5, 3, 4);
  Vector y = random_labels(5, 4);
  auto p = logistic_problem(A, y, 0.2, 1.0);

  SUBCASE("rows are the model jacobian plus the smoother gradient") {
    Vector x = random_vector(3, 9);
    auto aug = build_augmented_jacobian(*p.residual, p.smoother, x);
    REQUIRE(aug.jac.rows() == 6);
    CHECK((aug.jac.topRows(5) - A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((aug.jac.row(5).transpose() - p.smoother.gradient(x))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(aug.v[5] == 0.0);
    CHECK(aug.u[5] == 1.0);
  }

  SUBCASE("J^T u equals grad f + grad g_s") {
    for (int trial = 0; trial < 20; ++trial) {
      Vector x = random_vector(3, 200 + trial);
      auto aug = build_augmented_jacobian(*p.residual, p.smoother, x);
      Vector lhs = aug.jac.transpose() * aug.u;
      Vector rhs = p.grad_q(x);
      CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-12);
    }
  }

  SUBCASE("at x = 0 the smoother row vanishes and J^T u = grad f") {
    Vector x = Vector::Zero(3);
    auto aug = build_augmented_jacobian(*p.residual, p.smoother, x);
    CHECK(aug.jac.row(5).cwiseAbs().maxCoeff() == 0.0);
    CHECK((aug.jac.transpose() * aug.u - p.grad_f(x))
              .lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("least squares: unaugmented GGN block equals the exact Hessian") {
  Matrix A = random_matrix(7, 4, 5);
  Vector y = random_vector(7, 5);
  auto p = least_squares_problem(A, y, PenaltySpec::l1(0.05), 1.0);
  Vector x = random_vector(4, 6);
  auto aug = build_augmented_jacobian(*p.residual, p.smoother, x);
  Matrix ggn = aug.jac.transpose() * aug.v.asDiagonal() * aug.jac;
  CHECK((ggn - A.transpose() * A).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("subgradient residual") {
  SUBCASE("1-d toy vanishes at the smoothed stationary point") {
    // f = 0.5 (x-1)^2, beta = 2: x* = 0 and |grad q(0)| = 1 <= 2
    Matrix A(1, 1);
    A << 1.0;
    Vector y(1);
    y << 1.0;
    auto p = least_squares_problem(A, y, PenaltySpec::l1(2.0), 0.5);
    Vector zero(1);
    zero << 0.0;
    CHECK(subgradient_residual(p, zero) <= 1e-8);
  }

  SUBCASE("beta = 0 gives the plain gradient norm") {
    Matrix A = random_matrix(5, 3, 7);
    Vector y = random_vector(5, 7);
    auto p = least_squares_problem(A, y, PenaltySpec::l1(0.0), 1.0);
    Vector x = random_vector(3, 8);
    CHECK(subgradient_residual(p, x) ==
          doctest::Approx(p.grad_q(x).norm()).epsilon(1e-12));
  }

  SUBCASE("huge beta clamps everything at x = 0") {
    Matrix A = random_matrix(5, 3, 9);
    Vector y = random_vector(5, 9);
    auto p = least_squares_problem(A, y, PenaltySpec::l1(1e6), 1.0);
    CHECK(subgradient_residual(p, Vector::Zero(3)) == 0.0);
  }

  SUBCASE("group penalty distance against a brute-force sample") {
    GroupSpec groups;
    groups.groups = {{0, 1}};
    groups.omega = Vector::Ones(1);
    Matrix A = random_matrix(4, 2, 10);
    Vector y = random_vector(4, 10);
    auto p = least_squares_problem(A, y, PenaltySpec::group_l2(0.8, groups),
                                   1.0);
    Vector x = random_vector(2, 11);
    double r = subgradient_residual(p, x);
    // brute force: at x != 0 the subdifferential is the singleton
    // kappa * x/||x||; distance is explicit
    Vector v = -p.grad_q(x);
    Vector sub = 0.8 * x / x.norm();
    CHECK(r == doctest::Approx((v - sub).norm()).epsilon(1e-12));

    // at the zero block: dist(v, kappa-ball)
    Vector zero = Vector::Zero(2);
    double r0 = subgradient_residual(p, zero);
    Vector v0 = -p.grad_q(zero);
    CHECK(r0 ==
          doctest::Approx(std::max(v0.norm() - 0.8, 0.0)).epsilon(1e-12));
  }
}

TEST_CASE("lambda_max_ata matches a direct eigensolve") {
  Matrix A = random_matrix(12, 6, 12);
  Matrix ata = A.transpose() * A;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(ata);
  double expected = eig.eigenvalues().maxCoeff();
  CHECK(lambda_max_ata(A) == doctest::Approx(expected).epsilon(1e-9));
}
