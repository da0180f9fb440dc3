#include <doctest.h>

#include <cmath>
#include <random>

#include "scorch/prox.hpp"

using namespace scorch;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector x(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) x[i++] = v;
  return x;
}

double penalty_objective(const Vector& w, const Vector& x,
                         const PenaltySpec& spec, const DiagonalMetric& metric,
                         double alpha) {
  double quad = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    double r = x[i] - w[i];
    quad += metric.diag[i] * r * r;
  }
  return spec.value(w) + 0.5 * quad / alpha;
}

}  // namespace

TEST_CASE("prox_l1_scaled examples") {
  DiagonalMetric ones{Vector::Ones(2)};
  CHECK((prox_l1_scaled(vec({2.0, -0.5}), 1.0, ones, 1.0) - vec({1.0, 0.0}))
            .norm() == doctest::Approx(0.0));
  // beta = 0 is the identity
  Vector x = vec({0.3, -4.0});
  CHECK((prox_l1_scaled(x, 0.0, ones, 1.0) - x).norm() == 0.0);
  // metric entries scale the threshold as alpha*beta/d
  DiagonalMetric four{Vector::Constant(2, 4.0)};
  CHECK((prox_l1_scaled(vec({2.0, -0.5}), 1.0, four, 1.0) -
         vec({1.75, -0.25}))
            .norm() == doctest::Approx(0.0));
  DiagonalMetric bad{vec({1.0, 0.0})};
  CHECK_THROWS_AS(prox_l1_scaled(x, 1.0, bad, 1.0), std::invalid_argument);
}

TEST_CASE("prox_l1_scaled literal convention multiplies by the diagonal") {
  DiagonalMetric four{Vector::Constant(2, 4.0)};
  Vector z = prox_l1_scaled(vec({6.0, -0.5}), 1.0, four, 1.0,
                            DHatConvention::literal);
  CHECK(z[0] == doctest::Approx(2.0));  // threshold 4
  CHECK(z[1] == doctest::Approx(0.0));
}

TEST_CASE("prox_l1 support shrinkage and sign preservation") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  std::uniform_real_distribution<double> dpos(0.1, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    Vector x(3), d(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = unif(rng);
      d[i] = dpos(rng);
    }
    Vector w = prox_l1_scaled(x, 0.7, DiagonalMetric{d}, 0.9);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(w[i]) <= std::abs(x[i]) + 1e-15);
      CHECK(w[i] * x[i] >= 0.0);
    }
  }
}

TEST_CASE("firm nonexpansiveness in the metric norm") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unif(-4.0, 4.0);
  std::uniform_real_distribution<double> dpos(0.2, 6.0);
  GroupSpec groups;
  groups.groups = {{0, 1}, {2, 3}};
  groups.omega = vec({1.0, 1.3});
  PenaltySpec spec = PenaltySpec::sparse_group(0.4, 0.8, groups);
  for (int trial = 0; trial < 1000; ++trial) {
    Vector d(4);
    // constant within groups so the closed form is the exact prox
    d[0] = d[1] = dpos(rng);
    d[2] = d[3] = dpos(rng);
    DiagonalMetric metric{d};
    Vector x(4), y(4);
    for (int i = 0; i < 4; ++i) {
      x[i] = unif(rng);
      y[i] = unif(rng);
    }
    Vector px = prox_sparse_group(x, spec, metric, 1.0);
    Vector py = prox_sparse_group(y, spec, metric, 1.0);
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < 4; ++i) {
      lhs += d[i] * (px[i] - py[i]) * (px[i] - py[i]);
      rhs += d[i] * (x[i] - y[i]) * (x[i] - y[i]);
    }
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("prox_group_l2_scaled block shrinkage") {
  GroupSpec groups;
  groups.groups = {{0, 1}};
  groups.omega = Vector::Ones(1);
  PenaltySpec spec = PenaltySpec::group_l2(1.0, groups);
  DiagonalMetric ones{Vector::Ones(2)};

  SUBCASE("zero block stays zero") {
    CHECK(prox_group_l2_scaled(Vector::Zero(2), spec, ones, 1.0).norm() ==
          0.0);
  }
  SUBCASE("standard block soft threshold") {
    Vector w = prox_group_l2_scaled(vec({3.0, 4.0}), spec, ones, 1.0);
    CHECK(w[0] == doctest::Approx(2.4));
    CHECK(w[1] == doctest::Approx(3.2));
  }
  SUBCASE("large penalty clamps the block to zero") {
    PenaltySpec heavy = PenaltySpec::group_l2(10.0, groups);
    CHECK(prox_group_l2_scaled(vec({3.0, 4.0}), heavy, ones, 1.0).norm() ==
          0.0);
  }
  SUBCASE("coordinates outside all groups pass through") {
    GroupSpec partial;
    partial.groups = {{0}};
    partial.omega = Vector::Ones(1);
    PenaltySpec p2 = PenaltySpec::group_l2(0.5, partial);
    DiagonalMetric m3{Vector::Ones(2)};
    Vector w = prox_group_l2_scaled(vec({2.0, -7.0}), p2, m3, 1.0);
    CHECK(w[1] == -7.0);
  }
}

TEST_CASE("prox_sparse_group composition example") {
  GroupSpec groups;
  groups.groups = {{0, 1}, {2}};
  groups.omega = Vector::Ones(2);
  PenaltySpec spec = PenaltySpec::sparse_group(1.0, 1.0, groups);
  DiagonalMetric ones{Vector::Ones(3)};
  // l1 stage gives (1,0,2); group stage zeroes {0,1} (norm 1) and shrinks
  // the singleton 2 -> 1.
  Vector w = prox_sparse_group(vec({2.0, -0.5, 3.0}), spec, ones, 1.0);
  CHECK(w[0] == doctest::Approx(0.0));
  CHECK(w[1] == doctest::Approx(0.0));
  CHECK(w[2] == doctest::Approx(1.0));

  PenaltySpec zero = PenaltySpec::sparse_group(0.0, 0.0, groups);
  Vector x = vec({1.0, -2.0, 0.5});
  CHECK((prox_sparse_group(x, zero, ones, 1.0) - x).norm() == 0.0);
  CHECK(prox_sparse_group(Vector::Zero(3), spec, ones, 1.0).norm() == 0.0);
}

TEST_CASE("prox_oracle agrees with the closed forms") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  std::uniform_real_distribution<double> dpos(0.3, 4.0);
  std::uniform_real_distribution<double> bpos(0.05, 1.5);

  SUBCASE("l1, arbitrary diagonal metric") {
    for (int trial = 0; trial < 40; ++trial) {
      int n = 1 + static_cast<int>(rng() % 4);
      Vector x(n), d(n);
      for (int i = 0; i < n; ++i) {
        x[i] = unif(rng);
        d[i] = dpos(rng);
      }
      double beta = bpos(rng);
      double alpha = 0.2 + 0.8 * bpos(rng) / 1.5;
      PenaltySpec spec = PenaltySpec::l1(beta);
      DiagonalMetric metric{d};
      Vector closed = prox_l1_scaled(x, beta, metric, alpha);
      auto pen = [&](const Vector& w) { return spec.value(w); };
      Vector oracle = prox_oracle(x, pen, metric, alpha, trial);
      CHECK((closed - oracle).lpNorm<Eigen::Infinity>() < 1e-6);
    }
  }

  SUBCASE("group l2, metric constant within the group") {
    GroupSpec groups;
    groups.groups = {{0, 1}};
    groups.omega = Vector::Ones(1);
    for (int trial = 0; trial < 40; ++trial) {
      Vector x(2);
      x << unif(rng), unif(rng);
      double dval = dpos(rng);
      DiagonalMetric metric{Vector::Constant(2, dval)};
      PenaltySpec spec = PenaltySpec::group_l2(bpos(rng), groups);
      double alpha = 0.5;
      Vector closed = prox_group_l2_scaled(x, spec, metric, alpha);
      auto pen = [&](const Vector& w) { return spec.value(w); };
      Vector oracle = prox_oracle(x, pen, metric, alpha, 1000 + trial);
      CHECK((closed - oracle).lpNorm<Eigen::Infinity>() < 1e-6);
    }
  }

  SUBCASE("alpha -> 0 returns x") {
    Vector x = vec({1.0, -2.0});
    PenaltySpec spec = PenaltySpec::l1(1.0);
    auto pen = [&](const Vector& w) { return spec.value(w); };
    DiagonalMetric ones{Vector::Ones(2)};
    Vector w = prox_oracle(x, pen, ones, 1e-9);
    CHECK((w - x).lpNorm<Eigen::Infinity>() < 1e-6);
  }
}

TEST_CASE("exact group prox under a spread metric matches the oracle") {
  // within-group spread > 10x forces the iterative exact solve
  GroupSpec groups;
  groups.groups = {{0, 1, 2}};
  groups.omega = Vector::Ones(1);
  PenaltySpec spec = PenaltySpec::group_l2(0.8, groups);
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    Vector x(3), d(3);
    for (int i = 0; i < 3; ++i) x[i] = unif(rng);
    d << 0.05, 0.4, 1.2;  // spread 24x
    DiagonalMetric metric{d};
    double alpha = 0.7;
    Vector closed = prox_group_l2_scaled(x, spec, metric, alpha);
    auto pen = [&](const Vector& w) { return spec.value(w); };
    Vector oracle = prox_oracle(x, pen, metric, alpha, 7000 + trial);
    CHECK((closed - oracle).lpNorm<Eigen::Infinity>() < 1e-6);
    // and the closed-form objective is never better than ours
    CHECK(penalty_objective(closed, x, spec, metric, alpha) <=
          penalty_objective(oracle, x, spec, metric, alpha) + 1e-10);
  }
}

TEST_CASE("sparse-group composition matches the oracle on the summed penalty") {
  GroupSpec groups;
  groups.groups = {{0, 1}, {2}};
  groups.omega = vec({1.0, 0.7});
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> unif(-2.5, 2.5);
  std::uniform_real_distribution<double> dpos(0.3, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    Vector x(3), d(3);
    for (int i = 0; i < 3; ++i) x[i] = unif(rng);
    double d01 = dpos(rng);
    d << d01, d01, dpos(rng);
    DiagonalMetric metric{d};
    PenaltySpec spec = PenaltySpec::sparse_group(0.35, 0.6, groups);
    double alpha = 0.9;
    Vector closed = prox_sparse_group(x, spec, metric, alpha);
    auto pen = [&](const Vector& w) { return spec.value(w); };
    Vector oracle = prox_oracle(x, pen, metric, alpha, 9000 + trial);
    CHECK((closed - oracle).lpNorm<Eigen::Infinity>() < 1e-6);
  }
}
