#include <doctest.h>

#include <cmath>
#include <sstream>

#include "scorch/data.hpp"

using namespace scorch;

TEST_CASE("libsvm line parsing") {
  std::istringstream in("1 3:0.5 7:1.2\n-1 1:2.0\n");
  Dataset data = parse_libsvm(in, "test");
  REQUIRE(data.samples() == 2);
  REQUIRE(data.dim() == 7);
  CHECK(data.y[0] == 1.0);
  CHECK(data.y[1] == -1.0);
  CHECK(data.A(0, 2) == doctest::Approx(0.5));
  CHECK(data.A(0, 6) == doctest::Approx(1.2));
  CHECK(data.A(1, 0) == doctest::Approx(2.0));
  CHECK(data.A(0, 0) == 0.0);
}

TEST_CASE("zero-one labels map to minus-one / plus-one") {
  std::istringstream in("0 1:2\n1 2:1\n");
  Dataset data = parse_libsvm(in, "test");
  CHECK(data.y[0] == -1.0);
  CHECK(data.y[1] == 1.0);
}

TEST_CASE("one-two labels map to plus-one / minus-one") {
  std::istringstream in("1 1:2\n2 2:1\n");
  Dataset data = parse_libsvm(in, "test");
  CHECK(data.y[0] == 1.0);
  CHECK(data.y[1] == -1.0);
}

TEST_CASE("malformed inputs rejected with line numbers") {
  auto expect_error = [](const std::string& text, int line) {
    std::istringstream in(text);
    try {
      parse_libsvm(in, "bad");
      FAIL("expected ParseError for: ", text);
    } catch (const ParseError& err) {
      CHECK(err.line() == line);
      CHECK(std::string(err.what()).find("line " + std::to_string(line)) !=
            std::string::npos);
    }
  };
  expect_error("1 3:0.5\nx 1:1\n", 2);          // malformed label
  expect_error("1 3:0.5 2:1.0\n", 1);           // nonascending index
  expect_error("1 0:0.5\n", 1);                 // index 0
  expect_error("1 2:abc\n", 1);                 // malformed value
  expect_error("1 5\n", 1);                     // missing colon
}

TEST_CASE("libsvm round-trip preserves the sparse structure") {
  LogisticGenConfig config;
  config.m = 17;
  config.n = 9;
  config.seed = 21;
  auto [data, truth] = gen_logistic(config);
  // sparsify a few entries so structure is nontrivial
  for (int i = 0; i < data.samples(); ++i)
    for (int j = 0; j < data.dim(); ++j)
      if ((i + j) % 3 == 0) data.A(i, j) = 0.0;

  std::ostringstream out;
  write_libsvm(data, out);
  std::istringstream in(out.str());
  Dataset back = parse_libsvm(in, "roundtrip", data.dim());
  REQUIRE(back.samples() == data.samples());
  REQUIRE(back.dim() == data.dim());
  CHECK((back.A - data.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.y - data.y).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gen_logistic determinism and structure") {
  LogisticGenConfig config;
  config.m = 40;
  config.n = 100;
  config.seed = 5;
  config.sparsity = 0.1;
  auto [d1, t1] = gen_logistic(config);
  auto [d2, t2] = gen_logistic(config);
  CHECK((d1.A - d2.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d1.y - d2.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((t1.x_star - t2.x_star).cwiseAbs().maxCoeff() == 0.0);
  CHECK(t1.nnz() == 10);
  for (Eigen::Index i = 0; i < d1.y.size(); ++i)
    CHECK((d1.y[i] == 1.0 || d1.y[i] == -1.0));

  config.flip_rate = 0.0;
  auto [d3, t3] = gen_logistic(config);
  Vector margin = d3.A * t3.x_star;
  for (Eigen::Index i = 0; i < d3.y.size(); ++i)
    CHECK(d3.y[i] == (margin[i] >= 0 ? 1.0 : -1.0));
}

TEST_CASE("gen_group_lasso structure") {
  GroupLassoGenConfig config;
  config.m = 60;
  config.n = 200;
  config.n_groups = 10;
  config.seed = 9;
  auto [data, truth] = gen_group_lasso(config);
  REQUIRE(truth.groups.has_value());
  CHECK(truth.groups->groups.size() == 10);
  // nnz = n_active * ceil(group_size * within_fraction)
  int expected_active = 1;  // round(0.1 * 10)
  int per_group = static_cast<int>(std::ceil(20 * 0.1));
  CHECK(static_cast<int>(truth.active_groups.size()) == expected_active);
  CHECK(truth.nnz() == expected_active * per_group);
  // active entries only inside active groups, with magnitude >= 0.5
  for (Eigen::Index i = 0; i < truth.x_star.size(); ++i) {
    if (truth.x_star[i] == 0.0) continue;
    CHECK(std::abs(truth.x_star[i]) >= 0.5);
    bool in_active = false;
    for (int j : truth.active_groups)
      for (int k : truth.groups->groups[j])
        if (k == static_cast<int>(i)) in_active = true;
    CHECK(in_active);
  }
  // omega_j = sqrt(group size)
  CHECK(truth.groups->omega[0] == doctest::Approx(std::sqrt(20.0)));

  config.n = 201;
  CHECK_THROWS_AS(gen_group_lasso(config), std::invalid_argument);
}

TEST_CASE("gen_group_lasso determinism") {
  GroupLassoGenConfig config;
  config.m = 30;
  config.n = 40;
  config.n_groups = 4;
  config.seed = 123;
  auto [d1, t1] = gen_group_lasso(config);
  auto [d2, t2] = gen_group_lasso(config);
  CHECK((d1.A - d2.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d1.y - d2.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((t1.x_star - t2.x_star).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("group design lag-1 column correlation near 0.5") {
  GroupLassoGenConfig config;
  config.m = 6000;
  config.n = 20;
  config.n_groups = 4;
  config.seed = 77;
  auto [data, truth] = gen_group_lasso(config);
  for (int lag : {1, 2}) {
    double expected = std::pow(config.ar_rho, lag);
    double acc = 0.0;
    int count = 0;
    for (int j = 0; j + lag < data.dim(); ++j) {
      Vector a = data.A.col(j), b = data.A.col(j + lag);
      double corr = (a.dot(b) / data.samples() -
                     a.mean() * b.mean()) /
                    std::sqrt((a.squaredNorm() / data.samples() -
                               a.mean() * a.mean()) *
                              (b.squaredNorm() / data.samples() -
                               b.mean() * b.mean()));
      acc += corr;
      ++count;
    }
    CHECK(acc / count == doctest::Approx(expected).epsilon(0.1));
  }
}

TEST_CASE("gen_deconvolution structure") {
  DeconvolutionGenConfig config;
  config.n = 64;
  config.seed = 4;
  auto [data, truth] = gen_deconvolution(config);
  // banded Toeplitz: A[i][j] depends only on i-j, zero outside [0,3]
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      int k = i - j;
      if (k < 0 || k > 3)
        CHECK(data.A(i, j) == 0.0);
      else
        CHECK(data.A(i, j) ==
              doctest::Approx((k == 0 || k == 3) ? 1.0 / 6 : 2.0 / 6));
    }
  CHECK(truth.nnz() == 1);  // ceil(64/64)

  SUBCASE("zero spikes and zero noise give y = 0") {
    config.spikes = 0;
    config.noise_sigma = 0.0;
    auto [d0, t0] = gen_deconvolution(config);
    CHECK(d0.y.cwiseAbs().maxCoeff() == 0.0);
    CHECK(t0.nnz() == 0);
  }
}

TEST_CASE("permuted groups partition all coordinates") {
  GroupSpec spec = make_permuted_groups(24, 6, 3);
  spec.validate(24);
  std::vector<int> seen(24, 0);
  for (const auto& g : spec.groups) {
    CHECK(g.size() == 4);
    for (int i : g) seen[i]++;
  }
  for (int c : seen) CHECK(c == 1);
}
