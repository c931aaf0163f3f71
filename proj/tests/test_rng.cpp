#include <doctest.h>

#include <cmath>
#include <vector>

#include "mfmig/rng.hpp"
#include "test_support.hpp"

using mfmig::GigParams;
using mfmig::RngStream;

TEST_CASE("identical seeds give identical streams") {
  RngStream a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  RngStream c(42), d(43);
  bool all_equal = true;
  for (int i = 0; i < 20; ++i) all_equal &= (c.uniform() == d.uniform());
  CHECK_FALSE(all_equal);
}

TEST_CASE("substreams are distinct and reproducible") {
  RngStream base(7);
  RngStream s1 = base.substream(0);
  RngStream s2 = base.substream(1);
  RngStream s1b = RngStream(7).substream(0);
  CHECK(s1.uniform() == s1b.uniform());
  CHECK(s1.uniform() != s2.uniform());
}

TEST_CASE("uniform stays inside the open interval") {
  RngStream r(1);
  for (int i = 0; i < 100000; ++i) {
    double u = r.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("scalar variate moments") {
  RngStream r(123);
  const int N = 200000;
  double sn = 0, sn2 = 0, sg = 0, sg2 = 0, sb = 0, sp = 0;
  for (int i = 0; i < N; ++i) {
    double z = r.normal();
    sn += z;
    sn2 += z * z;
    double g = r.gamma(3.0, 2.0);
    sg += g;
    sg2 += g * g;
    sb += r.beta(2.0, 5.0);
    sp += static_cast<double>(r.poisson(4.5));
  }
  CHECK(sn / N == doctest::Approx(0.0).epsilon(0.02));
  CHECK(sn2 / N == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sg / N == doctest::Approx(1.5).epsilon(0.01));
  CHECK(sg2 / N - (sg / N) * (sg / N) ==
        doctest::Approx(0.75).epsilon(0.03));
  CHECK(sb / N == doctest::Approx(2.0 / 7.0).epsilon(0.01));
  CHECK(sp / N == doctest::Approx(4.5).epsilon(0.01));
}

TEST_CASE("large-mean poisson") {
  RngStream r(5);
  const int N = 100000;
  double s = 0, s2 = 0;
  for (int i = 0; i < N; ++i) {
    double v = static_cast<double>(r.poisson(250.0));
    s += v;
    s2 += v * v;
  }
  CHECK(s / N == doctest::Approx(250.0).epsilon(0.005));
  CHECK(s2 / N - (s / N) * (s / N) == doctest::Approx(250.0).epsilon(0.05));
}

TEST_CASE("inverse gamma mean") {
  RngStream r(9);
  const int N = 200000;
  double s = 0;
  for (int i = 0; i < N; ++i) s += r.inverse_gamma(4.0, 6.0);
  CHECK(s / N == doctest::Approx(2.0).epsilon(0.01));  // b/(a-1)
}

TEST_CASE("GIG moments against quadrature") {
  // covers all three generator regimes: mode-shift ROU, plain ROU and the
  // constant-hat method for 0 < c < 1 with small omega
  std::vector<GigParams> params = {
      {1.0, 1.0, 3.5},   {2.0, 9.0, 1.2},    {1.0, 0.01, 0.5},
      {1.0, 1e-6, -0.5}, {0.5, 4.0, -2.0},   {3.0, 0.04, 0.2},
      {1.0, 25.0, 6.0},  {10.0, 0.1, -0.5},  {0.2, 0.2, 0.9},
      {5.0, 5.0, -3.5},
  };
  int idx = 0;
  for (const auto& p : params) {
    auto dens = [&](double s) {
      return std::pow(s, p.c - 1.0) *
             std::exp(-0.5 * (p.a * s + p.b / s));
    };
    auto moment = [&](int n) {
      return test_support::integrate_halfline(
          [&](double s) { return std::pow(s, n) * dens(s); }, 1e-13,
          std::sqrt(p.b / p.a));
    };
    double z = moment(0);
    double m1 = moment(1) / z, m2 = moment(2) / z, m4 = moment(4) / z;
    RngStream r(1000 + idx);
    const int N = 400000;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < N; ++i) {
      double v = r.gig(p);
      CHECK(v > 0.0);
      s1 += v;
      s2 += v * v;
    }
    CAPTURE(idx);
    // tolerances account for the monte carlo error of the sample moments,
    // which dominates for the spiked near-gamma-limit parameter sets
    double se1 = std::sqrt((m2 - m1 * m1) / N);
    double se2 = std::sqrt(std::max(0.0, m4 - m2 * m2) / N);
    CHECK(std::abs(s1 / N - m1) < std::max(0.01 * m1, 6.0 * se1));
    CHECK(std::abs(s2 / N - m2) < std::max(0.02 * m2, 6.0 * se2));
    ++idx;
  }
}

TEST_CASE("categorical draws follow the weights") {
  RngStream r(77);
  std::vector<double> w = {1.0, 2.0, 3.0, 4.0};
  std::vector<double> lw;
  for (double v : w) lw.push_back(std::log(v));
  std::vector<long> counts(4, 0), counts_log(4, 0);
  const int N = 100000;
  for (int i = 0; i < N; ++i) {
    ++counts[r.categorical(w)];
    ++counts_log[r.categorical_log(lw)];
  }
  for (int j = 0; j < 4; ++j) {
    CHECK(counts[j] / static_cast<double>(N) ==
          doctest::Approx(w[j] / 10.0).epsilon(0.05));
    CHECK(counts_log[j] / static_cast<double>(N) ==
          doctest::Approx(w[j] / 10.0).epsilon(0.05));
  }
}

TEST_CASE("wishart mean and mvnormal covariance") {
  RngStream r(31);
  Eigen::MatrixXd scale(2, 2);
  scale << 2.0, 0.5, 0.5, 1.0;
  const int N = 50000;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(2, 2);
  for (int i = 0; i < N; ++i) acc += r.wishart(5.0, scale);
  acc /= N;
  CHECK((acc - 5.0 * scale).norm() < 0.05 * (5.0 * scale).norm());

  Eigen::VectorXd mean(2);
  mean << -1.0, 3.0;
  Eigen::MatrixXd cov = scale;
  Eigen::VectorXd msum = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd ssum = Eigen::MatrixXd::Zero(2, 2);
  for (int i = 0; i < N; ++i) {
    Eigen::VectorXd x = r.mvnormal(mean, cov);
    msum += x;
    ssum += x * x.transpose();
  }
  msum /= N;
  Eigen::MatrixXd chat = ssum / N - msum * msum.transpose();
  CHECK((msum - mean).norm() < 0.03);
  CHECK((chat - cov).norm() < 0.05 * cov.norm());
}

TEST_CASE("inverse wishart mean") {
  RngStream r(32);
  Eigen::MatrixXd scale(2, 2);
  scale << 3.0, 1.0, 1.0, 2.0;
  const int N = 50000;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(2, 2);
  for (int i = 0; i < N; ++i) acc += r.inverse_wishart(7.0, scale);
  acc /= N;
  Eigen::MatrixXd want = scale / (7.0 - 2 - 1);  // scale/(dof - p - 1)
  CHECK((acc - want).norm() < 0.05 * want.norm());
}
