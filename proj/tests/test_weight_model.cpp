#include <doctest.h>

#include <cmath>
#include <vector>

#include "mfmig/rng.hpp"
#include "mfmig/weight_model.hpp"
#include "test_support.hpp"

using mfmig::RngStream;
using mfmig::WeightFamily;
using mfmig::WeightModel;
using test_support::rel_err;

namespace {

// the inverse Gaussian density spikes near shape^2 for small shapes, so the
// substitution scale splits the difference between spike and tail widths
double quad_scale(const WeightModel& w) {
  return w.is_igau() ? std::min(1.0, w.shape()) : 1.0;
}

// gamma densities with shape below one carry an integrable power
// singularity at zero that Simpson cannot resolve directly; substituting
// s = v^(1/shape) flattens it
double quad_psi(const WeightModel& w, double u, int m) {
  if (!w.is_igau() && w.shape() < 1.0) {
    double p = 1.0 / w.shape();
    return test_support::integrate_halfline(
        [&](double v) {
          double s = std::pow(v, p);
          return std::exp(-u * s + w.log_density(s, m) + std::log(p) +
                          (p - 1.0) * std::log(v));
        },
        1e-13);
  }
  return test_support::integrate_halfline(
      [&](double s) { return std::exp(-u * s + w.log_density(s, m)); },
      1e-13, quad_scale(w));
}

double quad_kappa(const WeightModel& w, double u, int n, int m) {
  return test_support::integrate_halfline(
      [&](double s) {
        return std::pow(s, n) * std::exp(-u * s + w.log_density(s, m));
      },
      1e-13, quad_scale(w));
}

}  // namespace

TEST_CASE("weight densities integrate to one") {
  for (auto family : {WeightFamily::IGauStatic, WeightFamily::GammaStatic}) {
    for (double shape : {0.05, 0.5, 1.0, 3.0}) {
      WeightModel w(family, shape);
      double z = quad_psi(w, 0.0, 1);
      CAPTURE(shape);
      CHECK(rel_err(z, 1.0) < 1e-8);
    }
  }
}

TEST_CASE("laplace transform matches quadrature") {
  RngStream pick(2024);
  for (auto family : {WeightFamily::IGauStatic, WeightFamily::GammaStatic}) {
    for (int rep = 0; rep < 25; ++rep) {
      double shape = 0.05 + 3.0 * pick.uniform();
      double u = 5.0 * pick.uniform();
      WeightModel w(family, shape);
      CAPTURE(shape);
      CAPTURE(u);
      CHECK(rel_err(std::exp(w.log_psi(u)), quad_psi(w, u, 1)) < 1e-8);
    }
  }
}

TEST_CASE("cumulant matches the moment integral") {
  RngStream pick(9);
  for (auto family : {WeightFamily::IGauStatic, WeightFamily::GammaStatic}) {
    for (int rep = 0; rep < 20; ++rep) {
      double shape = 0.1 + 2.0 * pick.uniform();
      double u = 4.0 * pick.uniform();
      WeightModel w(family, shape);
      for (int n = 1; n <= 6; ++n) {
        CAPTURE(shape);
        CAPTURE(u);
        CAPTURE(n);
        CHECK(rel_err(std::exp(w.log_kappa(u, n)), quad_kappa(w, u, n, 1)) <
              1e-7);
      }
    }
  }
}

TEST_CASE("cumulant matches repeated derivatives of the transform") {
  // kappa(u; n) = (-1)^n d^n psi / du^n, checked for n = 1, 2 by nested
  // finite differences
  WeightModel w(WeightFamily::IGauStatic, 1.3);
  double u = 0.7;
  auto psi = [&](double v) { return std::exp(w.log_psi(v)); };
  double d1 = -test_support::deriv(psi, u, 1e-3);
  CHECK(rel_err(std::exp(w.log_kappa(u, 1)), d1) < 1e-8);
  auto dpsi = [&](double v) { return test_support::deriv(psi, v, 1e-3); };
  double d2 = test_support::deriv(dpsi, u, 1e-3);
  CHECK(rel_err(std::exp(w.log_kappa(u, 2)), d2) < 1e-5);
}

TEST_CASE("dynamic families divide the shape by the component count") {
  WeightModel w(WeightFamily::IGauDynamic, 2.0);
  WeightModel fixed(WeightFamily::IGauStatic, 0.5);
  CHECK(w.log_psi(1.3, 4) == doctest::Approx(fixed.log_psi(1.3)));
  CHECK(w.log_kappa(1.3, 2, 4) == doctest::Approx(fixed.log_kappa(1.3, 2)));
  CHECK(w.log_density(0.8, 4) == doctest::Approx(fixed.log_density(0.8)));
}

TEST_CASE("conditional weight draws match tilted-density moments") {
  RngStream r(17);
  const int N = 200000;
  struct Case {
    WeightFamily family;
    double shape, u;
    int n_m;  // 0 means unallocated
  };
  std::vector<Case> cases = {
      {WeightFamily::IGauStatic, 1.0, 0.5, 3},
      {WeightFamily::IGauStatic, 0.2, 2.0, 0},
      {WeightFamily::IGauStatic, 2.5, 0.0, 1},
      {WeightFamily::GammaStatic, 0.7, 1.5, 4},
      {WeightFamily::GammaStatic, 1.5, 0.3, 0},
  };
  for (const auto& c : cases) {
    WeightModel w(c.family, c.shape);
    auto dens = [&](double s) {
      return std::pow(s, c.n_m) * std::exp(-c.u * s + w.log_density(s));
    };
    double z = test_support::integrate_halfline(dens, 1e-13, quad_scale(w));
    double m1 = test_support::integrate_halfline(
                    [&](double s) { return s * dens(s); }, 1e-13,
                    quad_scale(w)) /
                z;
    double s1 = 0;
    for (int i = 0; i < N; ++i)
      s1 += c.n_m > 0 ? w.sample_allocated(r, c.u, c.n_m)
                      : w.sample_unallocated(r, c.u);
    CAPTURE(c.shape);
    CAPTURE(c.u);
    CAPTURE(c.n_m);
    CHECK(rel_err(s1 / N, m1) < 0.015);
  }
}

TEST_CASE("simplex density normalizes, d = 2") {
  std::vector<double> alpha = {0.8, 1.7};
  auto f = [&](double p) {
    std::vector<double> pi = {p, 1.0 - p};
    return std::exp(mfmig::log_nigau_density(alpha, pi));
  };
  double z = test_support::integrate(f, 1e-9, 1.0 - 1e-9, 1e-12);
  CHECK(rel_err(z, 1.0) < 1e-5);
}

TEST_CASE("simplex density normalizes, d = 3") {
  std::vector<double> alpha = {1.0, 1.0, 1.0};
  // midpoint grid over the open simplex
  const int G = 600;
  double z = 0.0;
  for (int i = 0; i < G; ++i) {
    for (int j = 0; j < G - i - 1; ++j) {
      double p1 = (i + 0.5) / G, p2 = (j + 0.5) / G;
      std::vector<double> pi = {p1, p2, 1.0 - p1 - p2};
      if (pi[2] <= 0.0) continue;
      z += std::exp(mfmig::log_nigau_density(alpha, pi)) / (G * G);
    }
  }
  CHECK(rel_err(z, 1.0) < 5e-3);
}

TEST_CASE("normalized weights from the weight prior follow the simplex law") {
  // d = 2: normalize two inverse Gaussian draws and compare against the
  // closed-form marginal of the first coordinate
  RngStream r(5);
  WeightModel w(WeightFamily::IGauStatic, 1.2);
  std::vector<double> alpha = {1.2, 1.2};
  const int N = 200000;
  const int B = 40;
  std::vector<double> counts(B, 0.0);
  for (int i = 0; i < N; ++i) {
    double s1 = w.sample_unallocated(r, 0.0);
    double s2 = w.sample_unallocated(r, 0.0);
    double p = s1 / (s1 + s2);
    counts[std::min(B - 1, static_cast<int>(p * B))] += 1.0;
  }
  for (int b = 0; b < B; ++b) {
    double lo = static_cast<double>(b) / B, hi = (b + 1.0) / B;
    double want = test_support::integrate(
        [&](double p) {
          std::vector<double> pi = {p, 1.0 - p};
          return std::exp(mfmig::log_nigau_density(alpha, pi));
        },
        std::max(lo, 1e-10), std::min(hi, 1.0 - 1e-10), 1e-11);
    CHECK(counts[b] / N == doctest::Approx(want).epsilon(0.05).scale(0.01));
  }
}
