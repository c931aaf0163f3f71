#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

// Numeric oracles used by the tests: quadrature, finite differences and
// distribution-distance statistics.
namespace test_support {

inline double simpson(const std::function<double(double)>& f, double a,
                      double b) {
  double c = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f,
                                   double a, double b, double whole,
                                   double tol, int depth) {
  double c = 0.5 * (a + b);
  double left = simpson(f, a, c);
  double right = simpson(f, c, b);
  double delta = std::abs(left + right - whole);
  // the guards keep the recursion from chasing an unreachable tolerance:
  // refinement at machine precision, or a subinterval whose values sit in
  // the (sub)normal-underflow range and carry no relative accuracy
  if (depth <= 0 || delta < 15.0 * tol ||
      delta <= 1e-14 * std::abs(left + right) ||
      std::abs(left) + std::abs(right) < 1e-280)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, c, left, tol / 2, depth - 1) +
         adaptive_simpson_rec(f, c, b, right, tol / 2, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12) {
  return adaptive_simpson_rec(f, a, b, simpson(f, a, b), tol, 60);
}

// integral over (0, inf) via the substitution s = scale * t/(1-t); pick
// scale near the geometric mean of the integrand's smallest and largest
// feature widths so narrow spikes are not missed by the coarse first grid
inline double integrate_halfline(const std::function<double(double)>& f,
                                 double tol = 1e-12, double scale = 1.0) {
  auto g = [&](double t) {
    double s = scale * t / (1.0 - t);
    double jac = scale / ((1.0 - t) * (1.0 - t));
    double v = f(s);
    return std::isfinite(v) ? v * jac : 0.0;
  };
  return integrate(g, 1e-14, 1.0 - 1e-14, tol);
}

// Richardson-extrapolated central difference, error O(h^6)
inline double deriv(const std::function<double(double)>& f, double x,
                    double h) {
  auto central = [&](double hh) {
    return (f(x + hh) - f(x - hh)) / (2.0 * hh);
  };
  double d1 = central(h), d2 = central(h / 2), d3 = central(h / 4);
  double r1 = (4.0 * d2 - d1) / 3.0, r2 = (4.0 * d3 - d2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

// total variation distance between two empirical pmfs over integers
inline double tv_distance(const std::vector<long>& a,
                          const std::vector<long>& b) {
  std::map<long, double> pa, pb;
  for (long v : a) pa[v] += 1.0 / a.size();
  for (long v : b) pb[v] += 1.0 / b.size();
  double tv = 0.0;
  for (const auto& [v, p] : pa) tv += std::abs(p - (pb.count(v) ? pb[v] : 0));
  for (const auto& [v, p] : pb)
    if (!pa.count(v)) tv += p;
  return 0.5 * tv;
}

inline double tv_vs_pmf(const std::vector<long>& sample,
                        const std::vector<double>& pmf) {
  std::map<long, double> pa;
  for (long v : sample) pa[v] += 1.0 / sample.size();
  double tv = 0.0;
  for (std::size_t v = 0; v < pmf.size(); ++v) {
    double emp = pa.count(static_cast<long>(v)) ? pa[static_cast<long>(v)] : 0;
    tv += std::abs(emp - pmf[v]);
    pa.erase(static_cast<long>(v));
  }
  for (const auto& [v, p] : pa) tv += p;
  return 0.5 * tv;
}

// two-sample Kolmogorov-Smirnov test; returns the asymptotic p-value
inline double ks_two_sample_pvalue(std::vector<double> a,
                                   std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    double fa = static_cast<double>(i) / a.size();
    double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  double n_eff = static_cast<double>(a.size()) * b.size() /
                 (a.size() + b.size());
  double lambda = (std::sqrt(n_eff) + 0.12 + 0.11 / std::sqrt(n_eff)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k)
    p += 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) *
         std::exp(-2.0 * k * k * lambda * lambda);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace test_support
