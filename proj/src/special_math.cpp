#include "mfmig/special_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mfmig::special_math {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286061;

// log K_{1/2}(z) = 0.5*log(pi/(2z)) - z
double log_k_half(double z) { return 0.5 * std::log(kPi / (2.0 * z)) - z; }

// Exponentially scaled e^z K_0(z), e^z K_1(z); Abramowitz & Stegun 9.8.
double scaled_k0(double z) {
  if (z <= 2.0) {
    double t = z * z / 14.0625;  // (z/3.75)^2
    double i0 = 1.0 + t * (3.5156229 + t * (3.0899424 + t * (1.2067492 +
                t * (0.2659732 + t * (0.0360768 + t * 0.0045813)))));
    double y = z * z / 4.0;
    double k0 = -std::log(z / 2.0) * i0 +
                (-kEulerGamma + y * (0.42278420 + y * (0.23069756 +
                 y * (0.03488590 + y * (0.00262698 + y * (0.00010750 +
                 y * 0.00000740))))));
    return k0 * std::exp(z);
  }
  double y = 2.0 / z;
  return (1.25331414 + y * (-0.07832358 + y * (0.02189568 + y * (-0.01062446 +
          y * (0.00587872 + y * (-0.00251540 + y * 0.00053208)))))) /
         std::sqrt(z);
}

double scaled_k1(double z) {
  if (z <= 2.0) {
    double t = z * z / 14.0625;
    double i1 = z * (0.5 + t * (0.87890594 + t * (0.51498869 + t * (0.15084934 +
                t * (0.02658733 + t * (0.00301532 + t * 0.00032411))))));
    double y = z * z / 4.0;
    double k1 = std::log(z / 2.0) * i1 +
                (1.0 / z) * (1.0 + y * (0.15443144 + y * (-0.67278579 +
                 y * (-0.18156897 + y * (-0.01919402 + y * (-0.00110404 +
                 y * -0.00004686))))));
    return k1 * std::exp(z);
  }
  double y = 2.0 / z;
  return (1.25331414 + y * (0.23498619 + y * (-0.03655620 + y * (0.01504268 +
          y * (-0.00780353 + y * (0.00325614 + y * -0.00068245)))))) /
         std::sqrt(z);
}

}  // namespace

double log_bessel_k_half(int order_index, double z) {
  if (z <= 0.0) throw std::domain_error("log_bessel_k_half: z must be > 0");
  if (order_index < 0)
    throw std::domain_error("log_bessel_k_half: order index must be >= 0");
  // K_{n-1/2} with n = order_index; n = 0 gives K_{-1/2} = K_{1/2}.
  int m = std::max(order_index - 1, 0);
  if (m == 0) return log_k_half(z);
  double log2z = std::log(2.0 * z);
  double acc = -std::numeric_limits<double>::infinity();
  for (int s = 0; s <= m; ++s) {
    double term = std::lgamma(m + s + 1.0) - std::lgamma(s + 1.0) -
                  std::lgamma(m - s + 1.0) - s * log2z;
    acc = log_sum_exp(acc, term);
  }
  return log_k_half(z) + acc;
}

double log_bessel_k_int(int order, double z) {
  if (z <= 0.0) throw std::domain_error("log_bessel_k_int: z must be > 0");
  if (order < 0) order = -order;
  double km = scaled_k0(z);
  if (order == 0) return std::log(km) - z;
  double k = scaled_k1(z);
  for (int n = 1; n < order; ++n) {
    double knext = km + (2.0 * n / z) * k;
    km = k;
    k = knext;
  }
  return std::log(k) - z;
}

double expint_e1(double x) {
  if (x <= 0.0) throw std::domain_error("expint_e1: x must be > 0");
  if (x <= 1.0) {
    // power series
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= 60; ++k) {
      term *= -x / k;
      double add = -term / k;
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return -kEulerGamma - std::log(x) + sum;
  }
  // continued fraction (modified Lentz)
  double b = x + 1.0;
  double c = 1e308, d = 1.0 / b, h = d;
  for (int i = 1; i <= 200; ++i) {
    double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

double upper_incomplete_gamma_neg2(double x) {
  if (x <= 0.0)
    throw std::domain_error("upper_incomplete_gamma_neg2: x must be > 0");
  double ex = std::exp(-x);
  double g0 = expint_e1(x);                    // Gamma(0, x)
  double gm1 = ex / x - g0;                    // Gamma(-1, x)
  return (ex / (x * x) - gm1) / 2.0;           // Gamma(-2, x)
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty())
    throw std::invalid_argument("log_sum_exp: empty input");
  double m = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

double log_sum_exp(double a, double b) {
  double m = std::max(a, b);
  if (!std::isfinite(m)) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace mfmig::special_math
