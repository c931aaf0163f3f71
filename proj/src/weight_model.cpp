#include "mfmig/weight_model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mfmig/special_math.hpp"

namespace mfmig {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

WeightFamily weight_family_from_string(const std::string& name) {
  if (name == "igau") return WeightFamily::IGauStatic;
  if (name == "gamma") return WeightFamily::GammaStatic;
  if (name == "igau_dynamic") return WeightFamily::IGauDynamic;
  if (name == "gamma_dynamic") return WeightFamily::GammaDynamic;
  throw std::invalid_argument("unknown weight family: " + name);
}

std::string to_string(WeightFamily family) {
  switch (family) {
    case WeightFamily::IGauStatic: return "igau";
    case WeightFamily::GammaStatic: return "gamma";
    case WeightFamily::IGauDynamic: return "igau_dynamic";
    case WeightFamily::GammaDynamic: return "gamma_dynamic";
  }
  return "?";
}

WeightModel::WeightModel(WeightFamily family, double shape)
    : family_(family), shape_(shape) {
  if (!(shape > 0.0))
    throw std::domain_error("WeightModel: shape must be > 0");
}

double WeightModel::effective_shape(int m) const {
  if (m < 1)
    throw std::domain_error("WeightModel: number of components must be >= 1");
  return is_dynamic() ? shape_ / m : shape_;
}

double WeightModel::log_density(double s, int m) const {
  if (!(s > 0.0)) throw std::domain_error("log_density: s must be > 0");
  double a = effective_shape(m);
  if (is_igau())
    return std::log(a) - 0.5 * kLog2Pi - 1.5 * std::log(s) -
           0.5 * (a * a / s + s) + a;
  return (a - 1.0) * std::log(s) - s - std::lgamma(a);
}

double WeightModel::log_psi(double u, int m) const {
  if (u < 0.0) throw std::domain_error("log_psi: u must be >= 0");
  double a = effective_shape(m);
  if (is_igau()) return a * (1.0 - std::sqrt(1.0 + 2.0 * u));
  return -a * std::log1p(u);
}

double WeightModel::log_kappa(double u, int n, int m) const {
  if (u < 0.0) throw std::domain_error("log_kappa: u must be >= 0");
  if (n < 1) throw std::domain_error("log_kappa: n must be >= 1");
  double a = effective_shape(m);
  if (is_igau()) {
    double z = a * std::sqrt(1.0 + 2.0 * u);
    return n * std::log(a) + log_psi(u, m) -
           0.5 * n * std::log1p(2.0 * u) +
           special_math::log_bessel_k_half(n, z) -
           special_math::log_bessel_k_half(1, z);
  }
  return std::lgamma(a + n) - std::lgamma(a) - (a + n) * std::log1p(u);
}

double WeightModel::sample_allocated(RngStream& rng, double u, int n_m,
                                     int m) const {
  if (n_m < 1) throw std::domain_error("sample_allocated: n_m must be >= 1");
  if (u < 0.0) throw std::domain_error("sample_allocated: u must be >= 0");
  double a = effective_shape(m);
  if (is_igau())
    return rng.gig({2.0 * u + 1.0, a * a, n_m - 0.5});
  return rng.gamma(a + n_m, 1.0 + u);
}

double WeightModel::sample_unallocated(RngStream& rng, double u, int m) const {
  if (u < 0.0) throw std::domain_error("sample_unallocated: u must be >= 0");
  double a = effective_shape(m);
  if (is_igau()) return rng.gig({2.0 * u + 1.0, a * a, -0.5});
  return rng.gamma(a, 1.0 + u);
}

double log_nigau_density(std::span<const double> alpha,
                         std::span<const double> pi) {
  const int d = static_cast<int>(alpha.size());
  if (d < 2 || pi.size() != alpha.size())
    throw std::invalid_argument("log_nigau_density: need d >= 2, equal sizes");
  double alpha_sum = 0.0, log_alpha_sum = 0.0, log_pi_sum = 0.0, quad = 0.0;
  for (int i = 0; i < d; ++i) {
    if (!(alpha[i] > 0.0))
      throw std::domain_error("log_nigau_density: alpha must be > 0");
    if (!(pi[i] > 0.0) || !(pi[i] < 1.0))
      throw std::domain_error("log_nigau_density: pi must be interior");
    alpha_sum += alpha[i];
    log_alpha_sum += std::log(alpha[i]);
    log_pi_sum += std::log(pi[i]);
    quad += alpha[i] * alpha[i] / pi[i];
  }
  double log_k =
      (d % 2 == 1)
          ? special_math::log_bessel_k_half((d + 1) / 2, std::sqrt(quad))
          : special_math::log_bessel_k_int(d / 2, std::sqrt(quad));
  return alpha_sum + log_alpha_sum - (0.5 * d - 1.0) * std::log(2.0) -
         0.5 * d * std::log(kPi) + log_k - 1.5 * log_pi_sum -
         0.25 * d * std::log(quad);
}

double UnnormalizedWeights::total() const {
  return std::accumulate(S.begin(), S.end(), 0.0);
}

}  // namespace mfmig
