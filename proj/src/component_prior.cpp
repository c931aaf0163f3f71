#include "mfmig/component_prior.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "mfmig/special_math.hpp"

namespace mfmig {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTailTol = 1e-14;
constexpr long kMaxSeriesTerms = 1000000;
}  // namespace

CountFamily count_family_from_string(const std::string& name) {
  if (name == "poisson") return CountFamily::PoissonShifted;
  if (name == "geometric") return CountFamily::Geometric;
  if (name == "bnb") return CountFamily::BetaNegBinomial;
  throw std::invalid_argument("unknown component-count prior: " + name);
}

std::string to_string(CountFamily family) {
  switch (family) {
    case CountFamily::PoissonShifted: return "poisson";
    case CountFamily::Geometric: return "geometric";
    case CountFamily::BetaNegBinomial: return "bnb";
  }
  return "?";
}

double ComponentCountPrior::log_qM(int m) const {
  if (m < 1) return kNegInf;
  if (family == CountFamily::Geometric)
    return std::log(geo_p) + (m - 1) * std::log1p(-geo_p);
  // Poisson(Lambda) on M - 1
  return (m - 1) * std::log(lambda) - lambda - std::lgamma(m);
}

double log_Psi_series(const ComponentCountPrior& prior, int k,
                      double log_psi_u) {
  if (k < 1) throw std::domain_error("log_Psi: k must be >= 1");
  double acc = kNegInf;
  double prev = kNegInf;
  for (long m = 0; m < kMaxSeriesTerms; ++m) {
    double term = std::lgamma(m + k + 1.0) - std::lgamma(m + 1.0) +
                  m * log_psi_u + prior.log_qM(static_cast<int>(m) + k);
    acc = special_math::log_sum_exp(acc, term);
    bool ratio_below_one = m > 0 && term < prev;
    if (ratio_below_one && term < acc + std::log(kTailTol)) return acc;
    if (log_psi_u == kNegInf) return acc;  // only the m = 0 term exists
    prev = term;
  }
  throw std::runtime_error("log_Psi: series failed to converge");
}

double log_Psi(const ComponentCountPrior& prior, int k, double log_psi_u) {
  if (k < 1) throw std::domain_error("log_Psi: k must be >= 1");
  if (prior.family == CountFamily::Geometric)
    return log_Psi_series(prior, k, log_psi_u);
  double lam = prior.lambda;
  double psi = std::exp(log_psi_u);
  return (k - 1) * std::log(lam) + std::log(lam * psi + k) +
         lam * (psi - 1.0);
}

double sample_Lambda(ComponentCountPrior& prior, RngStream& rng, int k,
                     double log_psi_u) {
  if (!prior.has_lambda())
    throw std::domain_error("sample_Lambda: prior has no Lambda");
  if (k < 1) throw std::domain_error("sample_Lambda: k must be >= 1");
  double psi = std::exp(log_psi_u);
  double rate = 1.0 - psi + prior.b_lambda;
  double shape1 = k + prior.a_lambda;      // from the psi * Lambda^{k+a-1} term
  double shape2 = k + prior.a_lambda - 1;  // from the k * Lambda^{k+a-2} term
  double lw1 = log_psi_u + std::lgamma(shape1) - shape1 * std::log(rate);
  double lw2 = std::log(static_cast<double>(k)) + std::lgamma(shape2) -
               shape2 * std::log(rate);
  std::array<double, 2> lw{lw1, lw2};
  int pick = rng.categorical_log(lw);
  prior.lambda = rng.gamma(pick == 0 ? shape1 : shape2, rate);
  return prior.lambda;
}

long sample_M_na(const ComponentCountPrior& prior, RngStream& rng, int k,
                 double log_psi_u) {
  if (k < 1) throw std::domain_error("sample_M_na: k must be >= 1");
  if (log_psi_u == kNegInf) return 0;
  if (prior.family != CountFamily::Geometric) {
    double lam_psi = prior.lambda * std::exp(log_psi_u);
    if (lam_psi <= 0.0) return 0;
    // mixture of Poisson(lam_psi) and the same shifted by one
    if (rng.uniform() < lam_psi / (lam_psi + k))
      return 1 + rng.poisson(lam_psi);
    return rng.poisson(lam_psi);
  }
  // enumerate the conditional pmf with the series tail rule
  std::vector<double> lw;
  double acc = kNegInf;
  double prev = kNegInf;
  for (long m = 0; m < kMaxSeriesTerms; ++m) {
    double term = std::lgamma(m + k + 1.0) - std::lgamma(m + 1.0) +
                  m * log_psi_u + prior.log_qM(static_cast<int>(m) + k);
    lw.push_back(term);
    acc = special_math::log_sum_exp(acc, term);
    if (m > 0 && term < prev && term < acc + std::log(kTailTol))
      return rng.categorical_log(lw);
    prev = term;
  }
  throw std::runtime_error("sample_M_na: enumeration failed to converge");
}

std::vector<double> enumerate_M_na_pmf(const ComponentCountPrior& prior, int k,
                                       double log_psi_u, int max_m) {
  std::vector<double> lw(max_m + 1);
  for (int m = 0; m <= max_m; ++m)
    lw[m] = (log_psi_u == kNegInf && m > 0)
                ? kNegInf
                : std::lgamma(m + k + 1.0) - std::lgamma(m + 1.0) +
                      m * log_psi_u + prior.log_qM(m + k);
  double z = special_math::log_sum_exp(lw);
  std::vector<double> pmf(max_m + 1);
  for (int m = 0; m <= max_m; ++m) pmf[m] = std::exp(lw[m] - z);
  return pmf;
}

DynamicMDraw sample_M_dynamic(const ComponentCountPrior& prior, RngStream& rng,
                              double u, std::span<const int> cluster_sizes,
                              const WeightModel& weights, int M_max) {
  const int k = static_cast<int>(cluster_sizes.size());
  if (k < 1) throw std::domain_error("sample_M_dynamic: k must be >= 1");
  if (M_max < k) throw std::domain_error("sample_M_dynamic: M_max < k");
  std::vector<double> lw(M_max - k + 1);
  std::map<int, double> kappa_cache;
  for (int m = k; m <= M_max; ++m) {
    double w = std::lgamma(m + 1.0) - std::lgamma(m - k + 1.0) +
               (m - k) * weights.log_psi(u, m) + prior.log_qM(m);
    kappa_cache.clear();  // kappa depends on m
    for (int nj : cluster_sizes) {
      auto it = kappa_cache.find(nj);
      if (it == kappa_cache.end())
        it = kappa_cache.emplace(nj, weights.log_kappa(u, nj, m)).first;
      w += it->second;
    }
    lw[m - k] = w;
  }
  double z = special_math::log_sum_exp(lw);
  DynamicMDraw draw;
  draw.M = k + rng.categorical_log(lw);
  draw.mass_at_max = std::exp(lw.back() - z);
  return draw;
}

double mh_update_bnb_b_lambda(ComponentCountPrior& prior, RngStream& rng) {
  if (prior.family != CountFamily::BetaNegBinomial)
    throw std::domain_error("mh_update_bnb_b_lambda: prior is not BNB");
  auto log_target = [&](double b) {
    // Betaprime(a_p, b_p) prior times the Gamma(Lambda; a_lambda, b) likelihood
    return (prior.a_p - 1.0) * std::log(b) -
           (prior.a_p + prior.b_p) * std::log1p(b) +
           prior.a_lambda * std::log(b) - b * prior.lambda;
  };
  double b = prior.b_lambda;
  double proposal = b * std::exp(prior.mh_step * rng.normal());
  double log_accept =
      log_target(proposal) - log_target(b) + std::log(proposal) - std::log(b);
  if (std::log(rng.uniform()) < log_accept) prior.b_lambda = proposal;
  return prior.b_lambda;
}

std::pair<double, double> prop31_bounds(double u, int k, double lambda,
                                        double log_psi_u, double a_lambda,
                                        double b_lambda) {
  (void)u;
  if (k < 1) throw std::domain_error("prop31_bounds: k must be >= 1");
  double psi = std::exp(log_psi_u);
  double lp = lambda * psi;
  double conditional = lp * (1.0 + 1.0 / (lp + k));
  double marginal = psi * (a_lambda / b_lambda) * (1.0 + 1.0 / k);
  return {conditional, marginal};
}

}  // namespace mfmig
