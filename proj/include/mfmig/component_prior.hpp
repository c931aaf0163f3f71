#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mfmig/rng.hpp"
#include "mfmig/weight_model.hpp"

namespace mfmig {

enum class CountFamily { PoissonShifted, Geometric, BetaNegBinomial };

CountFamily count_family_from_string(const std::string& name);
std::string to_string(CountFamily family);

// Prior q_M on the number of components: M - 1 has support {0, 1, 2, ...}.
// The beta-negative-binomial case is kept hierarchical: Poisson(Lambda) with
// Lambda ~ Gamma(a_lambda, b_lambda) and b_lambda ~ Betaprime(a_p, b_p), so
// the Poisson closed forms apply conditionally on Lambda.
struct ComponentCountPrior {
  CountFamily family = CountFamily::PoissonShifted;
  double lambda = 1.0;      // current Lambda (Poisson / BNB)
  double a_lambda = 1.0;    // Gamma hyperprior on Lambda
  double b_lambda = 1.0;
  double a_p = 4.0;         // beta-prime hyperprior on b_lambda (BNB only)
  double b_p = 3.0;
  double geo_p = 0.1;       // geometric only, P(M-1 = j) = p (1-p)^j
  double mh_step = 0.5;     // log-normal step of the b_lambda MH update

  bool has_lambda() const { return family != CountFamily::Geometric; }
  // log q_M(m) for m >= 1, conditional on the current Lambda where relevant
  double log_qM(int m) const;
};

// log Psi(u, k) = log sum_{m>=0} ((m+k)!/m!) psi(u)^m q_M(m+k).
// Closed form for Poisson/BNB (given Lambda); adaptively truncated series
// otherwise.  log_psi_u = log psi(u) from the weight model.
double log_Psi(const ComponentCountPrior& prior, int k, double log_psi_u);

// Same series but forced through truncation regardless of family (oracle and
// cross-checking path).
double log_Psi_series(const ComponentCountPrior& prior, int k,
                      double log_psi_u);

// Gibbs draw of Lambda from p(Lambda | rest) propto Psi(u,k) p(Lambda);
// a two-component gamma mixture.  Updates prior.lambda and returns it.
double sample_Lambda(ComponentCountPrior& prior, RngStream& rng, int k,
                     double log_psi_u);

// Draw of M_na from P(M_na = m | rest) propto ((m+k)!/m!) psi^m q_M(m+k).
long sample_M_na(const ComponentCountPrior& prior, RngStream& rng, int k,
                 double log_psi_u);

// Enumerated pmf of M_na (normalized), for diagnostics and tests.
std::vector<double> enumerate_M_na_pmf(const ComponentCountPrior& prior, int k,
                                       double log_psi_u, int max_m);

struct DynamicMDraw {
  int M;
  double mass_at_max;  // posterior mass on M_max; > 1% suggests truncation
};

// Extended-telescoping draw of M over {k, ..., M_max} with
// log-weights log(m!/(m-k)!) + (m-k) log psi(u;m) + sum_j log kappa(u;n_j,m)
// + log q_M(m).
DynamicMDraw sample_M_dynamic(const ComponentCountPrior& prior, RngStream& rng,
                              double u, std::span<const int> cluster_sizes,
                              const WeightModel& weights, int M_max);

// One Metropolis-Hastings step on b_lambda under the beta-prime prior with a
// log-scale random walk.  Returns the (possibly unchanged) new value.
double mh_update_bnb_b_lambda(ComponentCountPrior& prior, RngStream& rng);

// Proposition-style upper bounds on P(M_na >= 1): conditional on Lambda and
// with Lambda marginalized over its gamma prior.
std::pair<double, double> prop31_bounds(double u, int k, double lambda,
                                        double log_psi_u, double a_lambda,
                                        double b_lambda);

}  // namespace mfmig
