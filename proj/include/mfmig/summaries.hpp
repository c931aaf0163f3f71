#pragma once

#include <Eigen/Dense>
#include <map>
#include <span>
#include <vector>

#include "mfmig/sampler.hpp"

namespace mfmig {

double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

// posterior co-clustering probabilities P_ij = P(c_i = c_j | data), averaged
// over the recorded draws (which must carry labels)
Eigen::MatrixXd coclustering(const std::vector<TraceDraw>& draws, int n);

// index of the recorded draw whose partition minimizes the squared distance
// sum_{i<j} (1[c_i = c_j] - P_ij)^2; ties go to the earliest draw
int dahl_map_index(const std::vector<TraceDraw>& draws,
                   const Eigen::MatrixXd& coclust);

double modularity(const Eigen::MatrixXi& adj, std::span<const int> labels);

// posterior predictive density on a grid for the univariate normal kernel;
// draws must carry S and taus ({mu, sigma2} per component)
std::vector<double> density_grid(const std::vector<TraceDraw>& draws,
                                 std::span<const double> grid);

struct PosteriorTable {
  std::map<long, double> pmf;  // value -> posterior probability
  long mode = 0;               // smallest maximizer
  double mean = 0.0;
  double q05 = 0.0, q50 = 0.0, q95 = 0.0;  // type-1 sample quantiles
};

PosteriorTable posterior_table(std::span<const long> values);

// type-1 (inverse-cdf) sample quantile of an unsorted copy
double quantile_type1(std::vector<long> values, double p);

double prob_no_empty_components(const std::vector<TraceDraw>& draws);

// expected Gini index G(pi) = sum pi_i (1 - pi_i) under the symmetric
// normalized inverse Gaussian and Dirichlet laws on the d-simplex
double nigau_expected_gini(double alpha, int d);
double dirichlet_expected_gini(double gamma, int d);

// Dirichlet shape gamma whose expected Gini index equals that of the
// symmetric NIGau with the given alpha; bisection to 1e-8
double gini_match(double alpha, int d);

}  // namespace mfmig
