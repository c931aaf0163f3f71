#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <span>

namespace mfmig {

// Parameters of the generalized inverse Gaussian distribution with density
//   p(s) propto s^{c-1} exp(-(a*s + b/s)/2),   s > 0,  a > 0, b > 0.
struct GigParams {
  double a;
  double b;
  double c;
};

// Seeded random stream.  The base generator is std::mt19937_64, which is
// fully specified by the standard, so identical seeds give identical variate
// sequences across runs and platforms.  Streams for parallel chains are
// derived with substream(), which maps (seed, index) through splitmix64 so
// that distinct chains get well-separated seeds.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  RngStream substream(std::uint64_t index) const;

  // uniform on (0, 1), never returns an endpoint
  double uniform();
  // standard normal, Marsaglia polar method
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // shape/rate parameterization, mean = shape/rate
  double gamma(double shape, double rate);
  // inverse gamma with shape a and scale b: 1/X with X ~ Gamma(a, rate = b)
  double inverse_gamma(double shape, double scale);
  double beta(double a, double b);
  long poisson(double mean);
  double gig(const GigParams& p);

  // index draw proportional to the given nonnegative weights
  int categorical(std::span<const double> weights);
  // index draw proportional to exp(log_weights), overflow-safe
  int categorical_log(std::span<const double> log_weights);

  Eigen::VectorXd mvnormal(const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& cov);
  // Wishart W(dof, scale) with mean dof * scale; Bartlett decomposition on
  // the lower-triangular Cholesky factor of scale.
  Eigen::MatrixXd wishart(double dof, const Eigen::MatrixXd& scale);
  Eigen::MatrixXd inverse_wishart(double dof, const Eigen::MatrixXd& scale);

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_;
  double spare_normal_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace mfmig
