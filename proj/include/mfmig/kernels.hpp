#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "mfmig/rng.hpp"

namespace mfmig {

// Component likelihood family.  A kernel owns the data and the component
// parameters tau_1..tau_M; the sampler drives it through this interface.
// Labels are 0-based component indices.
class Kernel {
 public:
  virtual ~Kernel() = default;

  virtual std::unique_ptr<Kernel> clone() const = 0;
  virtual int data_size() const = 0;
  virtual int num_components() const = 0;

  virtual double log_likelihood(int i, int m,
                                std::span<const int> labels) const = 0;
  // log f(y_i | tau_m) for every m in one call; kernels may override with a
  // cheaper batch evaluation.
  virtual void log_likelihood_all(int i, std::span<const int> labels,
                                  std::span<double> out) const;

  // grow/shrink component storage to M; new components get prior draws
  virtual void resize(int M, RngStream& rng) = 0;
  // new component j takes the parameters of old component old_of_new[j]
  virtual void reorder(std::span<const int> old_of_new) = 0;

  virtual void sample_tau_posterior(int m, int k, std::span<const int> labels,
                                    RngStream& rng) = 0;
  virtual void sample_tau_prior(int m, RngStream& rng) = 0;
  virtual void update_hypers(RngStream& rng) = 0;

  // flat numeric view of tau_m, for trace recording
  virtual std::vector<double> tau_flat(int m) const = 0;
};

// Univariate normal kernel with normal-inverse-gamma prior
//   mu | sigma2 ~ N(m0, sigma2/eta_s),  sigma2 ~ IG(c0, C0),
// C0 ~ Gamma(d0, D0) and eta_s ~ Gamma(w, W) learned per sweep.
class UnivariateNormalKernel : public Kernel {
 public:
  struct Hypers {
    double m0, eta_s, c0, C0;
    double d0, D0, w, W;
  };

  // data-driven defaults: m0 = (max+min)/2, c0 = 2, d0 = 0.2,
  // D0 = 10/(max+min)^2, w = 0.5, W = 50
  static Hypers default_hypers(std::span<const double> y);

  UnivariateNormalKernel(std::vector<double> y, Hypers hypers);

  std::unique_ptr<Kernel> clone() const override;
  int data_size() const override { return static_cast<int>(y_.size()); }
  int num_components() const override { return static_cast<int>(mu_.size()); }
  double log_likelihood(int i, int m,
                        std::span<const int> labels) const override;
  void resize(int M, RngStream& rng) override;
  void reorder(std::span<const int> old_of_new) override;
  void sample_tau_posterior(int m, int k, std::span<const int> labels,
                            RngStream& rng) override;
  void sample_tau_prior(int m, RngStream& rng) override;
  void update_hypers(RngStream& rng) override;
  std::vector<double> tau_flat(int m) const override;  // {mu, sigma2}

  const Hypers& hypers() const { return hypers_; }
  double mu(int m) const { return mu_[m]; }
  double sigma2(int m) const { return sigma2_[m]; }

 private:
  std::vector<double> y_;
  Hypers hypers_;
  std::vector<double> mu_, sigma2_;
};

// Multivariate normal kernel with the hierarchical normal-inverse-Wishart
// prior mu ~ N(b0, B0), Sigma^{-1} | C ~ W(c0, C), C ~ W(g0, G0), where
// W(a, B) is the shape/rate Wishart with mean a B^{-1} (standard degrees of
// freedom 2a); the half-integer shapes of the usual data-driven defaults
// stay nonsingular in any dimension under this convention.
class MultivariateNormalKernel : public Kernel {
 public:
  struct Hypers {
    Eigen::VectorXd b0;
    Eigen::MatrixXd B0;
    double c0, g0;
    Eigen::MatrixXd G0;
  };

  // b0 = componentwise median, B0 = diag(R_j^2), c0 = 2.5 + (d-1)/2,
  // g0 = 0.5 + (d-1)/2, G0 = (100 g0/c0) diag(1/R_j^2)
  static Hypers default_hypers(const Eigen::MatrixXd& y);

  MultivariateNormalKernel(Eigen::MatrixXd y, Hypers hypers);

  std::unique_ptr<Kernel> clone() const override;
  int data_size() const override { return static_cast<int>(y_.rows()); }
  int num_components() const override { return static_cast<int>(mu_.size()); }
  double log_likelihood(int i, int m,
                        std::span<const int> labels) const override;
  void resize(int M, RngStream& rng) override;
  void reorder(std::span<const int> old_of_new) override;
  void sample_tau_posterior(int m, int k, std::span<const int> labels,
                            RngStream& rng) override;
  void sample_tau_prior(int m, RngStream& rng) override;
  void update_hypers(RngStream& rng) override;
  std::vector<double> tau_flat(int m) const override;

  const Eigen::VectorXd& mu(int m) const { return mu_[m]; }
  const Eigen::MatrixXd& precision(int m) const { return prec_[m]; }
  const Eigen::MatrixXd& latent_scale() const { return C_; }

 private:
  void refresh_cache(int m);

  Eigen::MatrixXd y_;  // n x r
  Hypers hypers_;
  Eigen::MatrixXd G0_inv_, B0_inv_;
  Eigen::VectorXd B0_inv_b0_;
  Eigen::MatrixXd C_;  // latent Wishart middle layer
  std::vector<Eigen::VectorXd> mu_;
  std::vector<Eigen::MatrixXd> prec_;
  std::vector<double> log_det_prec_;
};

// Bernoulli stochastic block model on a symmetric 0/1 adjacency matrix with
// zero diagonal.  Q_{rs} ~ Beta(a_Q, b_Q).
class SbmKernel : public Kernel {
 public:
  SbmKernel(Eigen::MatrixXi adjacency, double a_q, double b_q);

  std::unique_ptr<Kernel> clone() const override;
  int data_size() const override { return static_cast<int>(adj_.rows()); }
  int num_components() const override { return static_cast<int>(q_.rows()); }
  double log_likelihood(int i, int m,
                        std::span<const int> labels) const override;
  void log_likelihood_all(int i, std::span<const int> labels,
                          std::span<double> out) const override;
  void resize(int M, RngStream& rng) override;
  void reorder(std::span<const int> old_of_new) override;
  void sample_tau_posterior(int m, int k, std::span<const int> labels,
                            RngStream& rng) override;
  void sample_tau_prior(int m, RngStream& rng) override;
  void update_hypers(RngStream& rng) override;
  std::vector<double> tau_flat(int m) const override;  // row m of Q

  const Eigen::MatrixXd& block_matrix() const { return q_; }
  const Eigen::MatrixXi& adjacency() const { return adj_; }

  // edge count e_rs and dyad count t_rs between blocks r and s, recomputed
  // from scratch
  static std::pair<long, long> block_pair_stats(const Eigen::MatrixXi& adj,
                                                std::span<const int> labels,
                                                int r, int s);

 private:
  void set_q(int r, int s, double v);

  Eigen::MatrixXi adj_;
  double a_q_, b_q_;
  Eigen::MatrixXd q_;
};

}  // namespace mfmig
