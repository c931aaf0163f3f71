#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mfmig/component_prior.hpp"
#include "mfmig/kernels.hpp"
#include "mfmig/rng.hpp"
#include "mfmig/weight_model.hpp"

namespace mfmig {

enum class Algorithm { BlockedGibbs, Telescoping };

Algorithm algorithm_from_string(const std::string& name);
std::string to_string(Algorithm algorithm);

struct SamplerConfig {
  Algorithm algorithm = Algorithm::BlockedGibbs;
  int iterations = 1000;
  int burnin = 0;
  int thin = 1;
  int chains = 1;
  std::uint64_t seed = 1;
  int M_max = 100;      // truncation of the telescoping M draw
  int init_M = 10;
  bool prior_only = false;   // drop the likelihood, target the prior
  bool fix_lambda = false;   // skip the Lambda update
  bool learn_shape = false;  // MH on the weight-model shape
  double shape_mh_step = 0.3;
  bool record_labels = true;
  bool record_S = false;
  bool record_taus = false;
};

struct TraceDraw {
  int M = 0;
  int k = 0;
  long M_na = 0;
  double lambda = 0.0;
  double b_lambda = 0.0;
  double shape = 0.0;
  double U = 0.0;
  std::vector<int> labels;
  std::vector<double> S;
  std::vector<std::vector<double>> taus;
};

struct Trace {
  std::vector<TraceDraw> draws;
  std::uint64_t seed = 0;
  // largest posterior mass the telescoping M draw placed on M_max; values
  // above about 0.01 suggest the truncation bites
  double max_mass_at_Mmax = 0.0;
  double shape_accept_rate = 0.0;
};

// Conditional blocked Gibbs sampler for mixtures of finite mixtures with
// unnormalized component weights.  Two sweep layouts: the static one, which
// draws the number of unallocated components in closed form, and the
// telescoping one, which draws the total number of components from a
// truncated discrete conditional and also covers the dynamic weight
// families.
class Sampler {
 public:
  Sampler(std::unique_ptr<Kernel> kernel, WeightModel weights,
          ComponentCountPrior prior, SamplerConfig config);

  const SamplerConfig& config() const { return config_; }

  Trace run_chain(int chain_index) const;
  // runs config.chains chains on up to `threads` worker threads; chain c
  // always uses substream c of the seed, so results do not depend on the
  // thread count
  std::vector<Trace> run(int threads = 1) const;

 private:
  struct ChainState {
    int M = 0;
    int k = 0;
    long M_na = 0;
    double U = 0.0;
    std::vector<int> labels;
    std::vector<double> S;
    std::vector<int> cluster_sizes;  // n_1..n_k
    WeightModel weights;
    ComponentCountPrior prior;
  };

  void init_state(ChainState& st, Kernel& kernel, RngStream& rng) const;
  void update_labels(ChainState& st, Kernel& kernel, RngStream& rng) const;
  // shared tail of both sweeps: allocated/unallocated S and tau draws
  void update_weights_and_params(ChainState& st, Kernel& kernel,
                                 RngStream& rng) const;
  bool shape_mh_step_static(ChainState& st, RngStream& rng) const;
  bool shape_mh_step_dynamic(ChainState& st, RngStream& rng) const;
  double sweep(ChainState& st, Kernel& kernel, RngStream& rng,
               bool* shape_accepted) const;

  std::unique_ptr<Kernel> kernel_;
  WeightModel weights_;
  ComponentCountPrior prior_;
  SamplerConfig config_;
};

// relabels `labels` in place to first-appearance order 0..k-1 and returns
// the permutation old_of_new (size M): new component j held old index
// old_of_new[j].  Unoccupied components keep their relative order after the
// occupied ones.
std::vector<int> compact_labels(std::vector<int>& labels, int M, int* k_out);

// log density of the F distribution with the given numerator/denominator
// degrees of freedom; prior of the learned weight-model shape
double log_f_density(double x, double d1, double d2);

}  // namespace mfmig
