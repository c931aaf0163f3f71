#include "mfmig/sampler.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace mfmig {

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "blocked_gibbs") return Algorithm::BlockedGibbs;
  if (name == "telescoping") return Algorithm::Telescoping;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::string to_string(Algorithm algorithm) {
  return algorithm == Algorithm::BlockedGibbs ? "blocked_gibbs"
                                              : "telescoping";
}

std::vector<int> compact_labels(std::vector<int>& labels, int M, int* k_out) {
  std::vector<int> new_of_old(M, -1);
  std::vector<int> old_of_new;
  old_of_new.reserve(M);
  for (int& c : labels) {
    if (new_of_old[c] < 0) {
      new_of_old[c] = static_cast<int>(old_of_new.size());
      old_of_new.push_back(c);
    }
    c = new_of_old[c];
  }
  int k = static_cast<int>(old_of_new.size());
  for (int m = 0; m < M; ++m)
    if (new_of_old[m] < 0) old_of_new.push_back(m);
  if (k_out) *k_out = k;
  return old_of_new;
}

double log_f_density(double x, double d1, double d2) {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return std::lgamma((d1 + d2) / 2) - std::lgamma(d1 / 2) -
         std::lgamma(d2 / 2) + (d1 / 2) * std::log(d1 / d2) +
         (d1 / 2 - 1.0) * std::log(x) -
         ((d1 + d2) / 2) * std::log1p(d1 * x / d2);
}

Sampler::Sampler(std::unique_ptr<Kernel> kernel, WeightModel weights,
                 ComponentCountPrior prior, SamplerConfig config)
    : kernel_(std::move(kernel)),
      weights_(weights),
      prior_(prior),
      config_(config) {
  if (!kernel_) throw std::invalid_argument("Sampler: null kernel");
  if (config_.iterations < 1 || config_.burnin < 0 || config_.thin < 1 ||
      config_.chains < 1 || config_.init_M < 1 || config_.M_max < 1)
    throw std::invalid_argument("Sampler: bad run configuration");
  if (config_.algorithm == Algorithm::BlockedGibbs && weights_.is_dynamic())
    throw std::invalid_argument(
        "Sampler: dynamic weight families need the telescoping algorithm");
}

void Sampler::init_state(ChainState& st, Kernel& kernel,
                         RngStream& rng) const {
  const int n = kernel.data_size();
  st.weights = weights_;
  st.prior = prior_;
  st.M = config_.init_M;
  st.labels.resize(n);
  for (int i = 0; i < n; ++i)
    st.labels[i] = static_cast<int>(rng.uniform() * st.M);
  compact_labels(st.labels, st.M, &st.k);
  st.M_na = st.M - st.k;
  st.cluster_sizes.assign(st.k, 0);
  for (int c : st.labels) ++st.cluster_sizes[c];

  st.S.resize(st.M);
  for (int m = 0; m < st.M; ++m)
    st.S[m] = st.weights.sample_unallocated(rng, 0.0, st.M);
  kernel.resize(st.M, rng);
  for (int m = 0; m < st.M; ++m) {
    if (m < st.k && !config_.prior_only)
      kernel.sample_tau_posterior(m, st.k, st.labels, rng);
    else
      kernel.sample_tau_prior(m, rng);
  }
  double T = std::accumulate(st.S.begin(), st.S.end(), 0.0);
  st.U = n / T;
  if (st.prior.has_lambda() && !config_.fix_lambda)
    st.prior.lambda = st.prior.a_lambda / st.prior.b_lambda;
}

void Sampler::update_labels(ChainState& st, Kernel& kernel,
                            RngStream& rng) const {
  const int n = kernel.data_size();
  std::vector<double> lw(st.M), ll(st.M);
  for (int i = 0; i < n; ++i) {
    if (config_.prior_only) {
      for (int m = 0; m < st.M; ++m) lw[m] = std::log(st.S[m]);
    } else {
      kernel.log_likelihood_all(i, st.labels, ll);
      for (int m = 0; m < st.M; ++m) lw[m] = std::log(st.S[m]) + ll[m];
    }
    st.labels[i] = rng.categorical_log(lw);
  }
  auto old_of_new = compact_labels(st.labels, st.M, &st.k);
  kernel.reorder(old_of_new);
  std::vector<double> s_next(st.M);
  for (int m = 0; m < st.M; ++m) s_next[m] = st.S[old_of_new[m]];
  st.S = std::move(s_next);
  st.cluster_sizes.assign(st.k, 0);
  for (int c : st.labels) ++st.cluster_sizes[c];
}

void Sampler::update_weights_and_params(ChainState& st, Kernel& kernel,
                                        RngStream& rng) const {
  kernel.resize(st.M, rng);
  st.S.resize(st.M);
  for (int m = 0; m < st.k; ++m) {
    st.S[m] =
        st.weights.sample_allocated(rng, st.U, st.cluster_sizes[m], st.M);
    if (config_.prior_only)
      kernel.sample_tau_prior(m, rng);
    else
      kernel.sample_tau_posterior(m, st.k, st.labels, rng);
  }
  for (int m = st.k; m < st.M; ++m) {
    st.S[m] = st.weights.sample_unallocated(rng, st.U, st.M);
    kernel.sample_tau_prior(m, rng);
  }
  kernel.update_hypers(rng);
}

bool Sampler::shape_mh_step_static(ChainState& st, RngStream& rng) const {
  auto log_target = [&](const WeightModel& w) {
    double t = log_Psi(st.prior, st.k, w.log_psi(st.U)) +
               log_f_density(w.shape(), 6.0, 3.0);
    for (int nj : st.cluster_sizes) t += w.log_kappa(st.U, nj);
    return t;
  };
  double a = st.weights.shape();
  double proposal = a * std::exp(config_.shape_mh_step * rng.normal());
  WeightModel cand = st.weights.with_shape(proposal);
  double log_accept = log_target(cand) - log_target(st.weights) +
                      std::log(proposal) - std::log(a);
  if (std::log(rng.uniform()) < log_accept) {
    st.weights = cand;
    return true;
  }
  return false;
}

bool Sampler::shape_mh_step_dynamic(ChainState& st, RngStream& rng) const {
  auto log_target = [&](const WeightModel& w) {
    double t = (st.M - st.k) * w.log_psi(st.U, st.M) +
               log_f_density(w.shape(), 6.0, 3.0);
    for (int nj : st.cluster_sizes) t += w.log_kappa(st.U, nj, st.M);
    return t;
  };
  double a = st.weights.shape();
  double proposal = a * std::exp(config_.shape_mh_step * rng.normal());
  WeightModel cand = st.weights.with_shape(proposal);
  double log_accept = log_target(cand) - log_target(st.weights) +
                      std::log(proposal) - std::log(a);
  if (std::log(rng.uniform()) < log_accept) {
    st.weights = cand;
    return true;
  }
  return false;
}

double Sampler::sweep(ChainState& st, Kernel& kernel, RngStream& rng,
                      bool* shape_accepted) const {
  const int n = kernel.data_size();
  double T = std::accumulate(st.S.begin(), st.S.end(), 0.0);
  st.U = rng.gamma(static_cast<double>(n), T);

  update_labels(st, kernel, rng);

  double mass_at_max = 0.0;
  if (config_.algorithm == Algorithm::BlockedGibbs) {
    double log_psi_u = st.weights.log_psi(st.U);
    if (st.prior.has_lambda() && !config_.fix_lambda) {
      sample_Lambda(st.prior, rng, st.k, log_psi_u);
      if (st.prior.family == CountFamily::BetaNegBinomial)
        mh_update_bnb_b_lambda(st.prior, rng);
    }
    if (config_.learn_shape && shape_accepted)
      *shape_accepted = shape_mh_step_static(st, rng);
    st.M_na = sample_M_na(st.prior, rng, st.k, st.weights.log_psi(st.U));
    st.M = st.k + static_cast<int>(st.M_na);
  } else {
    if (st.prior.has_lambda() && !config_.fix_lambda) {
      st.prior.lambda = rng.gamma(st.prior.a_lambda + st.M - 1,
                                  st.prior.b_lambda + 1.0);
      if (st.prior.family == CountFamily::BetaNegBinomial)
        mh_update_bnb_b_lambda(st.prior, rng);
    }
    if (config_.learn_shape && shape_accepted)
      *shape_accepted = shape_mh_step_dynamic(st, rng);
    auto draw = sample_M_dynamic(st.prior, rng, st.U, st.cluster_sizes,
                                 st.weights, config_.M_max);
    st.M = draw.M;
    st.M_na = st.M - st.k;
    mass_at_max = draw.mass_at_max;
  }

  update_weights_and_params(st, kernel, rng);
  return mass_at_max;
}

Trace Sampler::run_chain(int chain_index) const {
  RngStream base(config_.seed);
  RngStream rng = base.substream(static_cast<std::uint64_t>(chain_index));
  auto kernel = kernel_->clone();
  ChainState st{.weights = weights_, .prior = prior_};
  init_state(st, *kernel, rng);

  Trace trace;
  trace.seed = rng.seed();
  long shape_tries = 0, shape_accepts = 0;
  const int total = config_.burnin + config_.iterations;
  for (int it = 0; it < total; ++it) {
    bool accepted = false;
    double mass = sweep(st, *kernel, rng, &accepted);
    trace.max_mass_at_Mmax = std::max(trace.max_mass_at_Mmax, mass);
    if (config_.learn_shape) {
      ++shape_tries;
      if (accepted) ++shape_accepts;
    }
    if (it < config_.burnin) continue;
    if ((it - config_.burnin) % config_.thin != 0) continue;

    TraceDraw d;
    d.M = st.M;
    d.k = st.k;
    d.M_na = st.M_na;
    d.lambda = st.prior.has_lambda() ? st.prior.lambda : 0.0;
    d.b_lambda = st.prior.b_lambda;
    d.shape = st.weights.shape();
    d.U = st.U;
    if (config_.record_labels) d.labels = st.labels;
    if (config_.record_S) d.S = st.S;
    if (config_.record_taus) {
      d.taus.resize(st.M);
      for (int m = 0; m < st.M; ++m) d.taus[m] = kernel->tau_flat(m);
    }
    trace.draws.push_back(std::move(d));
  }
  if (shape_tries > 0)
    trace.shape_accept_rate =
        static_cast<double>(shape_accepts) / shape_tries;
  return trace;
}

std::vector<Trace> Sampler::run(int threads) const {
  const int chains = config_.chains;
  std::vector<Trace> traces(chains);
  int workers = std::max(1, std::min(threads, chains));
  if (workers == 1) {
    for (int c = 0; c < chains; ++c) traces[c] = run_chain(c);
    return traces;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int c = next.fetch_add(1); c < chains; c = next.fetch_add(1))
        traces[c] = run_chain(c);
    });
  }
  for (auto& t : pool) t.join();
  return traces;
}

}  // namespace mfmig
