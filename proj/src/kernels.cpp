#include "mfmig/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfmig {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;

std::vector<int> members_of(std::span<const int> labels, int m) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i)
    if (labels[i] == m) out.push_back(i);
  return out;
}

template <typename T>
void apply_reorder(std::vector<T>& v, std::span<const int> old_of_new) {
  std::vector<T> next(old_of_new.size());
  for (std::size_t j = 0; j < old_of_new.size(); ++j)
    next[j] = v[old_of_new[j]];
  v = std::move(next);
}

}  // namespace

void Kernel::log_likelihood_all(int i, std::span<const int> labels,
                                std::span<double> out) const {
  for (std::size_t m = 0; m < out.size(); ++m)
    out[m] = log_likelihood(i, static_cast<int>(m), labels);
}

// ---------------------------------------------------------------------------
// UnivariateNormalKernel

UnivariateNormalKernel::Hypers UnivariateNormalKernel::default_hypers(
    std::span<const double> y) {
  auto [mn, mx] = std::minmax_element(y.begin(), y.end());
  double lo = *mn, hi = *mx;
  Hypers h;
  h.m0 = (hi + lo) / 2.0;
  h.c0 = 2.0;
  h.d0 = 0.2;
  h.D0 = 10.0 / ((hi + lo) * (hi + lo));
  h.w = 0.5;
  h.W = 50.0;
  // learned layers start at their prior means
  h.C0 = h.d0 / h.D0;
  h.eta_s = h.w / h.W;
  return h;
}

UnivariateNormalKernel::UnivariateNormalKernel(std::vector<double> y,
                                               Hypers hypers)
    : y_(std::move(y)), hypers_(hypers) {
  if (y_.empty()) throw std::invalid_argument("univariate kernel: empty data");
}

std::unique_ptr<Kernel> UnivariateNormalKernel::clone() const {
  return std::make_unique<UnivariateNormalKernel>(*this);
}

double UnivariateNormalKernel::log_likelihood(
    int i, int m, std::span<const int> /*labels*/) const {
  double d = y_[i] - mu_[m];
  return -0.5 * (kLog2Pi + std::log(sigma2_[m]) + d * d / sigma2_[m]);
}

void UnivariateNormalKernel::resize(int M, RngStream& rng) {
  int old = num_components();
  mu_.resize(M);
  sigma2_.resize(M);
  for (int m = old; m < M; ++m) sample_tau_prior(m, rng);
}

void UnivariateNormalKernel::reorder(std::span<const int> old_of_new) {
  apply_reorder(mu_, old_of_new);
  apply_reorder(sigma2_, old_of_new);
}

void UnivariateNormalKernel::sample_tau_posterior(int m, int /*k*/,
                                                  std::span<const int> labels,
                                                  RngStream& rng) {
  auto members = members_of(labels, m);
  const double n = static_cast<double>(members.size());
  if (members.empty()) throw std::logic_error("posterior draw: empty cluster");
  double sum = 0.0;
  for (int i : members) sum += y_[i];
  double ybar = sum / n;
  double ssd = 0.0;
  for (int i : members) ssd += (y_[i] - ybar) * (y_[i] - ybar);

  double eta_n = hypers_.eta_s + n;
  double m_n = (hypers_.eta_s * hypers_.m0 + sum) / eta_n;
  double c_n = hypers_.c0 + n / 2.0;
  double dm = ybar - hypers_.m0;
  double cc_n =
      hypers_.C0 + 0.5 * (ssd + hypers_.eta_s * n * dm * dm / eta_n);
  sigma2_[m] = rng.inverse_gamma(c_n, cc_n);
  mu_[m] = rng.normal(m_n, std::sqrt(sigma2_[m] / eta_n));
}

void UnivariateNormalKernel::sample_tau_prior(int m, RngStream& rng) {
  sigma2_[m] = rng.inverse_gamma(hypers_.c0, hypers_.C0);
  mu_[m] = rng.normal(hypers_.m0, std::sqrt(sigma2_[m] / hypers_.eta_s));
}

void UnivariateNormalKernel::update_hypers(RngStream& rng) {
  const int M = num_components();
  double inv_sum = 0.0, dev_sum = 0.0;
  for (int m = 0; m < M; ++m) {
    inv_sum += 1.0 / sigma2_[m];
    double d = mu_[m] - hypers_.m0;
    dev_sum += d * d / (2.0 * sigma2_[m]);
  }
  hypers_.C0 = rng.gamma(hypers_.d0 + M * hypers_.c0, hypers_.D0 + inv_sum);
  hypers_.eta_s = rng.gamma(hypers_.w + M / 2.0, hypers_.W + dev_sum);
}

std::vector<double> UnivariateNormalKernel::tau_flat(int m) const {
  return {mu_[m], sigma2_[m]};
}

// ---------------------------------------------------------------------------
// MultivariateNormalKernel

MultivariateNormalKernel::Hypers MultivariateNormalKernel::default_hypers(
    const Eigen::MatrixXd& y) {
  const int r = static_cast<int>(y.cols());
  Hypers h;
  h.b0.resize(r);
  Eigen::VectorXd range2(r);
  for (int j = 0; j < r; ++j) {
    std::vector<double> col(y.rows());
    for (int i = 0; i < y.rows(); ++i) col[i] = y(i, j);
    std::sort(col.begin(), col.end());
    std::size_t n = col.size();
    h.b0(j) = (n % 2 == 1) ? col[n / 2]
                           : 0.5 * (col[n / 2 - 1] + col[n / 2]);
    double range = col.back() - col.front();
    range2(j) = range * range;
  }
  h.B0 = range2.asDiagonal();
  h.c0 = 2.5 + (r - 1) / 2.0;
  h.g0 = 0.5 + (r - 1) / 2.0;
  h.G0 = (100.0 * h.g0 / h.c0) * range2.cwiseInverse().asDiagonal().toDenseMatrix();
  return h;
}

MultivariateNormalKernel::MultivariateNormalKernel(Eigen::MatrixXd y,
                                                   Hypers hypers)
    : y_(std::move(y)), hypers_(std::move(hypers)) {
  if (y_.rows() == 0)
    throw std::invalid_argument("multivariate kernel: empty data");
  const int r = static_cast<int>(y_.cols());
  // shape/rate Wishart convention: W(a, B) has mean a B^{-1} and standard
  // degrees of freedom 2a, so 2 c0 > r - 1 keeps every draw nonsingular
  if (2.0 * hypers_.c0 <= r - 1 || hypers_.g0 <= 0.0)
    throw std::invalid_argument(
        "multivariate kernel: need 2 c0 > r - 1 and g0 > 0");
  G0_inv_ = hypers_.G0.inverse();
  B0_inv_ = hypers_.B0.inverse();
  B0_inv_b0_ = B0_inv_ * hypers_.b0;
  C_ = hypers_.g0 * G0_inv_;  // prior mean of the middle layer
}

std::unique_ptr<Kernel> MultivariateNormalKernel::clone() const {
  return std::make_unique<MultivariateNormalKernel>(*this);
}

void MultivariateNormalKernel::refresh_cache(int m) {
  log_det_prec_[m] = std::log(prec_[m].determinant());
}

double MultivariateNormalKernel::log_likelihood(
    int i, int m, std::span<const int> /*labels*/) const {
  Eigen::VectorXd d = y_.row(i).transpose() - mu_[m];
  return -0.5 * (y_.cols() * kLog2Pi - log_det_prec_[m] +
                 d.dot(prec_[m] * d));
}

void MultivariateNormalKernel::resize(int M, RngStream& rng) {
  int old = num_components();
  mu_.resize(M);
  prec_.resize(M);
  log_det_prec_.resize(M);
  for (int m = old; m < M; ++m) sample_tau_prior(m, rng);
}

void MultivariateNormalKernel::reorder(std::span<const int> old_of_new) {
  apply_reorder(mu_, old_of_new);
  apply_reorder(prec_, old_of_new);
  apply_reorder(log_det_prec_, old_of_new);
}

void MultivariateNormalKernel::sample_tau_posterior(int m, int /*k*/,
                                                    std::span<const int> labels,
                                                    RngStream& rng) {
  auto members = members_of(labels, m);
  if (members.empty()) throw std::logic_error("posterior draw: empty cluster");
  const int r = static_cast<int>(y_.cols());
  const double n = static_cast<double>(members.size());

  // one (Sigma^{-1}, mu) sub-sweep
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(r, r);
  Eigen::VectorXd ysum = Eigen::VectorXd::Zero(r);
  for (int i : members) {
    Eigen::VectorXd d = y_.row(i).transpose() - mu_[m];
    scatter += d * d.transpose();
    ysum += y_.row(i).transpose();
  }
  prec_[m] = rng.wishart(2.0 * hypers_.c0 + n, (2.0 * C_ + scatter).inverse());

  Eigen::MatrixXd post_prec = B0_inv_ + n * prec_[m];
  Eigen::MatrixXd post_cov = post_prec.inverse();
  Eigen::VectorXd post_mean = post_cov * (B0_inv_b0_ + prec_[m] * ysum);
  mu_[m] = rng.mvnormal(post_mean, post_cov);
  refresh_cache(m);
}

void MultivariateNormalKernel::sample_tau_prior(int m, RngStream& rng) {
  mu_[m] = rng.mvnormal(hypers_.b0, hypers_.B0);
  prec_[m] = rng.wishart(2.0 * hypers_.c0, 0.5 * C_.inverse());
  refresh_cache(m);
}

void MultivariateNormalKernel::update_hypers(RngStream& rng) {
  const int M = num_components();
  Eigen::MatrixXd rate = hypers_.G0;
  for (int m = 0; m < M; ++m) rate += prec_[m];
  C_ = rng.wishart(2.0 * (hypers_.g0 + M * hypers_.c0),
                   (2.0 * rate).inverse());
}

std::vector<double> MultivariateNormalKernel::tau_flat(int m) const {
  const int r = static_cast<int>(y_.cols());
  std::vector<double> out;
  for (int j = 0; j < r; ++j) out.push_back(mu_[m](j));
  Eigen::MatrixXd sigma = prec_[m].inverse();
  for (int a = 0; a < r; ++a)
    for (int b = a; b < r; ++b) out.push_back(sigma(a, b));
  return out;
}

// ---------------------------------------------------------------------------
// SbmKernel

SbmKernel::SbmKernel(Eigen::MatrixXi adjacency, double a_q, double b_q)
    : adj_(std::move(adjacency)), a_q_(a_q), b_q_(b_q) {
  if (a_q_ <= 0.0 || b_q_ <= 0.0)
    throw std::invalid_argument("sbm kernel: need a_Q, b_Q > 0");
  if (adj_.rows() != adj_.cols())
    throw std::invalid_argument("sbm kernel: adjacency must be square");
  for (int i = 0; i < adj_.rows(); ++i) {
    if (adj_(i, i) != 0)
      throw std::invalid_argument("sbm kernel: self-loops are not allowed");
    for (int j = 0; j < adj_.cols(); ++j) {
      if (adj_(i, j) != adj_(j, i))
        throw std::invalid_argument("sbm kernel: adjacency must be symmetric");
      if (adj_(i, j) != 0 && adj_(i, j) != 1)
        throw std::invalid_argument("sbm kernel: entries must be 0/1");
    }
  }
}

std::unique_ptr<Kernel> SbmKernel::clone() const {
  return std::make_unique<SbmKernel>(*this);
}

void SbmKernel::set_q(int r, int s, double v) {
  q_(r, s) = v;
  q_(s, r) = v;
}

double SbmKernel::log_likelihood(int i, int m,
                                 std::span<const int> labels) const {
  const int n = data_size();
  double ll = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    double q = q_(m, labels[j]);
    ll += adj_(i, j) ? std::log(q) : std::log1p(-q);
  }
  return ll;
}

void SbmKernel::log_likelihood_all(int i, std::span<const int> labels,
                                   std::span<double> out) const {
  const int n = data_size();
  const int M = num_components();
  // per-block neighbor counts of node i
  std::vector<long> cnt(M, 0), edges(M, 0);
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    ++cnt[labels[j]];
    if (adj_(i, j)) ++edges[labels[j]];
  }
  for (int m = 0; m < static_cast<int>(out.size()); ++m) {
    double ll = 0.0;
    for (int s = 0; s < M; ++s) {
      if (cnt[s] == 0) continue;
      ll += edges[s] * std::log(q_(m, s)) +
            (cnt[s] - edges[s]) * std::log1p(-q_(m, s));
    }
    out[m] = ll;
  }
}

void SbmKernel::resize(int M, RngStream& rng) {
  int old = num_components();
  Eigen::MatrixXd next = Eigen::MatrixXd::Zero(M, M);
  int keep = std::min(old, M);
  next.topLeftCorner(keep, keep) = q_.topLeftCorner(keep, keep);
  q_ = std::move(next);
  for (int m = old; m < M; ++m) sample_tau_prior(m, rng);
}

void SbmKernel::reorder(std::span<const int> old_of_new) {
  const int M = static_cast<int>(old_of_new.size());
  Eigen::MatrixXd next(M, M);
  for (int r = 0; r < M; ++r)
    for (int s = 0; s < M; ++s)
      next(r, s) = q_(old_of_new[r], old_of_new[s]);
  q_ = std::move(next);
}

std::pair<long, long> SbmKernel::block_pair_stats(const Eigen::MatrixXi& adj,
                                                  std::span<const int> labels,
                                                  int r, int s) {
  const int n = static_cast<int>(adj.rows());
  long nr = 0, ns = 0, e = 0;
  for (int i = 0; i < n; ++i) {
    if (labels[i] == r) ++nr;
    if (labels[i] == s) ++ns;
  }
  for (int i = 0; i < n; ++i) {
    if (labels[i] != r) continue;
    for (int j = 0; j < n; ++j) {
      if (j == i || labels[j] != s) continue;
      if (adj(i, j)) ++e;
    }
  }
  long t;
  if (r == s) {
    e /= 2;  // each within-block edge counted twice
    t = nr * (nr - 1) / 2;
  } else {
    t = nr * ns;
  }
  return {e, t};
}

void SbmKernel::sample_tau_posterior(int m, int k, std::span<const int> labels,
                                     RngStream& rng) {
  for (int s = 0; s < k; ++s) {
    auto [e, t] = block_pair_stats(adj_, labels, m, s);
    set_q(m, s, rng.beta(a_q_ + e, b_q_ + t - e));
  }
}

void SbmKernel::sample_tau_prior(int m, RngStream& rng) {
  for (int s = 0; s < num_components(); ++s)
    set_q(m, s, rng.beta(a_q_, b_q_));
}

void SbmKernel::update_hypers(RngStream& /*rng*/) {}

std::vector<double> SbmKernel::tau_flat(int m) const {
  std::vector<double> out;
  for (int s = 0; s < num_components(); ++s) out.push_back(q_(m, s));
  return out;
}

}  // namespace mfmig
