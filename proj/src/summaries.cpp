#include "mfmig/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mfmig/special_math.hpp"

namespace mfmig {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;

long binom2(long n) { return n * (n - 1) / 2; }
}  // namespace

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  const int n = static_cast<int>(a.size());
  if (b.size() != a.size() || n < 2)
    throw std::invalid_argument("adjusted_rand_index: need two partitions");
  int ka = *std::max_element(a.begin(), a.end()) + 1;
  int kb = *std::max_element(b.begin(), b.end()) + 1;
  Eigen::MatrixXi table = Eigen::MatrixXi::Zero(ka, kb);
  for (int i = 0; i < n; ++i) ++table(a[i], b[i]);
  long sum_cells = 0, sum_rows = 0, sum_cols = 0;
  for (int r = 0; r < ka; ++r)
    for (int c = 0; c < kb; ++c) sum_cells += binom2(table(r, c));
  for (int r = 0; r < ka; ++r) sum_rows += binom2(table.row(r).sum());
  for (int c = 0; c < kb; ++c) sum_cols += binom2(table.col(c).sum());
  double total = static_cast<double>(binom2(n));
  double expected = sum_rows * (sum_cols / total);
  double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;  // both partitions are trivial
  return (sum_cells - expected) / (max_index - expected);
}

Eigen::MatrixXd coclustering(const std::vector<TraceDraw>& draws, int n) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  long used = 0;
  for (const auto& d : draws) {
    if (static_cast<int>(d.labels.size()) != n)
      throw std::invalid_argument("coclustering: draw without labels");
    ++used;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (d.labels[i] == d.labels[j]) {
          P(i, j) += 1.0;
          P(j, i) = P(i, j);
        }
  }
  if (used == 0) throw std::invalid_argument("coclustering: no draws");
  P /= static_cast<double>(used);
  for (int i = 0; i < n; ++i) P(i, i) = 1.0;
  return P;
}

int dahl_map_index(const std::vector<TraceDraw>& draws,
                   const Eigen::MatrixXd& coclust) {
  const int n = static_cast<int>(coclust.rows());
  int best = -1;
  double best_loss = std::numeric_limits<double>::infinity();
  for (int t = 0; t < static_cast<int>(draws.size()); ++t) {
    const auto& c = draws[t].labels;
    double loss = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double delta = (c[i] == c[j] ? 1.0 : 0.0) - coclust(i, j);
        loss += delta * delta;
      }
    if (loss < best_loss) {
      best_loss = loss;
      best = t;
    }
  }
  if (best < 0) throw std::invalid_argument("dahl_map_index: no draws");
  return best;
}

double modularity(const Eigen::MatrixXi& adj, std::span<const int> labels) {
  const int n = static_cast<int>(adj.rows());
  if (static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("modularity: label/adjacency size mismatch");
  double two_m = adj.cast<double>().sum();
  if (two_m <= 0.0) return 0.0;
  Eigen::VectorXd degree = adj.cast<double>().rowwise().sum();
  double q = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (labels[i] == labels[j])
        q += adj(i, j) - degree(i) * degree(j) / two_m;
  return q / two_m;
}

std::vector<double> density_grid(const std::vector<TraceDraw>& draws,
                                 std::span<const double> grid) {
  std::vector<double> dens(grid.size(), 0.0);
  long used = 0;
  for (const auto& d : draws) {
    if (d.S.empty() || d.taus.empty())
      throw std::invalid_argument("density_grid: draws lack S or taus");
    double T = std::accumulate(d.S.begin(), d.S.end(), 0.0);
    ++used;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      double f = 0.0;
      for (std::size_t m = 0; m < d.S.size(); ++m) {
        double mu = d.taus[m][0], s2 = d.taus[m][1];
        double z = grid[g] - mu;
        f += (d.S[m] / T) *
             std::exp(-0.5 * (kLog2Pi + std::log(s2) + z * z / s2));
      }
      dens[g] += f;
    }
  }
  if (used == 0) throw std::invalid_argument("density_grid: no draws");
  for (double& v : dens) v /= static_cast<double>(used);
  return dens;
}

double quantile_type1(std::vector<long> values, double p) {
  if (values.empty())
    throw std::invalid_argument("quantile_type1: empty sample");
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  auto idx = static_cast<std::size_t>(std::ceil(p * n));
  if (idx > 0) --idx;
  return static_cast<double>(values[std::min(idx, n - 1)]);
}

PosteriorTable posterior_table(std::span<const long> values) {
  if (values.empty())
    throw std::invalid_argument("posterior_table: empty sample");
  PosteriorTable t;
  std::map<long, long> counts;
  double sum = 0.0;
  for (long v : values) {
    ++counts[v];
    sum += static_cast<double>(v);
  }
  long best = 0;
  for (const auto& [v, c] : counts) {
    t.pmf[v] = static_cast<double>(c) / values.size();
    if (c > best) {
      best = c;
      t.mode = v;
    }
  }
  t.mean = sum / values.size();
  std::vector<long> copy(values.begin(), values.end());
  t.q05 = quantile_type1(copy, 0.05);
  t.q50 = quantile_type1(copy, 0.50);
  t.q95 = quantile_type1(copy, 0.95);
  return t;
}

double prob_no_empty_components(const std::vector<TraceDraw>& draws) {
  if (draws.empty())
    throw std::invalid_argument("prob_no_empty_components: no draws");
  long hits = 0;
  for (const auto& d : draws)
    if (d.M_na == 0) ++hits;
  return static_cast<double>(hits) / draws.size();
}

double nigau_expected_gini(double alpha, int d) {
  if (!(alpha > 0.0) || d < 2)
    throw std::invalid_argument("nigau_expected_gini: need alpha > 0, d >= 2");
  double x = d * alpha;
  double var = alpha * alpha * (d - 1) * std::exp(x) *
               special_math::upper_incomplete_gamma_neg2(x);
  return 1.0 - 1.0 / d - d * var;
}

double dirichlet_expected_gini(double gamma, int d) {
  if (!(gamma > 0.0) || d < 2)
    throw std::invalid_argument(
        "dirichlet_expected_gini: need gamma > 0, d >= 2");
  return (1.0 - 1.0 / d) * d * gamma / (d * gamma + 1.0);
}

double gini_match(double alpha, int d) {
  double target = nigau_expected_gini(alpha, d);
  double lo = 1e-6, hi = 1e3;
  if (dirichlet_expected_gini(lo, d) > target ||
      dirichlet_expected_gini(hi, d) < target)
    throw std::domain_error("gini_match: target outside bracket");
  while (hi - lo > 1e-8) {
    double mid = 0.5 * (lo + hi);
    if (dirichlet_expected_gini(mid, d) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace mfmig
