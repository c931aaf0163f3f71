#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfmig/component_prior.hpp"
#include "mfmig/kernels.hpp"
#include "mfmig/rng.hpp"
#include "mfmig/sampler.hpp"
#include "mfmig/summaries.hpp"
#include "mfmig/weight_model.hpp"

namespace py = pybind11;
using namespace mfmig;

namespace {

py::dict trace_to_dict(const Trace& trace, bool with_labels) {
  py::dict out;
  const auto n = trace.draws.size();
  py::array_t<long> M(n), k(n), M_na(n);
  py::array_t<double> lambda(n), shape(n), U(n);
  auto Mv = M.mutable_unchecked<1>();
  auto kv = k.mutable_unchecked<1>();
  auto nav = M_na.mutable_unchecked<1>();
  auto lv = lambda.mutable_unchecked<1>();
  auto sv = shape.mutable_unchecked<1>();
  auto uv = U.mutable_unchecked<1>();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = trace.draws[i];
    Mv(i) = d.M;
    kv(i) = d.k;
    nav(i) = d.M_na;
    lv(i) = d.lambda;
    sv(i) = d.shape;
    uv(i) = d.U;
  }
  out["M"] = M;
  out["k"] = k;
  out["M_na"] = M_na;
  out["lam"] = lambda;
  out["shape"] = shape;
  out["U"] = U;
  out["seed"] = trace.seed;
  out["max_mass_at_m_max"] = trace.max_mass_at_Mmax;
  out["shape_accept_rate"] = trace.shape_accept_rate;
  if (with_labels && !trace.draws.empty() &&
      !trace.draws.front().labels.empty()) {
    const auto nn = trace.draws.front().labels.size();
    py::array_t<int> labels({n, nn});
    auto lab = labels.mutable_unchecked<2>();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < nn; ++j)
        lab(i, j) = trace.draws[i].labels[j];
    out["labels"] = labels;
  }
  return out;
}

std::unique_ptr<Kernel> kernel_for(const Eigen::MatrixXd& y) {
  if (y.cols() == 1) {
    std::vector<double> v(y.col(0).data(), y.col(0).data() + y.rows());
    return std::make_unique<UnivariateNormalKernel>(
        v, UnivariateNormalKernel::default_hypers(v));
  }
  return std::make_unique<MultivariateNormalKernel>(
      y, MultivariateNormalKernel::default_hypers(y));
}

py::list fit(const Eigen::MatrixXd& y, const std::string& weight_family,
             double shape, const std::string& count_prior, double lambda,
             double a_lambda, double b_lambda, double geo_p,
             const std::string& algorithm, long iterations, long burnin,
             int thin, int chains, std::uint64_t seed, int m_max, int init_m,
             bool fix_lambda, bool learn_shape, bool record_labels,
             int threads) {
  if (y.rows() < 2) throw std::invalid_argument("need at least two rows");
  if (iterations <= burnin)
    throw std::invalid_argument("iterations must exceed burnin");
  SamplerConfig cfg;
  cfg.algorithm = algorithm_from_string(algorithm);
  cfg.iterations = static_cast<int>(iterations - burnin);
  cfg.burnin = static_cast<int>(burnin);
  cfg.thin = thin;
  cfg.chains = chains;
  cfg.seed = seed;
  cfg.M_max = m_max;
  cfg.init_M = init_m;
  cfg.fix_lambda = fix_lambda;
  cfg.learn_shape = learn_shape;
  cfg.record_labels = record_labels;
  ComponentCountPrior prior;
  prior.family = count_family_from_string(count_prior);
  prior.lambda = lambda;
  prior.a_lambda = a_lambda;
  prior.b_lambda = b_lambda;
  prior.geo_p = geo_p;
  Sampler sampler(kernel_for(y),
                  WeightModel(weight_family_from_string(weight_family), shape),
                  prior, cfg);
  std::vector<Trace> traces;
  {
    py::gil_scoped_release release;
    traces = sampler.run(threads);
  }
  py::list out;
  for (const auto& t : traces) out.append(trace_to_dict(t, record_labels));
  return out;
}

py::array_t<double> gig_sample(double a, double b, double c, std::size_t n,
                               std::uint64_t seed) {
  RngStream rng(seed);
  py::array_t<double> out(n);
  auto v = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < n; ++i) v(i) = rng.gig({a, b, c});
  return out;
}

double ari(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("label vectors differ in length");
  return adjusted_rand_index(a, b);
}

}  // namespace

PYBIND11_MODULE(_mfmig, m) {
  m.doc() = "finite mixtures with normalized inverse Gaussian weights";

  m.def("fit", &fit, py::arg("y"), py::arg("weight_family") = "igau",
        py::arg("shape") = 1.0, py::arg("count_prior") = "poisson",
        py::arg("lam") = 1.0, py::arg("a_lambda") = 1.0,
        py::arg("b_lambda") = 1.0, py::arg("geo_p") = 0.1,
        py::arg("algorithm") = "blocked_gibbs", py::arg("iterations") = 1000,
        py::arg("burnin") = 0, py::arg("thin") = 1, py::arg("chains") = 1,
        py::arg("seed") = 1, py::arg("m_max") = 100, py::arg("init_m") = 10,
        py::arg("fix_lambda") = false, py::arg("learn_shape") = false,
        py::arg("record_labels") = true, py::arg("threads") = 1,
        "Run the sampler on an (n, d) array; returns one dict per chain");

  m.def("gig_sample", &gig_sample, py::arg("a"), py::arg("b"), py::arg("c"),
        py::arg("n"), py::arg("seed") = 1,
        "Draws from the generalized inverse Gaussian density "
        "s^(c-1) exp(-(a s + b/s)/2)");

  m.def("gini_match", &gini_match, py::arg("alpha"), py::arg("d") = 3,
        "Dirichlet shape with the same expected Gini index as the "
        "normalized inverse Gaussian with the given alpha");
  m.def("nigau_expected_gini", &nigau_expected_gini, py::arg("alpha"),
        py::arg("d"));
  m.def("dirichlet_expected_gini", &dirichlet_expected_gini, py::arg("gamma"),
        py::arg("d"));

  m.def("adjusted_rand_index", &ari, py::arg("a"), py::arg("b"));
}
