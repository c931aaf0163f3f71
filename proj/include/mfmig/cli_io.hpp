#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "mfmig/component_prior.hpp"
#include "mfmig/sampler.hpp"
#include "mfmig/weight_model.hpp"

namespace mfmig {

enum class RunMode { Cluster, Density, Sbm };

RunMode run_mode_from_string(const std::string& name);
std::string to_string(RunMode mode);

// One experiment run: data source, model and sampler settings, output
// directory.  Parsed from a sectioned key = value file or from a previously
// written manifest.json, so a manifest reruns bit-identically.
struct RunConfig {
  RunMode mode = RunMode::Cluster;
  std::string data_path;
  bool data_has_header = false;
  std::string adjacency_format = "edges";  // "edges" or "dense"
  double sbm_a_q = 1.0, sbm_b_q = 1.0;

  std::string weight_family = "igau";
  double weight_shape = 1.0;

  std::string count_prior = "poisson";
  double lambda = 1.0;
  double a_lambda = 1.0, b_lambda = 1.0;
  double a_p = 4.0, b_p = 3.0;
  double geo_p = 0.1;
  bool fix_lambda = false;

  // total iterations including burn-in; must exceed burnin
  long iterations = 1000;
  long burnin = 0;
  int thin = 1;
  int chains = 1;
  std::uint64_t seed = 1;
  std::string algorithm = "blocked_gibbs";
  int M_max = 100;
  int init_M = 10;
  bool prior_only = false;
  bool learn_shape = false;
  double shape_mh_step = 0.3;
  bool record_S = false;
  bool record_taus = false;

  int grid_points = 512;
  std::string out_dir = "out";

  void validate() const;
  SamplerConfig sampler_config() const;
  ComponentCountPrior count_prior_spec() const;
};

// sectioned key = value text, '#' comments; keys are flattened to
// "section.key"
std::map<std::string, std::string> parse_ini(const std::string& path);

RunConfig load_run_config(const std::string& path);

Eigen::MatrixXd load_observations(const std::string& path, bool has_header);
// edge-list (1-based "i,j" rows, symmetrized) or dense 0/1 CSV
Eigen::MatrixXi load_adjacency(const std::string& path, bool dense);

// runs the configured experiment and writes trace.json, tables.csv,
// coclust.csv, map_partition.json, manifest.json, plus density.csv in
// density mode and modularity.txt in sbm mode
void run(const RunConfig& config, int threads);

// recomputes the summary artifacts from a saved trace.json
void summarize_trace(const std::string& trace_path,
                     const std::string& out_dir);

// evaluates the empty-component bounds draw by draw over a saved trace;
// returns lines of text that the CLI prints
std::vector<std::string> bounds_report(const std::string& trace_path);

// %.17g rendering used for all floating-point text output
std::string format_double(double v);

}  // namespace mfmig
