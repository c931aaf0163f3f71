#include "mfmig/cli_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mfmig/summaries.hpp"

namespace mfmig {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("not a boolean: " + v);
}

class KeyReader {
 public:
  explicit KeyReader(const std::map<std::string, std::string>& kv) : kv_(kv) {}

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string str(const std::string& key, const std::string& fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.insert(key);
    return it->second;
  }
  double num(const std::string& key, double fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.insert(key);
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size())
      throw std::invalid_argument("bad numeric value for " + key + ": " +
                                  it->second);
    return v;
  }
  long integer(const std::string& key, long fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.insert(key);
    std::size_t pos = 0;
    long v = std::stol(it->second, &pos);
    if (pos != it->second.size())
      throw std::invalid_argument("bad integer value for " + key + ": " +
                                  it->second);
    return v;
  }
  bool flag(const std::string& key, bool fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.insert(key);
    return parse_bool(it->second);
  }
  void reject_unknown() const {
    for (const auto& [k, v] : kv_)
      if (!used_.count(k))
        throw std::invalid_argument("unknown config key: " + k);
  }

 private:
  const std::map<std::string, std::string>& kv_;
  std::set<std::string> used_;
};

json config_to_json(const RunConfig& c) {
  json j;
  j["mode"] = to_string(c.mode);
  j["data"] = c.data_path;
  j["header"] = c.data_has_header;
  j["adjacency_format"] = c.adjacency_format;
  j["sbm_a_q"] = c.sbm_a_q;
  j["sbm_b_q"] = c.sbm_b_q;
  j["weight_family"] = c.weight_family;
  j["weight_shape"] = c.weight_shape;
  j["count_prior"] = c.count_prior;
  j["lambda"] = c.lambda;
  j["a_lambda"] = c.a_lambda;
  j["b_lambda"] = c.b_lambda;
  j["a_p"] = c.a_p;
  j["b_p"] = c.b_p;
  j["geo_p"] = c.geo_p;
  j["fix_lambda"] = c.fix_lambda;
  j["iterations"] = c.iterations;
  j["burnin"] = c.burnin;
  j["thin"] = c.thin;
  j["chains"] = c.chains;
  j["seed"] = c.seed;
  j["algorithm"] = c.algorithm;
  j["m_max"] = c.M_max;
  j["init_m"] = c.init_M;
  j["prior_only"] = c.prior_only;
  j["learn_shape"] = c.learn_shape;
  j["shape_mh_step"] = c.shape_mh_step;
  j["record_s"] = c.record_S;
  j["record_taus"] = c.record_taus;
  j["grid_points"] = c.grid_points;
  j["out"] = c.out_dir;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.mode = run_mode_from_string(j.at("mode").get<std::string>());
  c.data_path = j.at("data").get<std::string>();
  c.data_has_header = j.at("header").get<bool>();
  c.adjacency_format = j.at("adjacency_format").get<std::string>();
  c.sbm_a_q = j.at("sbm_a_q").get<double>();
  c.sbm_b_q = j.at("sbm_b_q").get<double>();
  c.weight_family = j.at("weight_family").get<std::string>();
  c.weight_shape = j.at("weight_shape").get<double>();
  c.count_prior = j.at("count_prior").get<std::string>();
  c.lambda = j.at("lambda").get<double>();
  c.a_lambda = j.at("a_lambda").get<double>();
  c.b_lambda = j.at("b_lambda").get<double>();
  c.a_p = j.at("a_p").get<double>();
  c.b_p = j.at("b_p").get<double>();
  c.geo_p = j.at("geo_p").get<double>();
  c.fix_lambda = j.at("fix_lambda").get<bool>();
  c.iterations = j.at("iterations").get<long>();
  c.burnin = j.at("burnin").get<long>();
  c.thin = j.at("thin").get<int>();
  c.chains = j.at("chains").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.algorithm = j.at("algorithm").get<std::string>();
  c.M_max = j.at("m_max").get<int>();
  c.init_M = j.at("init_m").get<int>();
  c.prior_only = j.at("prior_only").get<bool>();
  c.learn_shape = j.at("learn_shape").get<bool>();
  c.shape_mh_step = j.at("shape_mh_step").get<double>();
  c.record_S = j.at("record_s").get<bool>();
  c.record_taus = j.at("record_taus").get<bool>();
  c.grid_points = j.at("grid_points").get<int>();
  c.out_dir = j.at("out").get<std::string>();
  return c;
}

json draw_to_json(const TraceDraw& d) {
  json j;
  j["M"] = d.M;
  j["k"] = d.k;
  j["M_na"] = d.M_na;
  j["lambda"] = d.lambda;
  j["b_lambda"] = d.b_lambda;
  j["shape"] = d.shape;
  j["U"] = d.U;
  if (!d.labels.empty()) j["labels"] = d.labels;
  if (!d.S.empty()) j["S"] = d.S;
  if (!d.taus.empty()) j["taus"] = d.taus;
  return j;
}

TraceDraw draw_from_json(const json& j) {
  TraceDraw d;
  d.M = j.at("M").get<int>();
  d.k = j.at("k").get<int>();
  d.M_na = j.at("M_na").get<long>();
  d.lambda = j.at("lambda").get<double>();
  d.b_lambda = j.at("b_lambda").get<double>();
  d.shape = j.at("shape").get<double>();
  d.U = j.at("U").get<double>();
  if (j.contains("labels")) d.labels = j.at("labels").get<std::vector<int>>();
  if (j.contains("S")) d.S = j.at("S").get<std::vector<double>>();
  if (j.contains("taus"))
    d.taus = j.at("taus").get<std::vector<std::vector<double>>>();
  return d;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::vector<TraceDraw> pool_draws(const std::vector<Trace>& traces) {
  std::vector<TraceDraw> pooled;
  for (const auto& t : traces)
    pooled.insert(pooled.end(), t.draws.begin(), t.draws.end());
  return pooled;
}

void append_table(std::ostringstream& out, const std::string& quantity,
                  const PosteriorTable& t) {
  out << quantity << ",mean," << format_double(t.mean) << "\n";
  out << quantity << ",mode," << t.mode << "\n";
  out << quantity << ",q05," << format_double(t.q05) << "\n";
  out << quantity << ",q50," << format_double(t.q50) << "\n";
  out << quantity << ",q95," << format_double(t.q95) << "\n";
  for (const auto& [v, p] : t.pmf)
    out << quantity << ",p@" << v << "," << format_double(p) << "\n";
}

// summary artifacts shared by `fit` and `summarize`
void write_summary_artifacts(const RunConfig& config,
                             const std::vector<TraceDraw>& pooled,
                             const std::filesystem::path& out) {
  if (pooled.empty()) throw std::runtime_error("summaries: no retained draws");

  std::vector<long> Ms, ks, Mnas;
  for (const auto& d : pooled) {
    Ms.push_back(d.M);
    ks.push_back(d.k);
    Mnas.push_back(d.M_na);
  }
  std::ostringstream tables;
  tables << "quantity,stat,value\n";
  append_table(tables, "M", posterior_table(Ms));
  append_table(tables, "k", posterior_table(ks));
  append_table(tables, "M_na", posterior_table(Mnas));
  tables << "M_na,p_zero," << format_double(prob_no_empty_components(pooled))
         << "\n";
  write_text_file(out / "tables.csv", tables.str());

  const int n = static_cast<int>(pooled.front().labels.size());
  if (n == 0) return;  // labels were not recorded, partition outputs skipped
  Eigen::MatrixXd P = coclustering(pooled, n);
  std::ostringstream cc;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      cc << (j ? "," : "") << format_double(P(i, j));
    cc << "\n";
  }
  write_text_file(out / "coclust.csv", cc.str());

  int map_idx = dahl_map_index(pooled, P);
  json map_j;
  map_j["draw_index"] = map_idx;
  map_j["k"] = pooled[map_idx].k;
  map_j["labels"] = pooled[map_idx].labels;
  write_text_file(out / "map_partition.json", map_j.dump(2) + "\n");

  if (config.mode == RunMode::Density) {
    Eigen::MatrixXd obs =
        load_observations(config.data_path, config.data_has_header);
    double lo = obs.col(0).minCoeff(), hi = obs.col(0).maxCoeff();
    double pad = (hi - lo) / 10.0;
    std::vector<double> grid(config.grid_points);
    for (int g = 0; g < config.grid_points; ++g)
      grid[g] = (lo - pad) +
                (hi + pad - (lo - pad)) * g / (config.grid_points - 1.0);
    auto dens = density_grid(pooled, grid);
    std::ostringstream ds;
    ds << "x,density\n";
    for (std::size_t g = 0; g < grid.size(); ++g)
      ds << format_double(grid[g]) << "," << format_double(dens[g]) << "\n";
    write_text_file(out / "density.csv", ds.str());
  }

  if (config.mode == RunMode::Sbm) {
    Eigen::MatrixXi adj = load_adjacency(config.data_path,
                                         config.adjacency_format == "dense");
    double q = modularity(adj, pooled[map_idx].labels);
    write_text_file(out / "modularity.txt", format_double(q) + "\n");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunMode run_mode_from_string(const std::string& name) {
  if (name == "cluster") return RunMode::Cluster;
  if (name == "density") return RunMode::Density;
  if (name == "sbm") return RunMode::Sbm;
  throw std::invalid_argument("unknown run mode: " + name);
}

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Cluster: return "cluster";
    case RunMode::Density: return "density";
    case RunMode::Sbm: return "sbm";
  }
  return "?";
}

void RunConfig::validate() const {
  if (data_path.empty()) throw std::invalid_argument("config: data missing");
  if (!(iterations > burnin) || burnin < 0)
    throw std::invalid_argument("config: need iterations > burnin >= 0");
  if (thin < 1 || chains < 1)
    throw std::invalid_argument("config: need thin >= 1, chains >= 1");
  if (adjacency_format != "edges" && adjacency_format != "dense")
    throw std::invalid_argument("config: adjacency_format must be edges|dense");
  run_mode_from_string(to_string(mode));
  weight_family_from_string(weight_family);
  count_family_from_string(count_prior);
  algorithm_from_string(algorithm);
}

SamplerConfig RunConfig::sampler_config() const {
  SamplerConfig s;
  s.algorithm = algorithm_from_string(algorithm);
  s.iterations = static_cast<int>(iterations - burnin);
  s.burnin = static_cast<int>(burnin);
  s.thin = thin;
  s.chains = chains;
  s.seed = seed;
  s.M_max = M_max;
  s.init_M = init_M;
  s.prior_only = prior_only;
  s.fix_lambda = fix_lambda;
  s.learn_shape = learn_shape;
  s.shape_mh_step = shape_mh_step;
  s.record_labels = true;
  s.record_S = record_S || mode == RunMode::Density;
  s.record_taus = record_taus || mode == RunMode::Density;
  return s;
}

ComponentCountPrior RunConfig::count_prior_spec() const {
  ComponentCountPrior p;
  p.family = count_family_from_string(count_prior);
  p.lambda = lambda;
  p.a_lambda = a_lambda;
  p.b_lambda = b_lambda;
  p.a_p = a_p;
  p.b_p = b_p;
  p.geo_p = geo_p;
  return p;
}

std::map<std::string, std::string> parse_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::map<std::string, std::string> kv;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": empty key");
    kv[section.empty() ? key : section + "." + key] = value;
  }
  return kv;
}

RunConfig load_run_config(const std::string& path) {
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
    return config_from_json(load_json_file(path));

  auto kv = parse_ini(path);
  KeyReader r(kv);
  RunConfig c;
  c.mode = run_mode_from_string(r.str("run.mode", "cluster"));
  c.data_path = r.str("run.data", "");
  c.data_has_header = r.flag("run.header", false);
  c.adjacency_format = r.str("run.adjacency_format", "edges");
  c.sbm_a_q = r.num("run.sbm_a_q", 1.0);
  c.sbm_b_q = r.num("run.sbm_b_q", 1.0);
  c.grid_points = static_cast<int>(r.integer("run.grid_points", 512));
  c.out_dir = r.str("run.out", "out");

  c.weight_family = r.str("weights.family", "igau");
  c.weight_shape = r.num("weights.shape", 1.0);
  c.learn_shape = r.flag("weights.learn_shape", false);
  c.shape_mh_step = r.num("weights.shape_mh_step", 0.3);

  c.count_prior = r.str("prior.family", "poisson");
  c.lambda = r.num("prior.lambda", 1.0);
  c.a_lambda = r.num("prior.a_lambda", 1.0);
  c.b_lambda = r.num("prior.b_lambda", 1.0);
  c.a_p = r.num("prior.a_p", 4.0);
  c.b_p = r.num("prior.b_p", 3.0);
  c.geo_p = r.num("prior.geo_p", 0.1);
  c.fix_lambda = r.flag("prior.fix_lambda", false);

  c.algorithm = r.str("sampler.algorithm", "blocked_gibbs");
  c.iterations = r.integer("sampler.iterations", 1000);
  c.burnin = r.integer("sampler.burnin", 0);
  c.thin = static_cast<int>(r.integer("sampler.thin", 1));
  c.chains = static_cast<int>(r.integer("sampler.chains", 1));
  c.seed = static_cast<std::uint64_t>(r.integer("sampler.seed", 1));
  c.M_max = static_cast<int>(r.integer("sampler.m_max", 100));
  c.init_M = static_cast<int>(r.integer("sampler.init_m", 10));
  c.prior_only = r.flag("sampler.prior_only", false);
  c.record_S = r.flag("sampler.record_s", false);
  c.record_taus = r.flag("sampler.record_taus", false);
  r.reject_unknown();
  return c;
}

Eigen::MatrixXd load_observations(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (has_header && lineno == 1) continue;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      field = trim(field);
      std::size_t pos = 0;
      double v;
      try {
        v = std::stod(field, &pos);
      } catch (const std::exception&) {
        pos = std::string::npos;
      }
      if (pos != field.size() || !std::isfinite(v))
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": bad numeric field '" + field + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      m(i, j) = rows[i][j];
  return m;
}

Eigen::MatrixXi load_adjacency(const std::string& path, bool dense) {
  Eigen::MatrixXd raw = load_observations(path, false);
  if (dense) {
    if (raw.rows() != raw.cols())
      throw std::runtime_error(path + ": dense adjacency must be square");
    Eigen::MatrixXi adj(raw.rows(), raw.cols());
    for (int i = 0; i < raw.rows(); ++i)
      for (int j = 0; j < raw.cols(); ++j) {
        if (raw(i, j) != 0.0 && raw(i, j) != 1.0)
          throw std::runtime_error(path + ": adjacency entries must be 0/1");
        adj(i, j) = static_cast<int>(raw(i, j));
      }
    for (int i = 0; i < adj.rows(); ++i) {
      if (adj(i, i) != 0)
        throw std::runtime_error(path + ": self-loops are not allowed");
      for (int j = i + 1; j < adj.cols(); ++j)
        if (adj(i, j) != adj(j, i))
          throw std::runtime_error(path +
                                   ": dense adjacency must be symmetric");
    }
    return adj;
  }
  if (raw.cols() != 2)
    throw std::runtime_error(path + ": edge list needs two columns");
  int n = 0;
  for (int e = 0; e < raw.rows(); ++e) {
    for (int c = 0; c < 2; ++c) {
      double v = raw(e, c);
      if (v != std::floor(v) || v < 1)
        throw std::runtime_error(path + ": edge endpoints must be >= 1");
      n = std::max(n, static_cast<int>(v));
    }
    if (raw(e, 0) == raw(e, 1))
      throw std::runtime_error(path + ": self-loops are not allowed");
  }
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (int e = 0; e < raw.rows(); ++e) {
    int i = static_cast<int>(raw(e, 0)) - 1;
    int j = static_cast<int>(raw(e, 1)) - 1;
    adj(i, j) = 1;
    adj(j, i) = 1;
  }
  return adj;
}

void run(const RunConfig& config, int threads) {
  config.validate();

  std::unique_ptr<Kernel> kernel;
  if (config.mode == RunMode::Sbm) {
    Eigen::MatrixXi adj = load_adjacency(config.data_path,
                                         config.adjacency_format == "dense");
    kernel = std::make_unique<SbmKernel>(adj, config.sbm_a_q, config.sbm_b_q);
  } else {
    Eigen::MatrixXd obs =
        load_observations(config.data_path, config.data_has_header);
    if (config.mode == RunMode::Density && obs.cols() != 1)
      throw std::runtime_error("density mode needs single-column data");
    if (obs.cols() == 1) {
      std::vector<double> y(obs.col(0).data(), obs.col(0).data() + obs.rows());
      kernel = std::make_unique<UnivariateNormalKernel>(
          y, UnivariateNormalKernel::default_hypers(y));
    } else {
      kernel = std::make_unique<MultivariateNormalKernel>(
          obs, MultivariateNormalKernel::default_hypers(obs));
    }
  }

  WeightModel weights(weight_family_from_string(config.weight_family),
                      config.weight_shape);
  Sampler sampler(std::move(kernel), weights, config.count_prior_spec(),
                  config.sampler_config());
  auto traces = sampler.run(threads);

  std::filesystem::path out(config.out_dir);
  std::filesystem::create_directories(out);
  json manifest = config_to_json(config);
  write_text_file(out / "manifest.json", manifest.dump(2) + "\n");

  json trace_j;
  trace_j["config"] = manifest;
  trace_j["chains"] = json::array();
  for (const auto& t : traces) {
    json c;
    c["seed"] = t.seed;
    c["max_mass_at_m_max"] = t.max_mass_at_Mmax;
    c["shape_accept_rate"] = t.shape_accept_rate;
    c["draws"] = json::array();
    for (const auto& d : t.draws) c["draws"].push_back(draw_to_json(d));
    trace_j["chains"].push_back(std::move(c));
  }
  write_text_file(out / "trace.json", trace_j.dump() + "\n");

  std::vector<TraceDraw> pooled = pool_draws(traces);
  write_summary_artifacts(config, pooled, out);
}

void summarize_trace(const std::string& trace_path,
                     const std::string& out_dir) {
  json trace_j = load_json_file(trace_path);
  RunConfig config = config_from_json(trace_j.at("config"));
  std::vector<TraceDraw> pooled;
  for (const auto& c : trace_j.at("chains"))
    for (const auto& d : c.at("draws")) pooled.push_back(draw_from_json(d));
  std::filesystem::path out(out_dir);
  std::filesystem::create_directories(out);
  write_summary_artifacts(config, pooled, out);
}

std::vector<std::string> bounds_report(const std::string& trace_path) {
  json trace_j = load_json_file(trace_path);
  RunConfig config = config_from_json(trace_j.at("config"));
  auto family = weight_family_from_string(config.weight_family);
  auto prior = config.count_prior_spec();
  if (!prior.has_lambda())
    throw std::runtime_error(
        "bounds: defined for priors with a Poisson rate only");

  double sum_cond = 0.0, max_cond = 0.0, sum_marg = 0.0;
  long draws = 0, nonempty = 0;
  for (const auto& c : trace_j.at("chains")) {
    for (const auto& dj : c.at("draws")) {
      TraceDraw d = draw_from_json(dj);
      WeightModel w(family, d.shape);
      double log_psi = w.log_psi(d.U, d.M);
      auto [cond, marg] = prop31_bounds(d.U, d.k, d.lambda, log_psi,
                                        config.a_lambda, config.b_lambda);
      sum_cond += cond;
      max_cond = std::max(max_cond, cond);
      sum_marg += marg;
      ++draws;
      if (d.M_na > 0) ++nonempty;
    }
  }
  if (draws == 0) throw std::runtime_error("bounds: trace has no draws");
  double p_hat = static_cast<double>(nonempty) / draws;
  return {
      "draws: " + std::to_string(draws),
      "empirical P(M_na >= 1): " + format_double(p_hat),
      "mean conditional bound: " + format_double(sum_cond / draws),
      "max conditional bound: " + format_double(max_cond),
      "mean marginal bound: " + format_double(sum_marg / draws),
  };
}

}  // namespace mfmig
