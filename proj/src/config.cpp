#include "llab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "llab/errors.hpp"

namespace llab {

const char* to_string(ConfigErrorKind kind) {
  switch (kind) {
    case ConfigErrorKind::malformed_json: return "malformed_json";
    case ConfigErrorKind::schema: return "schema";
    case ConfigErrorKind::unknown_key: return "unknown_key";
    case ConfigErrorKind::ir_violation: return "ir_violation";
    case ConfigErrorKind::nonpositive_beta: return "nonpositive_beta";
    case ConfigErrorKind::photon_cap: return "photon_cap";
    case ConfigErrorKind::invalid_value: return "invalid_value";
  }
  return "unknown";
}

ModelSpec RunConfig::model_spec() const {
  ModelSpec s;
  s.ps = particle;
  s.ff = form_factor;
  s.u_max = u_max;
  s.n_u = n_u;
  s.n_max = n_max;
  s.dim_cap = experiment.dimension_cap;
  return s;
}

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(ConfigErrorKind kind, const std::string& msg) { throw ConfigError(kind, msg); }

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(ConfigErrorKind::schema, where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items())
    if (!ok.count(item.key())) fail(ConfigErrorKind::unknown_key, "unknown key \"" + item.key() + "\" in " + where);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(ConfigErrorKind::schema, where + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(ConfigErrorKind::invalid_value, where + " must be finite");
  return d;
}

long long integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(ConfigErrorKind::schema, where + " must be an integer");
  return v.get<long long>();
}

std::vector<double> number_list(const json& v, const std::string& where) {
  if (!v.is_array()) fail(ConfigErrorKind::schema, where + " must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

cplx complex_entry(const json& v, const std::string& where) {
  if (v.is_number()) return {number(v, where), 0.0};
  if (!v.is_array() || v.size() != 2) fail(ConfigErrorKind::schema, where + " must be a number or [re, im]");
  return {number(v[0], where + ".re"), number(v[1], where + ".im")};
}

template <class T, class F>
void optional_field(const json& obj, const char* key, const std::string& where, T& target, F&& convert) {
  if (obj.contains(key)) target = convert(obj.at(key), where + "." + key);
}

const json& required(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) fail(ConfigErrorKind::schema, "missing key \"" + std::string(key) + "\" in " + where);
  return obj.at(key);
}

void parse_particle(const json& p, RunConfig& cfg) {
  check_keys(p, "particle", {"energies", "G", "beta"});
  const std::vector<double> e = number_list(required(p, "energies", "particle"), "particle.energies");
  const int n = static_cast<int>(e.size());
  if (n < 2) fail(ConfigErrorKind::invalid_value, "particle.energies needs at least two levels");
  for (int i = 1; i < n; ++i)
    if (!(e[static_cast<std::size_t>(i)] >= e[static_cast<std::size_t>(i - 1)]))
      fail(ConfigErrorKind::invalid_value, "particle.energies must be ascending");
  cfg.particle.energies = Eigen::Map<const RVec>(e.data(), n);
  const json& g = required(p, "G", "particle");
  if (!g.is_array() || static_cast<int>(g.size()) != n)
    fail(ConfigErrorKind::schema, "particle.G must be an array of " + std::to_string(n) + " rows");
  cfg.particle.G.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = g[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail(ConfigErrorKind::schema, "particle.G rows must have " + std::to_string(n) + " entries");
    for (int j = 0; j < n; ++j)
      cfg.particle.G(i, j) = complex_entry(row[static_cast<std::size_t>(j)],
                                           "particle.G[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  if ((cfg.particle.G - cfg.particle.G.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    fail(ConfigErrorKind::invalid_value, "particle.G must be Hermitian");
  const double beta = number(required(p, "beta", "particle"), "particle.beta");
  if (!(beta > 0.0)) fail(ConfigErrorKind::nonpositive_beta, "particle.beta must be > 0");
  cfg.particle.beta = beta;
}

void parse_field(const json& f, RunConfig& cfg) {
  check_keys(f, "field", {"form_factor", "grid", "fock"});
  if (f.contains("form_factor")) {
    const json& ff = f.at("form_factor");
    check_keys(ff, "field.form_factor", {"p", "q", "amplitude", "profile"});
    optional_field(ff, "p", "field.form_factor", cfg.form_factor.p, number);
    optional_field(ff, "q", "field.form_factor", cfg.form_factor.q, number);
    optional_field(ff, "amplitude", "field.form_factor", cfg.form_factor.amplitude, number);
    if (ff.contains("profile")) {
      if (!ff.at("profile").is_string()) fail(ConfigErrorKind::schema, "field.form_factor.profile must be a string");
      cfg.form_factor.profile = ff.at("profile").get<std::string>();
    }
    if (!(cfg.form_factor.p > 0.0)) fail(ConfigErrorKind::ir_violation, "field.form_factor.p must be > 0");
    if (!(cfg.form_factor.q > 2.5)) fail(ConfigErrorKind::invalid_value, "field.form_factor.q must be > 5/2");
    if (!(cfg.form_factor.amplitude > 0.0))
      fail(ConfigErrorKind::invalid_value, "field.form_factor.amplitude must be > 0");
    if (cfg.form_factor.profile != "power_exp")
      fail(ConfigErrorKind::invalid_value, "field.form_factor.profile must be \"power_exp\"");
  }
  if (f.contains("grid")) {
    const json& g = f.at("grid");
    check_keys(g, "field.grid", {"u_max", "n_u"});
    optional_field(g, "u_max", "field.grid", cfg.u_max, number);
    optional_field(g, "n_u", "field.grid", cfg.n_u, [](const json& v, const std::string& w) {
      return static_cast<int>(integer(v, w));
    });
    if (!(cfg.u_max > 0.0)) fail(ConfigErrorKind::invalid_value, "field.grid.u_max must be > 0");
    if (cfg.n_u < 2 || cfg.n_u % 2 != 0) fail(ConfigErrorKind::invalid_value, "field.grid.n_u must be even and >= 2");
  }
  if (f.contains("fock")) {
    const json& k = f.at("fock");
    check_keys(k, "field.fock", {"n_max"});
    optional_field(k, "n_max", "field.fock", cfg.n_max, [](const json& v, const std::string& w) {
      return static_cast<int>(integer(v, w));
    });
    if (cfg.n_max < 1) fail(ConfigErrorKind::photon_cap, "field.fock.n_max must be >= 1");
  }
}

void parse_experiment(const json& x, RunConfig& cfg) {
  ExperimentConfig& e = cfg.experiment;
  check_keys(x, "experiment",
             {"lambda", "lambda_grid", "e", "window_half_width", "epsilon", "eta", "x_points", "T", "dt",
              "max_samples", "observable_level", "initial", "perturbation", "trials", "mourre", "dimension_cap",
              "output_dir"});
  const std::string w = "experiment";
  auto as_int = [](const json& v, const std::string& where) { return static_cast<int>(integer(v, where)); };
  optional_field(x, "lambda", w, e.lambda, number);
  optional_field(x, "lambda_grid", w, e.lambda_grid, number_list);
  if (x.contains("e")) e.e = number(x.at("e"), "experiment.e");
  if (x.contains("window_half_width")) e.window_half_width = number(x.at("window_half_width"), "experiment.window_half_width");
  optional_field(x, "epsilon", w, e.epsilon, number_list);
  optional_field(x, "eta", w, e.eta, number);
  optional_field(x, "x_points", w, e.x_points, as_int);
  optional_field(x, "T", w, e.T, number);
  optional_field(x, "dt", w, e.dt, number);
  optional_field(x, "max_samples", w, e.max_samples, as_int);
  optional_field(x, "observable_level", w, e.observable_level, as_int);
  if (x.contains("initial")) {
    if (!x.at("initial").is_string()) fail(ConfigErrorKind::schema, "experiment.initial must be a string");
    e.initial = x.at("initial").get<std::string>();
  }
  optional_field(x, "perturbation", w, e.perturbation, number);
  optional_field(x, "trials", w, e.trials, as_int);
  if (x.contains("dimension_cap")) {
    const long long cap = integer(x.at("dimension_cap"), "experiment.dimension_cap");
    if (cap < 1) fail(ConfigErrorKind::invalid_value, "experiment.dimension_cap must be >= 1");
    e.dimension_cap = static_cast<std::size_t>(cap);
  }
  if (x.contains("output_dir")) {
    if (!x.at("output_dir").is_string()) fail(ConfigErrorKind::schema, "experiment.output_dir must be a string");
    e.output_dir = x.at("output_dir").get<std::string>();
  }
  if (x.contains("mourre")) {
    const json& m = x.at("mourre");
    check_keys(m, "experiment.mourre", {"hat_eps", "hat_sigma", "hat_theta", "gate_s", "theta", "eps"});
    const std::string mw = "experiment.mourre";
    optional_field(m, "hat_eps", mw, e.mourre.hat_eps, as_int);
    optional_field(m, "hat_sigma", mw, e.mourre.hat_sigma, as_int);
    optional_field(m, "hat_theta", mw, e.mourre.hat_theta, as_int);
    optional_field(m, "gate_s", mw, e.mourre.gate_s, number);
    if (m.contains("theta")) e.mourre.theta = number(m.at("theta"), mw + ".theta");
    if (m.contains("eps")) e.mourre.eps = number(m.at("eps"), mw + ".eps");
    if (e.mourre.theta && !(*e.mourre.theta > 0.0)) fail(ConfigErrorKind::invalid_value, "experiment.mourre.theta must be > 0");
    if (e.mourre.eps && !(*e.mourre.eps > 0.0)) fail(ConfigErrorKind::invalid_value, "experiment.mourre.eps must be > 0");
  }

  if (!(e.lambda >= 0.0)) fail(ConfigErrorKind::invalid_value, "experiment.lambda must be >= 0");
  if (e.lambda_grid.empty()) fail(ConfigErrorKind::invalid_value, "experiment.lambda_grid must not be empty");
  for (std::size_t i = 0; i < e.lambda_grid.size(); ++i) {
    if (!(e.lambda_grid[i] > 0.0)) fail(ConfigErrorKind::invalid_value, "experiment.lambda_grid must be strictly positive");
    if (i > 0 && !(e.lambda_grid[i] > e.lambda_grid[i - 1]))
      fail(ConfigErrorKind::invalid_value, "experiment.lambda_grid must be sorted ascending");
  }
  for (double eps : e.epsilon)
    if (!(eps > 0.0)) fail(ConfigErrorKind::invalid_value, "experiment.epsilon entries must be > 0");
  if (e.window_half_width && !(*e.window_half_width > 0.0))
    fail(ConfigErrorKind::invalid_value, "experiment.window_half_width must be > 0");
  if (!(e.eta > 0.0)) fail(ConfigErrorKind::invalid_value, "experiment.eta must be > 0");
  if (e.x_points < 5) fail(ConfigErrorKind::invalid_value, "experiment.x_points must be >= 5");
  if (!(e.T > 0.0) || !(e.dt > 0.0)) fail(ConfigErrorKind::invalid_value, "experiment.T and experiment.dt must be > 0");
  if (e.max_samples < 2) fail(ConfigErrorKind::invalid_value, "experiment.max_samples must be >= 2");
  if (e.observable_level < 0 || e.observable_level >= cfg.particle.size())
    fail(ConfigErrorKind::invalid_value, "experiment.observable_level out of range");
  if (e.initial != "ground" && e.initial != "kms" && e.initial != "free_kms" && e.initial != "mixed")
    fail(ConfigErrorKind::invalid_value, "experiment.initial must be one of ground, kms, free_kms, mixed");
  if (!(e.perturbation >= 0.0 && e.perturbation <= 1.0))
    fail(ConfigErrorKind::invalid_value, "experiment.perturbation must lie in [0, 1]");
  if (e.trials < 1) fail(ConfigErrorKind::invalid_value, "experiment.trials must be >= 1");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& ex) {
    fail(ConfigErrorKind::malformed_json, ex.what());
  }
  check_keys(root, "config", {"particle", "field", "experiment", "seed"});
  RunConfig cfg;
  parse_particle(required(root, "particle", "config"), cfg);
  if (root.contains("field")) parse_field(root.at("field"), cfg);
  if (root.contains("experiment")) parse_experiment(root.at("experiment"), cfg);
  else parse_experiment(json::object(), cfg);
  if (root.contains("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_unsigned()) fail(ConfigErrorKind::schema, "seed must be a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ConfigErrorKind::malformed_json, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

ojson to_json(const RunConfig& cfg) {
  ojson root;
  ojson particle;
  particle["energies"] = std::vector<double>(cfg.particle.energies.data(),
                                             cfg.particle.energies.data() + cfg.particle.energies.size());
  ojson g = ojson::array();
  for (Eigen::Index i = 0; i < cfg.particle.G.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < cfg.particle.G.cols(); ++j)
      row.push_back({cfg.particle.G(i, j).real(), cfg.particle.G(i, j).imag()});
    g.push_back(row);
  }
  particle["G"] = g;
  particle["beta"] = cfg.particle.beta;
  root["particle"] = particle;

  ojson field;
  field["form_factor"] = {{"p", cfg.form_factor.p},
                          {"q", cfg.form_factor.q},
                          {"amplitude", cfg.form_factor.amplitude},
                          {"profile", cfg.form_factor.profile}};
  field["grid"] = {{"u_max", cfg.u_max}, {"n_u", cfg.n_u}};
  field["fock"] = {{"n_max", cfg.n_max}};
  root["field"] = field;

  const ExperimentConfig& e = cfg.experiment;
  ojson x;
  x["lambda"] = e.lambda;
  x["lambda_grid"] = e.lambda_grid;
  if (e.e) x["e"] = *e.e;
  if (e.window_half_width) x["window_half_width"] = *e.window_half_width;
  x["epsilon"] = e.epsilon;
  x["eta"] = e.eta;
  x["x_points"] = e.x_points;
  x["T"] = e.T;
  x["dt"] = e.dt;
  x["max_samples"] = e.max_samples;
  x["observable_level"] = e.observable_level;
  x["initial"] = e.initial;
  x["perturbation"] = e.perturbation;
  x["trials"] = e.trials;
  ojson m;
  m["hat_eps"] = e.mourre.hat_eps;
  m["hat_sigma"] = e.mourre.hat_sigma;
  m["hat_theta"] = e.mourre.hat_theta;
  m["gate_s"] = e.mourre.gate_s;
  if (e.mourre.theta) m["theta"] = *e.mourre.theta;
  if (e.mourre.eps) m["eps"] = *e.mourre.eps;
  x["mourre"] = m;
  x["dimension_cap"] = e.dimension_cap;
  x["output_dir"] = e.output_dir;
  root["experiment"] = x;
  root["seed"] = cfg.seed;
  return root;
}

std::string canonical_dump(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

}  // namespace llab
