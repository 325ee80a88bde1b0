#include "llab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <random>

#include <omp.h>

#include "llab/commutator.hpp"
#include "llab/errors.hpp"
#include "llab/fgr.hpp"
#include "llab/linalg.hpp"
#include "llab/localization.hpp"
#include "llab/random_systems.hpp"
#include "llab/report.hpp"
#include "llab/spectra.hpp"

namespace llab {

using ojson = nlohmann::ordered_json;

const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> c{"fgr", "spectrum", "mourre", "feshbach", "resonance", "dynamics", "selftest"};
  return c;
}

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

ojson header(const std::string& command, const RunConfig& cfg) {
  ojson doc;
  doc["command"] = command;
  doc["config"] = to_json(cfg);
  return doc;
}

double default_e(const LiouvilleParticleSpectrum& lp, const RunConfig& cfg) {
  if (cfg.experiment.e) return *cfg.experiment.e;
  for (double v : lp.values)
    if (v > 0.0) return v;
  throw DomainError("L_p has no positive eigenvalue");
}

ojson fit_json(const LorentzianFit& f) {
  return {{"center", f.center}, {"hwhm", f.hwhm}, {"residual", f.residual}, {"points", f.points}};
}

}  // namespace

void run_fgr(const RunConfig& cfg, const std::string& dir, std::ostream& out) {
  const FgrReport rep = fgr_condition(cfg.particle, cfg.form_factor);
  CsvTable table{{"e", "multiplicity", "gamma_min", "bound", "pass"}, {}};
  ojson entries = ojson::array();
  for (const auto& en : rep.entries) {
    table.add({en.e, static_cast<long long>(en.multiplicity), en.gamma_min, en.bound,
               static_cast<long long>(en.positive && en.bound_ok)});
    entries.push_back({{"e", en.e},
                       {"multiplicity", en.multiplicity},
                       {"gamma_min", en.gamma_min},
                       {"bound", en.bound},
                       {"delta0", en.delta0},
                       {"positive", en.positive},
                       {"bound_ok", en.bound_ok}});
  }
  CsvTable lor{{"e", "epsilon", "distance", "error_estimate"}, {}};
  ojson conv = ojson::array();
  const LiouvilleParticleSpectrum lp = particle_liouvillian(cfg.particle);
  for (double e : lp.values) {
    if (e < 0.0) continue;
    const FgrOperator op = gamma_operator(cfg.particle, cfg.form_factor, e);
    std::vector<double> eps, dist;
    for (double epsilon : cfg.experiment.epsilon) {
      const LorentzianResult l = lorentzian_gamma(cfg.particle, cfg.form_factor, e, epsilon);
      const double d = spectral_norm(l.value - principal_submatrix(op.gamma_p, op.range));
      lor.add({e, epsilon, d, l.error_estimate});
      eps.push_back(epsilon);
      dist.push_back(d);
    }
    bool monotone = true;
    std::vector<std::size_t> order(eps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return eps[a] > eps[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) monotone = monotone && dist[order[i]] < dist[order[i - 1]];
    const double slope = eps.size() >= 2 ? loglog_slope(eps, dist) : std::nan("");
    conv.push_back({{"e", e}, {"slope", json_number(slope)}, {"monotone", monotone}});
  }
  ojson doc = header("fgr", cfg);
  doc["fgr"] = {{"all_positive", rep.all_positive},
                {"g0", rep.g0},
                {"Z", rep.Z},
                {"gap", rep.gap},
                {"gibbs_residual", rep.gibbs_residual},
                {"entries", entries},
                {"lorentzian", conv}};
  write_csv(join(dir, "fgr.csv"), table);
  write_csv(join(dir, "lorentzian.csv"), lor);
  write_json(join(dir, "fgr.json"), doc);
  out << "fgr: all_positive=" << (rep.all_positive ? "true" : "false") << " gap=" << format_number(rep.gap) << "\n";
}

void run_spectrum(const RunConfig& cfg, const std::string& dir, std::ostream& out) {
  const ModelSpec spec = cfg.model_spec();
  const LiouvilleParticleSpectrum lp = particle_liouvillian(cfg.particle);
  const double e = default_e(lp, cfg);
  const double hw = cfg.experiment.window_half_width.value_or(0.5 * minimal_lp_spacing(lp));
  const SpectralScan scan = eigen_scan(spec, cfg.experiment.lambda_grid, e, e - hw, e + hw);
  CsvTable eig{{"lambda", "eigenvalue"}, {}};
  CsvTable ov{{"lambda", "max_overlap", "zero_value", "zero_gap", "zero_residual"}, {}};
  for (const auto& p : scan.points) {
    for (double v : p.eigenvalues) eig.add({p.lambda, v});
    ov.add({p.lambda, p.max_overlap, p.zero_value, p.zero_gap, p.zero_residual});
  }
  const auto kms = kms_scan(spec, cfg.experiment.lambda_grid);
  CsvTable kt{{"lambda", "distance", "residual", "gap", "kernel_dim"}, {}};
  std::vector<double> ls, ds;
  for (const auto& k : kms) {
    kt.add({k.lambda, k.distance, k.residual, k.gap, static_cast<long long>(k.kernel_dim)});
    ls.push_back(k.lambda);
    ds.push_back(k.distance);
  }
  const double slope = ls.size() >= 2 ? loglog_slope(ls, ds) : std::nan("");
  ojson doc = header("spectrum", cfg);
  doc["spectrum"] = {{"e", e}, {"window", {e - hw, e + hw}}, {"kms_distance_slope", json_number(slope)}};
  write_csv(join(dir, "spectrum.csv"), eig);
  write_csv(join(dir, "overlap.csv"), ov);
  write_csv(join(dir, "kms.csv"), kt);
  write_json(join(dir, "spectrum.json"), doc);
  out << "spectrum: e=" << format_number(e) << " kms_distance_slope=" << format_number(slope) << "\n";
}

void run_mourre(const RunConfig& cfg, const std::string& dir, std::ostream& out, std::ostream& err) {
  const ModelSpec spec = cfg.model_spec();
  const CoupledModel base = assemble(spec, 0.0);
  const double e = default_e(base.lp, cfg);
  const MourreConfig& mc = cfg.experiment.mourre;
  CsvTable table{{"lambda", "e", "theta", "eps", "sigma", "gate_ok", "gamma_e", "bound", "min_eig", "margin",
                  "smooth_min_eig", "smooth_margin", "sharp_min_eig", "sharp_margin"},
                 {}};
  ojson reports = ojson::array();
  bool any_gate_fail = false;
  for (double lambda : cfg.experiment.lambda_grid) {
    const CoupledModel m = with_lambda(base, lambda);
    MourreParameters p = MourreParameters::automatic(lambda, mc.hat_eps, mc.hat_sigma, mc.hat_theta, mc.gate_s);
    if (mc.theta) p.theta = *mc.theta;
    if (mc.eps) p.eps = *mc.eps;
    MourreOptions mo;
    mo.half_width = cfg.experiment.window_half_width;
    const MourreReport r = mourre_check(m, e, p, mo);
    if (!r.gate_ok) {
      any_gate_fail = true;
      err << "warning: parameter gate fails at lambda=" << format_number(lambda) << ": " << r.gate_status << "\n";
    }
    table.add({lambda, r.e, r.theta, r.eps, r.sigma, static_cast<long long>(r.gate_ok), r.gamma_e, r.bound,
               r.min_eig, r.margin, r.smooth_min_eig, r.smooth_margin, r.sharp_min_eig, r.sharp_margin});
    const ConjugatePair pair = build_conjugate_pair(m, r.e, p.theta, p.eps);
    const CommutatorComparison cc = defined_commutator(m, pair);
    const SpectralData sd = diagonalize(m);
    Eigen::Index iz = 0;
    sd.values.cwiseAbs().minCoeff(&iz);
    const VirialDefect vd = virial_defect(m, pair, sd.vectors.col(iz), sd.values(iz));
    reports.push_back({{"e", r.e},
                       {"lambda", r.lambda},
                       {"theta", r.theta},
                       {"eps", r.eps},
                       {"sigma", r.sigma},
                       {"gate_ok", r.gate_ok},
                       {"gate_status", r.gate_status},
                       {"gamma_e", r.gamma_e},
                       {"bound", r.bound},
                       {"min_eig", r.min_eig},
                       {"margin", r.margin},
                       {"window_dim", r.window_dim},
                       {"smooth_bound", r.smooth_bound},
                       {"smooth_min_eig", json_number(r.smooth_min_eig)},
                       {"smooth_margin", json_number(r.smooth_margin)},
                       {"sharp_min_eig", json_number(r.sharp_min_eig)},
                       {"sharp_margin", json_number(r.sharp_margin)},
                       {"commutator_defect_smooth", cc.smooth_defect},
                       {"commutator_defect_operator", cc.operator_defect},
                       {"virial", {{"eigenvalue", sd.values(iz)},
                                   {"defined", vd.defined},
                                   {"literal", vd.literal},
                                   {"gap", vd.gap},
                                   {"eigen_residual", vd.eigen_residual}}}});
    out << "mourre: lambda=" << format_number(lambda) << " margin=" << format_number(r.margin)
        << (r.gate_ok ? "" : " (gate fails)") << "\n";
  }
  ojson doc = header("mourre", cfg);
  doc["mourre"] = reports;
  doc["gate_warning"] = any_gate_fail;
  write_csv(join(dir, "mourre.csv"), table);
  write_json(join(dir, "mourre.json"), doc);
}

void run_feshbach(const RunConfig& cfg, const std::string& dir, std::ostream& out) {
  Rng rng(cfg.seed);
  std::uniform_int_distribution<int> dim(6, 40);
  CsvTable table{{"trial", "dim", "p_dim", "eigen_outside", "roots", "max_root_error", "max_min_singular", "ok"}, {}};
  int passed = 0;
  for (int t = 0; t < cfg.experiment.trials; ++t) {
    const int n = dim(rng);
    std::uniform_int_distribution<int> split(1, n - 1);
    const int k = split(rng);
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Eigen::Index> p(perm.begin(), perm.begin() + k);
    std::sort(p.begin(), p.end());
    const CMat b = random_hermitian(rng, n);
    const IsospectralityReport r = check_isospectrality(b, p);
    passed += r.ok;
    table.add({static_cast<long long>(t), static_cast<long long>(n), static_cast<long long>(k),
               static_cast<long long>(r.eigen_outside.size()), static_cast<long long>(r.roots.size()),
               r.max_root_error, r.max_min_singular, static_cast<long long>(r.ok)});
  }
  ojson doc = header("feshbach", cfg);
  doc["feshbach"] = {{"trials", cfg.experiment.trials}, {"passed", passed}};
  write_csv(join(dir, "feshbach.csv"), table);
  write_json(join(dir, "feshbach.json"), doc);
  out << "feshbach: " << passed << "/" << cfg.experiment.trials << " trials isospectral\n";
}

void run_resonance(const RunConfig& cfg, const std::string& dir, std::ostream& out) {
  const LiouvilleParticleSpectrum lp = particle_liouvillian(cfg.particle);
  const double e = default_e(lp, cfg);
  ResonanceOptions ro;
  ro.eta = cfg.experiment.eta;
  ro.x_points = cfg.experiment.x_points;
  const ResonanceReport r = resonance_width(cfg.model_spec(), e, cfg.experiment.lambda_grid, ro);
  CsvTable table{{"lambda", "width", "fit_residual"}, {}};
  CsvTable profile{{"lambda", "x", "s"}, {}};
  ojson pts = ojson::array();
  for (const auto& p : r.points) {
    table.add({p.lambda, p.width, p.fit.residual});
    for (std::size_t i = 0; i < p.x.size(); ++i) profile.add({p.lambda, p.x[i], p.s[i]});
    pts.push_back({{"lambda", p.lambda}, {"width", p.width}, {"fit", fit_json(p.fit)}});
  }
  ojson doc = header("resonance", cfg);
  doc["resonance"] = {{"e", r.e},
                      {"eta", r.eta},
                      {"gamma_e", r.gamma_e},
                      {"mean_spacing", r.mean_spacing},
                      {"slope", json_number(r.slope)},
                      {"prefactor", json_number(r.prefactor)},
                      {"prefactor_ratio", json_number(r.prefactor_ratio)},
                      {"points", pts}};
  write_csv(join(dir, "resonance.csv"), table);
  write_csv(join(dir, "resonance_profile.csv"), profile);
  write_json(join(dir, "resonance.json"), doc);
  out << "resonance: slope=" << format_number(r.slope) << " prefactor_ratio=" << format_number(r.prefactor_ratio)
      << "\n";
}

CVec initial_state(const CoupledModel& m, const SpectralData& sd, const RunConfig& cfg) {
  const std::string& kind = cfg.experiment.initial;
  const CVec ground = m.particle_vacuum_state(0, 0);
  if (kind == "ground") return ground;
  if (kind == "free_kms") return m.omega_beta0();
  const CVec kms = kms_vector(m, sd).vector;
  if (kind == "kms") return kms;
  const double w = cfg.experiment.perturbation;
  CVec v = std::sqrt(1.0 - w) * kms + std::sqrt(w) * ground;
  return v / v.norm();
}

void run_dynamics(const RunConfig& cfg, const std::string& dir, std::ostream& out) {
  const CoupledModel m = assemble(cfg.model_spec(), cfg.experiment.lambda);
  const SpectralData sd = diagonalize(m);
  const CVec psi = initial_state(m, sd, cfg);
  const CMat a = level_observable(m, cfg.experiment.observable_level);
  EvolveOptions eo;
  eo.T = cfg.experiment.T;
  eo.dt = cfg.experiment.dt;
  eo.max_samples = static_cast<std::size_t>(cfg.experiment.max_samples);
  const TimeSeries ts = evolve(m, sd, psi, a, eo);
  CsvTable table{{"t", "value", "running_mean"}, {}};
  double max_norm_defect = 0.0;
  for (std::size_t i = 0; i < ts.times.size(); ++i) {
    table.add({ts.times[i], ts.values[i], ts.running_mean[i]});
    max_norm_defect = std::max(max_norm_defect, std::abs(ts.norms[i] - 1.0));
  }
  const double early = ergodic_mean(sd, psi, a, ts.heisenberg_time / 20.0);
  ojson doc = header("dynamics", cfg);
  doc["dynamics"] = {{"target", ts.target},
                     {"cesaro_limit", ts.cesaro_limit},
                     {"heisenberg_time", ts.heisenberg_time},
                     {"horizon", ts.horizon},
                     {"mean_at_horizon", ts.mean_at_horizon},
                     {"cesaro_residual", ts.cesaro_residual},
                     {"target_residual", ts.target_residual},
                     {"mean_at_heisenberg_twentieth", early},
                     {"observable_norm", ts.observable_norm},
                     {"max_norm_defect", max_norm_defect}};
  write_csv(join(dir, "dynamics.csv"), table);
  write_json(join(dir, "dynamics.json"), doc);
  out << "dynamics: cesaro_residual=" << format_number(ts.cesaro_residual)
      << " target_residual=" << format_number(ts.target_residual) << "\n";
}

int run(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  const auto& cmds = cli_commands();
  if (std::find(cmds.begin(), cmds.end(), opts.command) == cmds.end()) {
    err << "error: unknown command \"" << opts.command << "\"\n";
    return static_cast<int>(ExitCode::config);
  }
  try {
    if (opts.threads) {
      if (*opts.threads < 1) throw ConfigError(ConfigErrorKind::invalid_value, "--threads must be >= 1");
      omp_set_num_threads(*opts.threads);
    }
    if (opts.command == "selftest") {
      std::uint64_t seed = opts.seed.value_or(20240611);
      if (opts.config_path && !opts.seed) seed = parse_config_file(*opts.config_path).seed;
      const auto checks = run_selftest(seed);
      bool ok = true;
      ojson list = ojson::array();
      for (const auto& c : checks) {
        out << (c.ok ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
        ok = ok && c.ok;
        list.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
      }
      if (opts.out_dir) write_json(join(*opts.out_dir, "selftest.json"), ojson{{"checks", list}, {"ok", ok}});
      return static_cast<int>(ok ? ExitCode::ok : ExitCode::selftest);
    }
    if (!opts.config_path) throw ConfigError(ConfigErrorKind::schema, "command requires a config file");
    RunConfig cfg = parse_config_file(*opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.out_dir) cfg.experiment.output_dir = *opts.out_dir;
    const std::string& dir = cfg.experiment.output_dir;
    if (opts.command == "fgr") run_fgr(cfg, dir, out);
    else if (opts.command == "spectrum") run_spectrum(cfg, dir, out);
    else if (opts.command == "mourre") run_mourre(cfg, dir, out, err);
    else if (opts.command == "feshbach") run_feshbach(cfg, dir, out);
    else if (opts.command == "resonance") run_resonance(cfg, dir, out);
    else if (opts.command == "dynamics") run_dynamics(cfg, dir, out);
    return static_cast<int>(ExitCode::ok);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return static_cast<int>(ex.code());
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return static_cast<int>(ExitCode::numerical);
  }
}

}  // namespace llab
