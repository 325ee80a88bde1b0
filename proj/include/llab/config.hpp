#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "llab/field.hpp"
#include "llab/liouvillian.hpp"
#include "llab/particle.hpp"

namespace llab {

struct MourreConfig {
  int hat_eps = 44;
  int hat_sigma = 55;
  int hat_theta = 26;
  double gate_s = 0.5;
  std::optional<double> theta;  // overrides of the automatic values
  std::optional<double> eps;
};

struct ExperimentConfig {
  double lambda = 0.05;
  std::vector<double> lambda_grid{0.02, 0.05, 0.1};
  std::optional<double> e;  // default: smallest positive eigenvalue of L_p
  std::optional<double> window_half_width;
  std::vector<double> epsilon{1e-1, 1e-2, 1e-3};
  double eta = 0.01;
  int x_points = 81;
  double T = 200.0;
  double dt = 0.05;
  int max_samples = 4001;
  int observable_level = 0;
  std::string initial = "ground";  // ground | kms | free_kms | mixed
  double perturbation = 0.3;       // weight of the ground state in "mixed"
  int trials = 50;                 // feshbach sweep size
  MourreConfig mourre;
  std::size_t dimension_cap = kDefaultDimensionCap;
  std::string output_dir = "out";
};

struct RunConfig {
  ParticleSystem particle;
  FormFactor form_factor;
  double u_max = 3.0;
  int n_u = 12;
  int n_max = 2;
  ExperimentConfig experiment;
  std::uint64_t seed = 20240611;

  ModelSpec model_spec() const;
};

// Strict parsing: unknown keys, wrong types and invalid values raise ConfigError.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Canonical form with every default materialized.
nlohmann::ordered_json to_json(const RunConfig& cfg);
std::string canonical_dump(const RunConfig& cfg);

}  // namespace llab
