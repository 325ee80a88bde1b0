#pragma once

#include <string>

#include "llab/config.hpp"
#include "llab/field.hpp"
#include "llab/liouvillian.hpp"
#include "llab/particle.hpp"

namespace llab::test {

inline ParticleSystem two_level(double beta = 1.0) {
  ParticleSystem ps;
  ps.energies = RVec(2);
  ps.energies << 0.0, 1.0;
  ps.G = CMat::Zero(2, 2);
  ps.G(0, 1) = ps.G(1, 0) = 1.0;
  ps.beta = beta;
  return ps;
}

inline FormFactor canonical_g(double p = 0.5) {
  FormFactor ff;
  ff.p = p;
  return ff;
}

inline ModelSpec two_level_spec(int n_u, int n_max, double u_max = 3.0, double beta = 1.0) {
  ModelSpec s;
  s.ps = two_level(beta);
  s.ff = canonical_g();
  s.n_u = n_u;
  s.n_max = n_max;
  s.u_max = u_max;
  return s;
}

inline std::string config_path(const std::string& name) { return std::string(LLAB_SOURCE_DIR) + "/configs/" + name; }

}  // namespace llab::test
