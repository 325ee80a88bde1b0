#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "llab/config.hpp"

namespace llab {

struct CliOptions {
  std::string command;
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

const std::vector<std::string>& cli_commands();

// Executes a command and returns the process exit code. Diagnostics go to err.
int run(const CliOptions& opts, std::ostream& out, std::ostream& err);

// Command bodies; they write their artifacts under dir.
void run_fgr(const RunConfig& cfg, const std::string& dir, std::ostream& out);
void run_spectrum(const RunConfig& cfg, const std::string& dir, std::ostream& out);
void run_mourre(const RunConfig& cfg, const std::string& dir, std::ostream& out, std::ostream& err);
void run_feshbach(const RunConfig& cfg, const std::string& dir, std::ostream& out);
void run_resonance(const RunConfig& cfg, const std::string& dir, std::ostream& out);
void run_dynamics(const RunConfig& cfg, const std::string& dir, std::ostream& out);

struct SelftestCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

// Fast invariant suite; deterministic for a given seed.
std::vector<SelftestCheck> run_selftest(std::uint64_t seed);

}  // namespace llab
