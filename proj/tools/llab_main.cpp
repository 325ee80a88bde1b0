#include <iostream>

#include <CLI11.hpp>

#include "llab/cli.hpp"
#include "llab/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Liouvillian laboratory: spectral and commutator experiments on truncated open-system models"};
  llab::CliOptions opts;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("command", opts.command, "fgr | spectrum | mourre | feshbach | resonance | dynamics | selftest")
      ->required();
  app.add_option("config", config, "JSON configuration (optional for selftest)");
  auto* out_opt = app.add_option("--out", out, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized sweeps");
  auto* thr_opt = app.add_option("--threads", threads, "OpenMP thread count");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(llab::ExitCode::config);
  }
  if (!config.empty()) opts.config_path = config;
  if (*out_opt) opts.out_dir = out;
  if (*seed_opt) opts.seed = seed;
  if (*thr_opt) opts.threads = threads;
  return llab::run(opts, std::cout, std::cerr);
}
