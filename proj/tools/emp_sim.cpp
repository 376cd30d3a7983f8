// Command-line front end: run sweeps, validate configs, exercise the oracles.

#include "emp/experiment/experiment.hpp"
#include "emp/oracles/oracles.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <iostream>
#include <thread>

namespace {

namespace ex = emp::experiment;

constexpr int kConfigError = 2;
constexpr int kRunFailure = 3;

int cmd_run(const std::string &config, const std::string &preset, unsigned jobs,
            const std::string &out, bool trace)
{
  const ex::ExperimentConfig cfg = ex::load_config(config, preset);
  ex::ExecutionOptions opt;
  opt.jobs = jobs;
  if (trace)
    opt.trace_dir = std::filesystem::path(out) / "traces";
  const auto runs = ex::enumerate_runs(cfg);
  fmt::print("{} runs ({} sweep, {} values x {} variants x {} seeds), {} jobs\n", runs.size(),
             ex::to_string(cfg.sweep), cfg.sweep_values.size(), cfg.variants.size(),
             cfg.seeds.size(), jobs);
  const auto rows = ex::run_sweep(cfg, out, opt);
  ex::write_summary(std::cout, cfg, rows);
  fmt::print("\noutputs written to {}\n", out);
  return 0;
}

int cmd_validate(const std::string &config, const std::string &preset)
{
  const ex::ExperimentConfig cfg = ex::load_config(config, preset);
  fmt::print("ok: {} sweep, {} runs\n", ex::to_string(cfg.sweep), ex::enumerate_runs(cfg).size());
  return 0;
}

int cmd_oracle_ldt(std::size_t pairs, std::uint64_t seed)
{
  emp::oracles::LdtComparisonParams p;
  p.pairs = pairs;
  p.seed = seed;
  const auto r = emp::oracles::compare_link_duration(p);
  fmt::print("ldt oracle: {}/{} pairs agree within {} s (connected {}, unbounded {}), "
             "max |error| {:.6f} s, {:.2f} s\n",
             r.agreements, r.pairs, p.tolerance, r.connected, r.unbounded, r.max_abs_error,
             r.seconds);
  return r.agreements == r.pairs ? 0 : 1;
}

int cmd_oracle_kalman(int trials, double sigma, int fixes, std::uint64_t seed, bool cross)
{
  emp::oracles::KalmanMcParams p;
  p.trials = trials;
  p.sigma = sigma;
  p.fixes = fixes;
  p.seed = seed;
  p.diagonal_only = !cross;
  const auto r = emp::oracles::kalman_static_target(p);
  fmt::print("kalman oracle: raw rms {:.3f} m, filtered rms {:.3f} m (ratio {:.3f}); "
             "empirical var {:.3f} m^2 vs reported {:.3f} m^2 ({:+.1f}%), {:.2f} s\n",
             r.raw_rms, r.filtered_rms, r.filtered_rms / r.raw_rms, r.empirical_var,
             r.reported_var, 100.0 * (r.empirical_var / r.reported_var - 1.0), r.seconds);
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"EMP routing simulator"};
  app.require_subcommand(1);

  std::string config, preset, out = "results";
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  bool trace = false;
  auto *run = app.add_subcommand("run", "run the configured sweep");
  run->add_option("--config", config, "experiment config file")->required();
  run->add_option("--preset", preset, "named preset applied before the file (desk)");
  run->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);
  run->add_option("--out", out, "output directory");
  run->add_flag("--trace", trace, "write per-run traces under OUT/traces");

  auto *validate = app.add_subcommand("validate", "check a config file");
  validate->add_option("--config", config, "experiment config file")->required();
  validate->add_option("--preset", preset, "named preset applied before the file (desk)");

  auto *oracle = app.add_subcommand("oracle", "run a brute-force reference check");
  oracle->require_subcommand(1);
  std::size_t pairs = 10000;
  std::uint64_t seed = 1;
  auto *ldt = oracle->add_subcommand("ldt", "closed-form link duration vs 1 ms grid search");
  ldt->add_option("--pairs", pairs, "random estimate pairs");
  ldt->add_option("--seed", seed, "rng seed");
  int trials = 200, fixes = 50;
  double sigma = 20.0;
  bool cross = false;
  auto *kalman = oracle->add_subcommand("kalman", "static-target Monte-Carlo of the filter");
  kalman->add_option("--trials", trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
  kalman->add_option("--sigma", sigma, "measurement std-dev (m)")->check(CLI::NonNegativeNumber);
  kalman->add_option("--fixes", fixes, "fixes per trial")->check(CLI::PositiveNumber);
  kalman->add_option("--seed", seed, "rng seed");
  kalman->add_flag("--cross-terms", cross, "include position-velocity covariance in R");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run)
      return cmd_run(config, preset, jobs, out, trace);
    if (*validate)
      return cmd_validate(config, preset);
    if (*ldt)
      return cmd_oracle_ldt(pairs, seed);
    if (*kalman)
      return cmd_oracle_kalman(trials, sigma, fixes, seed, cross);
  } catch (const ex::ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ex::RunFailure &e) {
    std::cerr << "run failure: " << e.what() << '\n';
    return kRunFailure;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
