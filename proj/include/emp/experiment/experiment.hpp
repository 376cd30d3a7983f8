#pragma once

#include "emp/sim/simulator.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace emp::experiment {

enum class SweepKind { kSigma, kVelocity, kTraffic, kDensity };
enum class HiaMode { kOff, kOn, kBoth };

std::string_view to_string(SweepKind k);
std::string_view to_string(HiaMode m);
std::optional<SweepKind> parse_sweep(std::string_view s);
std::optional<HiaMode> parse_hia(std::string_view s);

/// Values swept when the config does not list any.
std::vector<double> default_sweep_values(SweepKind k);
/// False for sweeps whose value lists are not given by the reference setup.
bool sweep_values_from_reference(SweepKind k);

/// Bad configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// A run that threw; the CLI maps it to exit code 3.
class RunFailure : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig
{
  sim::SimConfig base;
  SweepKind sweep = SweepKind::kSigma;
  std::vector<double> sweep_values = default_sweep_values(SweepKind::kSigma);
  bool sweep_values_given = false;
  std::vector<routing::Variant> variants{routing::Variant::kAodv, routing::Variant::kAodvI,
                                         routing::Variant::kMp, routing::Variant::kEmp,
                                         routing::Variant::kEmpWo};
  HiaMode hia = HiaMode::kOff;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::string preset;  ///< empty when none

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

/// Reduced-scale setup: 50 nodes, 1000 x 750 m, 300 s, 5 pairs, 5 seeds.
void apply_preset(ExperimentConfig &cfg, std::string_view name);

/// Parses the INI-style text. Defaults, then the preset, then file values.
ExperimentConfig parse_config(std::istream &in, std::string_view preset = {});
ExperimentConfig load_config(const std::filesystem::path &path, std::string_view preset = {});

/// Sets the swept parameter of a simulation config.
void apply_sweep_value(sim::SimConfig &cfg, SweepKind kind, double value);

/// Seed handed to the simulator for a configured seed value. Depends on the
/// seed value only, so every variant and sweep point sees the same mobility.
std::uint64_t run_seed(std::uint64_t seed_value);

struct RunSpec
{
  std::size_t index = 0;
  SweepKind sweep = SweepKind::kSigma;
  double sweep_value = 0.0;
  routing::Variant variant = routing::Variant::kAodv;
  bool hia = false;
  std::uint64_t seed_value = 0;
  sim::SimConfig config;
};

/// Cross product in the order sweep value, variant, hia (off first), seed.
std::vector<RunSpec> enumerate_runs(const ExperimentConfig &cfg);

struct RunResult
{
  RunSpec spec;
  sim::MetricsReport report;
};

struct ExecutionOptions
{
  unsigned jobs = 1;
  /// When set, per-run event/mobility/filter traces are written here.
  std::optional<std::filesystem::path> trace_dir;
};

/// Executes the runs, possibly concurrently; results follow enumeration order.
/// Throws RunFailure identifying the first failing run.
std::vector<RunResult> execute_runs(const std::vector<RunSpec> &runs,
                                    const ExecutionOptions &opt = {});

struct AggregateRow
{
  double sweep_value = 0.0;
  routing::Variant variant = routing::Variant::kAodv;
  bool hia = false;
  double mean_pdr = 0.0;
  double mean_nrl = 0.0;
  double stderr_pdr = 0.0;
  double stderr_nrl = 0.0;
  std::size_t n_seeds = 0;
};

/// Seed means and standard errors per (sweep value, variant, hia), in
/// first-appearance order.
std::vector<AggregateRow> aggregate(const std::vector<RunResult> &results);

void write_raw_runs(std::ostream &out, SweepKind sweep, const std::vector<RunResult> &results);
void write_aggregate(std::ostream &out, SweepKind sweep, const std::vector<AggregateRow> &rows);
/// x = sweep value, one column per (variant, hia) sorted by variant name then hia.
void write_plot_data(std::ostream &out, SweepKind sweep, const std::vector<AggregateRow> &rows,
                     bool nrl);
void write_summary(std::ostream &out, const ExperimentConfig &cfg,
                   const std::vector<AggregateRow> &rows);
void write_metadata(std::ostream &out, const ExperimentConfig &cfg);

/// Runs the sweep and writes every output file into out_dir.
std::vector<AggregateRow> run_sweep(const ExperimentConfig &cfg,
                                    const std::filesystem::path &out_dir,
                                    const ExecutionOptions &opt = {});

}  // namespace emp::experiment
