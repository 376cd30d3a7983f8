#include "emp/experiment/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <map>
#include <thread>

namespace emp::experiment {
namespace {

using routing::Variant;

std::string x_label(SweepKind k)
{
  switch (k) {
    case SweepKind::kSigma: return "sigma_m";
    case SweepKind::kVelocity: return "v_max_mps";
    case SweepKind::kTraffic: return "pairs";
    case SweepKind::kDensity: return "nodes";
  }
  return "x";
}

std::string column_name(Variant v, bool hia)
{
  return fmt::format("{}/hia-{}", routing::to_string(v), hia ? "on" : "off");
}

std::string describe(const RunSpec &r)
{
  return fmt::format("run {} ({}={}, variant={}, hia={}, seed={})", r.index, to_string(r.sweep),
                     r.sweep_value, routing::to_string(r.variant), r.hia ? "on" : "off",
                     r.seed_value);
}

sim::MetricsReport execute_one(const RunSpec &spec, const ExecutionOptions &opt)
{
  if (!opt.trace_dir) {
    sim::Simulator sim(spec.config);
    return sim.run();
  }
  const auto stem = *opt.trace_dir / fmt::format("run_{:05d}", spec.index);
  std::ofstream events(stem.string() + "_events.csv");
  std::ofstream mobility(stem.string() + "_mobility.csv");
  std::ofstream filter(stem.string() + "_filter.csv");
  if (!events || !mobility || !filter)
    throw std::runtime_error(fmt::format("cannot write traces under {}", opt.trace_dir->string()));
  events << "time,node,event,msg_kind,origin,dest,seq,hop,ret\n";
  mobility << "time,node,true_x,true_y,meas_x,meas_y\n";
  filter << "time,node,true_x,true_y,meas_x,meas_y,est_x,est_y,rms\n";
  sim::Simulator sim(spec.config, {&events, &mobility, &filter});
  return sim.run();
}

double mean(const std::vector<double> &v)
{
  double s = 0.0;
  for (double x : v)
    s += x;
  return s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double> &v, double m)
{
  if (v.size() < 2)
    return 0.0;
  if (!std::isfinite(m))
    return std::numeric_limits<double>::infinity();
  double ss = 0.0;
  for (double x : v)
    ss += (x - m) * (x - m);
  const double n = static_cast<double>(v.size());
  return std::sqrt(ss / (n - 1.0) / n);
}

std::vector<std::pair<Variant, bool>> sorted_columns(const std::vector<AggregateRow> &rows)
{
  std::vector<std::pair<Variant, bool>> cols;
  for (const auto &r : rows)
    if (std::find(cols.begin(), cols.end(), std::pair{r.variant, r.hia}) == cols.end())
      cols.emplace_back(r.variant, r.hia);
  std::sort(cols.begin(), cols.end(), [](const auto &a, const auto &b) {
    const auto na = routing::to_string(a.first), nb = routing::to_string(b.first);
    if (na != nb)
      return na < nb;
    return a.second < b.second;
  });
  return cols;
}

void write_file(const std::filesystem::path &p, const std::function<void(std::ostream &)> &fn)
{
  std::ofstream out(p, std::ios::binary);
  if (!out)
    throw std::runtime_error(fmt::format("cannot open {} for writing", p.string()));
  fn(out);
  out.flush();
  if (!out)
    throw std::runtime_error(fmt::format("write to {} failed", p.string()));
}

std::string join(const std::vector<double> &v)
{
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += fmt::format("{}{}", i ? "," : "", v[i]);
  return s;
}

}  // namespace

std::uint64_t run_seed(std::uint64_t seed_value)
{
  return seed_value;
}

std::vector<RunSpec> enumerate_runs(const ExperimentConfig &cfg)
{
  std::vector<bool> hia_modes;
  if (cfg.hia != HiaMode::kOn)
    hia_modes.push_back(false);
  if (cfg.hia != HiaMode::kOff)
    hia_modes.push_back(true);

  std::vector<RunSpec> runs;
  for (double value : cfg.sweep_values)
    for (Variant v : cfg.variants)
      for (bool hia : hia_modes)
        for (std::uint64_t seed : cfg.seeds) {
          RunSpec r;
          r.index = runs.size();
          r.sweep = cfg.sweep;
          r.sweep_value = value;
          r.variant = v;
          r.hia = hia;
          r.seed_value = seed;
          r.config = cfg.base;
          apply_sweep_value(r.config, cfg.sweep, value);
          r.config.protocol.variant = v;
          r.config.protocol.hia_enabled = hia;
          r.config.seed = run_seed(seed);
          runs.push_back(std::move(r));
        }
  return runs;
}

std::vector<RunResult> execute_runs(const std::vector<RunSpec> &runs, const ExecutionOptions &opt)
{
  std::vector<RunResult> results(runs.size());
  std::vector<std::exception_ptr> errors(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        results[i] = {runs[i], execute_one(runs[i], opt)};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned jobs =
      std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(runs.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!errors[i])
      continue;
    std::string what = "unknown error";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception &e) {
      what = e.what();
    } catch (...) {
    }
    throw RunFailure(fmt::format("{} failed: {}", describe(runs[i]), what));
  }
  return results;
}

std::vector<AggregateRow> aggregate(const std::vector<RunResult> &results)
{
  struct Acc
  {
    AggregateRow row;
    std::vector<double> pdr, nrl;
  };
  std::vector<Acc> groups;
  std::map<std::tuple<double, Variant, bool>, std::size_t> where;
  for (const auto &r : results) {
    const auto key = std::tuple{r.spec.sweep_value, r.spec.variant, r.spec.hia};
    auto [it, fresh] = where.try_emplace(key, groups.size());
    if (fresh) {
      Acc a;
      a.row.sweep_value = r.spec.sweep_value;
      a.row.variant = r.spec.variant;
      a.row.hia = r.spec.hia;
      groups.push_back(std::move(a));
    }
    Acc &g = groups[it->second];
    g.pdr.push_back(r.report.pdr);
    g.nrl.push_back(r.report.nrl);
  }
  std::vector<AggregateRow> rows;
  rows.reserve(groups.size());
  for (auto &g : groups) {
    g.row.n_seeds = g.pdr.size();
    g.row.mean_pdr = mean(g.pdr);
    g.row.mean_nrl = mean(g.nrl);
    g.row.stderr_pdr = standard_error(g.pdr, g.row.mean_pdr);
    g.row.stderr_nrl = standard_error(g.nrl, g.row.mean_nrl);
    rows.push_back(g.row);
  }
  return rows;
}

void write_raw_runs(std::ostream &out, SweepKind sweep, const std::vector<RunResult> &results)
{
  fmt::print(out, "run,sweep,sweep_value,{},hello_tx,discoveries,risky_discards,loops,trace_hash\n",
             sim::report_csv_header());
  for (const auto &r : results)
    fmt::print(out, "{},{},{},{},{},{},{},{},{:016x}\n", r.spec.index, to_string(sweep),
               r.spec.sweep_value, sim::report_csv_row(r.report), r.report.hello_transmissions,
               r.report.discoveries, r.report.risky_discards, r.report.loop_detections,
               r.report.trace_hash);
}

void write_aggregate(std::ostream &out, SweepKind sweep, const std::vector<AggregateRow> &rows)
{
  fmt::print(out, "{},variant,hia,mean_pdr,mean_nrl,stderr_pdr,stderr_nrl,n_seeds\n",
             x_label(sweep));
  for (const auto &r : rows)
    fmt::print(out, "{},{},{},{},{},{},{},{}\n", r.sweep_value, routing::to_string(r.variant),
               r.hia ? "on" : "off", sim::format_metric(r.mean_pdr),
               sim::format_metric(r.mean_nrl), sim::format_metric(r.stderr_pdr),
               sim::format_metric(r.stderr_nrl), r.n_seeds);
}

void write_plot_data(std::ostream &out, SweepKind sweep, const std::vector<AggregateRow> &rows,
                     bool nrl)
{
  const auto cols = sorted_columns(rows);
  std::vector<double> xs;
  for (const auto &r : rows)
    if (std::find(xs.begin(), xs.end(), r.sweep_value) == xs.end())
      xs.push_back(r.sweep_value);
  std::sort(xs.begin(), xs.end());

  out << x_label(sweep);
  for (const auto &[v, hia] : cols)
    out << ',' << column_name(v, hia);
  out << '\n';
  for (double x : xs) {
    out << fmt::format("{}", x);
    for (const auto &[v, hia] : cols) {
      const auto it = std::find_if(rows.begin(), rows.end(), [&](const AggregateRow &r) {
        return r.sweep_value == x && r.variant == v && r.hia == hia;
      });
      out << ',';
      if (it != rows.end())
        out << sim::format_metric(nrl ? it->mean_nrl : it->mean_pdr);
    }
    out << '\n';
  }
}

void write_summary(std::ostream &out, const ExperimentConfig &cfg,
                   const std::vector<AggregateRow> &rows)
{
  fmt::print(out, "{} sweep, {} seeds per point{}\n\n", to_string(cfg.sweep), cfg.seeds.size(),
             cfg.preset.empty() ? "" : fmt::format(" (preset {})", cfg.preset));
  fmt::print(out, "{:>10}  {:<8} {:<4} {:>18}  {:>18}\n", x_label(cfg.sweep), "variant", "hia",
             "PDR (mean +- se)", "NRL (mean +- se)");
  for (const auto &r : rows)
    fmt::print(out, "{:>10}  {:<8} {:<4} {:>8.4f} +- {:<6.4f}  {:>8.3f} +- {:<6.3f}\n",
               r.sweep_value, routing::to_string(r.variant), r.hia ? "on" : "off", r.mean_pdr,
               r.stderr_pdr, r.mean_nrl, r.stderr_nrl);
}

void write_metadata(std::ostream &out, const ExperimentConfig &cfg)
{
  const auto &s = cfg.base.scenario;
  const auto &p = cfg.base.protocol;
  const auto &c = cfg.base.channel;
  std::string variants;
  for (std::size_t i = 0; i < cfg.variants.size(); ++i)
    variants += fmt::format("{}{}", i ? "," : "", routing::to_string(cfg.variants[i]));
  std::string seeds;
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
    seeds += fmt::format("{}{}", i ? "," : "", cfg.seeds[i]);

  fmt::print(out, "sweep = {}\n", to_string(cfg.sweep));
  fmt::print(out, "sweep_values = {}\n", join(cfg.sweep_values));
  const char *origin = cfg.sweep_values_given               ? "config file"
                       : sweep_values_from_reference(cfg.sweep) ? "reference setup"
                                                                : "implementer choice";
  fmt::print(out, "sweep_values_source = {}\n", origin);
  fmt::print(out, "variants = {}\n", variants);
  fmt::print(out, "hia = {}\n", to_string(cfg.hia));
  fmt::print(out, "seeds = {}\n", seeds);
  fmt::print(out, "run_seed = seed value (shared by every variant and sweep point)\n");
  fmt::print(out, "preset = {}\n", cfg.preset.empty() ? "none" : cfg.preset);
  fmt::print(out, "area = {}x{}\nnodes = {}\nduration = {}\npause = {}\nspeeds = [{}, {}]\n",
             s.area.width, s.area.height, s.nodes, s.duration, s.pause, s.speeds.min,
             s.speeds.max);
  fmt::print(out, "sigma = {}\npairs = {}\npacket_rate = {}\npacket_size = {}\nrange = {}\n",
             s.sigma, s.pairs, s.packet_rate, s.packet_size, p.range);
  fmt::print(out, "\n# implementer choices\n");
  fmt::print(out, "measurement_period = {}\n", s.measurement_period);
  fmt::print(out, "r_diagonal_only = {}\n", s.r_diagonal_only);
  fmt::print(out, "q_scale = {}\n", s.q_scale);
  fmt::print(out, "t_w = {}\n", p.t_w);
  fmt::print(out, "allowed_hello_loss = {}\n", p.allowed_hello_loss);
  fmt::print(out, "hello_interval = {}\nlong_hello_interval = {}\n", p.hello_interval,
             p.long_hello_interval);
  fmt::print(out, "t_min = {}\nbeta = {}\nhia_max_interval = {}\n", p.t_min, p.beta,
             p.hia_max_interval);
  fmt::print(out, "active_route_timeout = {}\nret_hard_deadline = {}\n", p.active_route_timeout,
             p.ret_hard_deadline);
  fmt::print(out, "horizon = {}\nrreq_retries = {}\nnet_traversal_time = {}\n", p.horizon,
             p.rreq_retries, p.net_traversal_time());
  fmt::print(out, "queue_capacity = {}\nrebroadcast_jitter = {}\n", p.queue_capacity,
             p.rebroadcast_jitter);
  fmt::print(out, "channel = unit disk, propagation_delay = {}, jitter = {}, loss = {}\n",
             c.propagation_delay, c.jitter, c.loss_probability);
  fmt::print(out, "drain = {}\n", s.drain);
  if (!sweep_values_from_reference(cfg.sweep) && !cfg.sweep_values_given)
    fmt::print(out, "note = {} sweep values are implementer choices\n", to_string(cfg.sweep));
}

std::vector<AggregateRow> run_sweep(const ExperimentConfig &cfg,
                                    const std::filesystem::path &out_dir,
                                    const ExecutionOptions &opt)
{
  cfg.validate();
  std::filesystem::create_directories(out_dir);
  if (opt.trace_dir)
    std::filesystem::create_directories(*opt.trace_dir);
  const auto results = execute_runs(enumerate_runs(cfg), opt);
  const auto rows = aggregate(results);
  const std::string sweep(to_string(cfg.sweep));
  write_file(out_dir / "raw_runs.csv",
             [&](std::ostream &o) { write_raw_runs(o, cfg.sweep, results); });
  write_file(out_dir / "aggregate.csv",
             [&](std::ostream &o) { write_aggregate(o, cfg.sweep, rows); });
  write_file(out_dir / fmt::format("pdr_vs_{}.csv", sweep),
             [&](std::ostream &o) { write_plot_data(o, cfg.sweep, rows, false); });
  write_file(out_dir / fmt::format("nrl_vs_{}.csv", sweep),
             [&](std::ostream &o) { write_plot_data(o, cfg.sweep, rows, true); });
  write_file(out_dir / "summary.txt", [&](std::ostream &o) { write_summary(o, cfg, rows); });
  write_file(out_dir / "metadata.txt", [&](std::ostream &o) { write_metadata(o, cfg); });
  return rows;
}

}  // namespace emp::experiment
