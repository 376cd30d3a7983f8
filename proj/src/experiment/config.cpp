#include "emp/experiment/experiment.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace emp::experiment {
namespace {

namespace pt = boost::property_tree;
using routing::Variant;

std::string trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s)
{
  for (char &c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_list(const std::string &s)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string::npos ? s.size() : comma;
    std::string item = trim(std::string_view(s).substr(start, end - start));
    if (!item.empty())
      out.push_back(std::move(item));
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  return out;
}

double to_double(const std::string &key, const std::string &text)
{
  double v = 0.0;
  const char *end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, text));
  return v;
}

long to_long(const std::string &key, const std::string &text)
{
  long v = 0;
  const char *end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, text));
  return v;
}

int to_int(const std::string &key, const std::string &text)
{
  const long v = to_long(key, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(fmt::format("{}: value {} out of range", key, v));
  return static_cast<int>(v);
}

bool to_bool(const std::string &key, const std::string &text)
{
  const std::string t = lower(text);
  if (t == "true" || t == "yes" || t == "on" || t == "1")
    return true;
  if (t == "false" || t == "no" || t == "off" || t == "0")
    return false;
  throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, text));
}

using Setter = std::function<void(ExperimentConfig &, const std::string &key,
                                  const std::string &value)>;
using Section = std::map<std::string, Setter>;

Setter scenario_d(double sim::ScenarioConfig::*field)
{
  return [field](ExperimentConfig &c, const std::string &k, const std::string &v) {
    c.base.scenario.*field = to_double(k, v);
  };
}
Setter scenario_i(int sim::ScenarioConfig::*field)
{
  return [field](ExperimentConfig &c, const std::string &k, const std::string &v) {
    c.base.scenario.*field = to_int(k, v);
  };
}
Setter protocol_d(double routing::ProtocolConfig::*field)
{
  return [field](ExperimentConfig &c, const std::string &k, const std::string &v) {
    c.base.protocol.*field = to_double(k, v);
  };
}
Setter protocol_i(int routing::ProtocolConfig::*field)
{
  return [field](ExperimentConfig &c, const std::string &k, const std::string &v) {
    c.base.protocol.*field = to_int(k, v);
  };
}
Setter channel_d(double sim::ChannelModel::*field)
{
  return [field](ExperimentConfig &c, const std::string &k, const std::string &v) {
    c.base.channel.*field = to_double(k, v);
  };
}

const std::map<std::string, Section> &grammar()
{
  static const std::map<std::string, Section> g = [] {
    std::map<std::string, Section> m;
    m["experiment"] = {
        {"sweep",
         [](ExperimentConfig &c, const std::string &k, const std::string &v) {
           const auto s = parse_sweep(v);
           if (!s)
             throw ConfigError(fmt::format("{}: unknown sweep '{}'", k, v));
           c.sweep = *s;
         }},
        {"variants",
         [](ExperimentConfig &c, const std::string &k, const std::string &v) {
           c.variants.clear();
           for (const auto &item : split_list(v)) {
             const auto var = routing::parse_variant(item);
             if (!var)
               throw ConfigError(fmt::format("{}: unknown variant '{}'", k, item));
             c.variants.push_back(*var);
           }
         }},
        {"hia",
         [](ExperimentConfig &c, const std::string &k, const std::string &v) {
           const auto h = parse_hia(v);
           if (!h)
             throw ConfigError(fmt::format("{}: expected off, on or both, got '{}'", k, v));
           c.hia = *h;
         }},
        {"seeds",
         [](ExperimentConfig &c, const std::string &k, const std::string &v) {
           c.seeds.clear();
           for (const auto &item : split_list(v)) {
             const long s = to_long(k, item);
             if (s < 0)
               throw ConfigError(fmt::format("{}: seeds must be non-negative", k));
             c.seeds.push_back(static_cast<std::uint64_t>(s));
           }
         }},
    };
    m["scenario"] = {
        {"width", [](ExperimentConfig &c, const std::string &k,
                     const std::string &v) { c.base.scenario.area.width = to_double(k, v); }},
        {"height", [](ExperimentConfig &c, const std::string &k,
                      const std::string &v) { c.base.scenario.area.height = to_double(k, v); }},
        {"nodes", scenario_i(&sim::ScenarioConfig::nodes)},
        {"duration", scenario_d(&sim::ScenarioConfig::duration)},
        {"pause", scenario_d(&sim::ScenarioConfig::pause)},
        {"v_min", [](ExperimentConfig &c, const std::string &k,
                     const std::string &v) { c.base.scenario.speeds.min = to_double(k, v); }},
        {"v_max", [](ExperimentConfig &c, const std::string &k,
                     const std::string &v) { c.base.scenario.speeds.max = to_double(k, v); }},
        {"sigma", scenario_d(&sim::ScenarioConfig::sigma)},
        {"measurement_period", scenario_d(&sim::ScenarioConfig::measurement_period)},
        {"pairs", scenario_i(&sim::ScenarioConfig::pairs)},
        {"packet_rate", scenario_d(&sim::ScenarioConfig::packet_rate)},
        {"packet_size", scenario_i(&sim::ScenarioConfig::packet_size)},
        {"drain", scenario_d(&sim::ScenarioConfig::drain)},
        {"metrics_period", scenario_d(&sim::ScenarioConfig::metrics_period)},
    };
    m["kalman"] = {
        {"r_diagonal_only",
         [](ExperimentConfig &c, const std::string &k, const std::string &v) {
           c.base.scenario.r_diagonal_only = to_bool(k, v);
         }},
        {"q_scale", scenario_d(&sim::ScenarioConfig::q_scale)},
    };
    m["protocol"] = {
        {"hello_interval", protocol_d(&routing::ProtocolConfig::hello_interval)},
        {"long_hello_interval", protocol_d(&routing::ProtocolConfig::long_hello_interval)},
        {"t_min", protocol_d(&routing::ProtocolConfig::t_min)},
        {"beta", protocol_d(&routing::ProtocolConfig::beta)},
        {"hia_max_interval", protocol_d(&routing::ProtocolConfig::hia_max_interval)},
        {"t_w", protocol_d(&routing::ProtocolConfig::t_w)},
        {"allowed_hello_loss", protocol_i(&routing::ProtocolConfig::allowed_hello_loss)},
        {"range", protocol_d(&routing::ProtocolConfig::range)},
        {"active_route_timeout", protocol_d(&routing::ProtocolConfig::active_route_timeout)},
        {"ret_hard_deadline",
         [](ExperimentConfig &c, const std::string &k, const std::string &v) {
           c.base.protocol.ret_hard_deadline = to_bool(k, v);
         }},
        {"horizon", protocol_d(&routing::ProtocolConfig::horizon)},
        {"rreq_retries", protocol_i(&routing::ProtocolConfig::rreq_retries)},
        {"node_traversal_time", protocol_d(&routing::ProtocolConfig::node_traversal_time)},
        {"net_diameter", protocol_i(&routing::ProtocolConfig::net_diameter)},
        {"queue_capacity",
         [](ExperimentConfig &c, const std::string &k, const std::string &v) {
           const long n = to_long(k, v);
           if (n < 1)
             throw ConfigError(fmt::format("{}: must be >= 1", k));
           c.base.protocol.queue_capacity = static_cast<std::size_t>(n);
         }},
        {"rebroadcast_jitter", protocol_d(&routing::ProtocolConfig::rebroadcast_jitter)},
    };
    m["channel"] = {
        {"propagation_delay", channel_d(&sim::ChannelModel::propagation_delay)},
        {"jitter", channel_d(&sim::ChannelModel::jitter)},
        {"loss_probability", channel_d(&sim::ChannelModel::loss_probability)},
    };
    return m;
  }();
  return g;
}

std::vector<double> parse_values(const std::string &key, const std::string &text)
{
  std::vector<double> out;
  for (const auto &item : split_list(text))
    out.push_back(to_double(key, item));
  if (out.empty())
    throw ConfigError(fmt::format("{}: list is empty", key));
  return out;
}

}  // namespace

std::string_view to_string(SweepKind k)
{
  switch (k) {
    case SweepKind::kSigma: return "sigma";
    case SweepKind::kVelocity: return "velocity";
    case SweepKind::kTraffic: return "traffic";
    case SweepKind::kDensity: return "density";
  }
  return "?";
}

std::string_view to_string(HiaMode m)
{
  switch (m) {
    case HiaMode::kOff: return "off";
    case HiaMode::kOn: return "on";
    case HiaMode::kBoth: return "both";
  }
  return "?";
}

std::optional<SweepKind> parse_sweep(std::string_view s)
{
  const std::string t = lower(trim(s));
  for (SweepKind k : {SweepKind::kSigma, SweepKind::kVelocity, SweepKind::kTraffic,
                      SweepKind::kDensity})
    if (t == to_string(k))
      return k;
  return std::nullopt;
}

std::optional<HiaMode> parse_hia(std::string_view s)
{
  const std::string t = lower(trim(s));
  for (HiaMode m : {HiaMode::kOff, HiaMode::kOn, HiaMode::kBoth})
    if (t == to_string(m))
      return m;
  return std::nullopt;
}

std::vector<double> default_sweep_values(SweepKind k)
{
  switch (k) {
    case SweepKind::kSigma: return {3, 10, 20, 30, 40, 50};
    case SweepKind::kVelocity: return {1, 10, 20};
    case SweepKind::kTraffic: return {5, 10, 20, 30, 40};
    case SweepKind::kDensity: return {75, 100, 150, 200};
  }
  return {};
}

bool sweep_values_from_reference(SweepKind k)
{
  return k == SweepKind::kSigma || k == SweepKind::kVelocity;
}

void apply_preset(ExperimentConfig &cfg, std::string_view name)
{
  if (name != "desk")
    throw ConfigError(fmt::format("unknown preset '{}'", name));
  auto &s = cfg.base.scenario;
  s.nodes = 50;
  s.area = {1000.0, 750.0};
  s.duration = 300.0;
  s.pairs = 5;
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.preset = std::string(name);
}

void apply_sweep_value(sim::SimConfig &cfg, SweepKind kind, double value)
{
  switch (kind) {
    case SweepKind::kSigma:
      cfg.scenario.sigma = value;
      break;
    case SweepKind::kVelocity:
      cfg.scenario.speeds.max = value;
      cfg.scenario.speeds.min = std::min(cfg.scenario.speeds.min, value);
      break;
    case SweepKind::kTraffic:
      cfg.scenario.pairs = static_cast<int>(value);
      break;
    case SweepKind::kDensity:
      cfg.scenario.nodes = static_cast<int>(value);
      break;
  }
}

void ExperimentConfig::validate() const
{
  if (sweep_values.empty())
    throw ConfigError("sweep values must not be empty");
  if (variants.empty())
    throw ConfigError("at least one variant is required");
  if (std::set<Variant>(variants.begin(), variants.end()).size() != variants.size())
    throw ConfigError("variants must be distinct");
  if (seeds.empty())
    throw ConfigError("at least one seed is required");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
    throw ConfigError("seeds must be distinct");
  if (std::set<double>(sweep_values.begin(), sweep_values.end()).size() != sweep_values.size())
    throw ConfigError("sweep values must be distinct");
  try {
    base.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  for (double v : sweep_values) {
    if ((sweep == SweepKind::kTraffic || sweep == SweepKind::kDensity) &&
        v != std::floor(v))
      throw ConfigError(fmt::format("{} sweep values must be integers, got {}",
                                    to_string(sweep), v));
    sim::SimConfig point = base;
    apply_sweep_value(point, sweep, v);
    try {
      point.validate();
    } catch (const std::invalid_argument &e) {
      throw ConfigError(fmt::format("{} = {}: {}", to_string(sweep), v, e.what()));
    }
  }
}

ExperimentConfig parse_config(std::istream &in, std::string_view preset)
{
  ExperimentConfig cfg;
  if (!preset.empty())
    apply_preset(cfg, preset);

  // read_ini only knows whole-line comments; drop trailing "; ..." as well.
  std::stringstream text;
  for (std::string line; std::getline(in, line);) {
    if (const auto semi = line.find(';'); semi != std::string::npos)
      line.erase(semi);
    text << line << '\n';
  }

  pt::ptree tree;
  try {
    pt::read_ini(text, tree);
  } catch (const pt::ini_parser_error &e) {
    throw ConfigError(fmt::format("malformed config (line {}): {}", e.line(), e.message()));
  }

  std::map<SweepKind, std::vector<double>> listed;
  for (const auto &[section, body] : tree) {
    if (!body.data().empty() && body.empty())
      throw ConfigError(fmt::format("key '{}' must be inside a section", section));
    if (section.rfind("sweep.", 0) == 0) {
      const auto kind = parse_sweep(section.substr(6));
      if (!kind)
        throw ConfigError(fmt::format("unknown section [{}]", section));
      for (const auto &[key, node] : body) {
        if (key != "values")
          throw ConfigError(fmt::format("unknown key '{}' in [{}]", key, section));
        listed[*kind] = parse_values(section + "." + key, trim(node.data()));
      }
      continue;
    }
    const auto sec = grammar().find(section);
    if (sec == grammar().end())
      throw ConfigError(fmt::format("unknown section [{}]", section));
    for (const auto &[key, node] : body) {
      const auto setter = sec->second.find(key);
      if (setter == sec->second.end())
        throw ConfigError(fmt::format("unknown key '{}' in [{}]", key, section));
      setter->second(cfg, section + "." + key, trim(node.data()));
    }
  }

  cfg.sweep_values = default_sweep_values(cfg.sweep);
  if (const auto it = listed.find(cfg.sweep); it != listed.end()) {
    cfg.sweep_values = it->second;
    cfg.sweep_values_given = true;
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path, std::string_view preset)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  return parse_config(in, preset);
}

}  // namespace emp::experiment
