#include "emp/sim/simulator.hpp"

#include <cmath>
#include <cstring>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <random>
#include <set>
#include <stdexcept>

namespace emp::sim {
namespace {

using routing::ControlMessage;
using routing::DataPacket;
using routing::MessageKind;

constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t &h, std::uint64_t v)
{
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFFu;
    h *= kFnvPrime;
  }
}

std::uint64_t bits_of(double d)
{
  std::uint64_t b;
  std::memcpy(&b, &d, sizeof b);
  return b;
}

}  // namespace

void SimConfig::validate() const
{
  auto require = [](bool ok, const char *what) {
    if (!ok)
      throw std::invalid_argument(what);
  };
  const ScenarioConfig &s = scenario;
  validate_rwp(s.area, s.speeds);
  require(s.nodes >= 2, "nodes must be >= 2");
  require(s.duration > 0.0, "duration must be > 0");
  require(s.pause >= 0.0, "pause must be >= 0");
  require(s.sigma >= 0.0, "sigma must be >= 0");
  require(s.measurement_period > 0.0, "measurement_period must be > 0");
  require(s.q_scale >= 0.0, "q_scale must be >= 0");
  require(s.pairs >= 1, "pairs must be >= 1");
  require(static_cast<long>(s.pairs) <= static_cast<long>(s.nodes) * (s.nodes - 1),
          "pairs exceeds the number of ordered node pairs");
  require(s.packet_rate > 0.0, "packet_rate must be > 0");
  require(s.packet_size > 0, "packet_size must be > 0");
  require(s.drain >= 0.0, "drain must be >= 0");
  require(s.metrics_period > 0.0, "metrics_period must be > 0");
  require(channel.propagation_delay >= 0.0, "propagation_delay must be >= 0");
  require(channel.jitter >= 0.0, "jitter must be >= 0");
  require(channel.loss_probability >= 0.0 && channel.loss_probability <= 1.0,
          "loss_probability must be in [0, 1]");
  protocol.validate();
}

bool channel_admits(Vec2 from, Vec2 to, double range, double loss_probability, RngEngine &rng)
{
  if (!link_connected(from, to, range))
    return false;
  if (loss_probability > 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < loss_probability)
      return false;
  }
  return true;
}

std::vector<double> cbr_schedule(double start, double end, double rate)
{
  if (!(rate > 0.0))
    throw std::invalid_argument("cbr_schedule: rate must be positive");
  std::vector<double> times;
  for (std::uint64_t k = 0;; ++k) {
    const double t = start + static_cast<double>(k) / rate;
    if (t >= end)
      break;
    times.push_back(t);
  }
  return times;
}

Simulator::Simulator(SimConfig cfg, TraceSinks sinks)
    : cfg_(std::move(cfg)),
      sinks_(sinks),
      channel_rng_(make_stream(cfg_.seed, 0, StreamKind::kChannel))
{
  cfg_.validate();
  setup();
}

Simulator::~Simulator() = default;

void Simulator::setup()
{
  const ScenarioConfig &s = cfg_.scenario;
  const routing::Variant variant = cfg_.protocol.variant;
  const double sigma = variant == routing::Variant::kEmpWo ? 0.0 : s.sigma;
  const FilterModel model =
      FilterModel::from_sigma(sigma, s.measurement_period, s.r_diagonal_only, s.q_scale);

  mobility_.reserve(s.nodes);
  for (int i = 0; i < s.nodes; ++i) {
    const auto id = static_cast<std::uint64_t>(i);
    mobility_.emplace_back(s.area, s.speeds, s.pause,
                           make_stream(cfg_.seed, id, StreamKind::kMobility));
    noise_rng_.push_back(make_stream(cfg_.seed, id, StreamKind::kNoise));
    agents_.push_back(std::make_unique<routing::ProtocolAgent>(
        static_cast<NodeId>(i), cfg_.protocol, model, *this,
        make_stream(cfg_.seed, id, StreamKind::kProtocol)));
  }

  RngEngine traffic = make_stream(cfg_.seed, 0, StreamKind::kTraffic);
  std::uniform_int_distribution<int> pick(0, s.nodes - 1);
  std::uniform_real_distribution<double> offset(0.0, 1.0 / s.packet_rate);
  std::set<std::pair<NodeId, NodeId>> used;
  while (static_cast<int>(pairs_.size()) < s.pairs) {
    const auto src = static_cast<NodeId>(pick(traffic));
    const auto dst = static_cast<NodeId>(pick(traffic));
    if (src == dst || !used.insert({src, dst}).second)
      continue;
    pairs_.push_back({src, dst, offset(traffic)});
  }
  pair_sent_.assign(pairs_.size(), 0);
  traffic_end_ = s.duration;
}

MetricsReport Simulator::run()
{
  const ScenarioConfig &s = cfg_.scenario;
  const double end = s.duration + s.drain;

  measure_all(0.0);
  for (auto &a : agents_)
    a->start();
  for (std::size_t i = 0; i < mobility_.size(); ++i)
    queue_.push(mobility_[i].next_event_time(), MobilityTick{static_cast<NodeId>(i)});
  queue_.push(s.measurement_period, MeasurementTick{});
  queue_.push(s.metrics_period, MetricsTick{});
  for (std::size_t p = 0; p < pairs_.size(); ++p)
    if (pairs_[p].first_packet < traffic_end_)
      queue_.push(pairs_[p].first_packet, TrafficTick{p});

  while (!queue_.empty() && queue_.next_time() <= end) {
    const SimEvent ev = queue_.pop();
    ++event_count_;
    hash_event(ev);
    dispatch(ev);
  }

  MetricsReport r;
  r.variant = cfg_.protocol.variant;
  r.hia = cfg_.protocol.hia_enabled;
  r.sigma = s.sigma;
  r.v_max = s.speeds.max;
  r.pairs = s.pairs;
  r.nodes = s.nodes;
  r.seed = cfg_.seed;
  r.counts = acc_;
  const DeliveryMetrics m = compute_metrics(acc_);
  r.pdr = m.pdr;
  r.nrl = m.nrl;
  std::uint64_t queued = 0;
  for (const auto &a : agents_) {
    queued += a->queued_packets();
    const routing::AgentCounters &c = a->counters();
    r.hello_transmissions += c.hello_sent;
    r.discoveries += c.rreq_originated;
    r.risky_discards += c.rreq_risky_discards;
    r.malformed += c.malformed;
  }
  r.in_flight_at_end = queued + data_in_channel_;
  const std::uint64_t accounted = acc_.data_delivered + acc_.dropped_queue +
                                  acc_.dropped_no_route + acc_.dropped_loss +
                                  r.in_flight_at_end;
  if (accounted != acc_.data_generated)
    throw std::logic_error(fmt::format(
        "packet conservation violated: generated {} but accounted for {}",
        acc_.data_generated, accounted));
  r.loop_detections = loop_detections_;
  r.simulated_seconds = end;
  r.event_count = event_count_;
  r.trace_hash = trace_hash_;
  r.series = series_;
  return r;
}

void Simulator::hash_event(const SimEvent &ev)
{
  fnv_mix(trace_hash_, bits_of(ev.fire_time));
  fnv_mix(trace_hash_, ev.payload.index());
  std::visit(
      [this](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, DeliverControl>) {
          fnv_mix(trace_hash_, p.to);
          fnv_mix(trace_hash_, p.msg.sender);
          fnv_mix(trace_hash_, static_cast<std::uint64_t>(p.msg.kind));
          fnv_mix(trace_hash_, bits_of(p.msg.ret));
        } else if constexpr (std::is_same_v<T, DeliverData>) {
          fnv_mix(trace_hash_, p.to);
          fnv_mix(trace_hash_, p.pkt.id);
        } else if constexpr (std::is_same_v<T, TimerFire>) {
          fnv_mix(trace_hash_, p.node);
          fnv_mix(trace_hash_, static_cast<std::uint64_t>(p.timer.kind));
        } else if constexpr (std::is_same_v<T, EmitBroadcast>) {
          fnv_mix(trace_hash_, p.from);
        }
      },
      ev.payload);
}

void Simulator::dispatch(const SimEvent &ev)
{
  std::visit(
      [&](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, DeliverControl>) {
          agents_[p.to]->receive(p.msg);
        } else if constexpr (std::is_same_v<T, DeliverData>) {
          --data_in_channel_;
          agents_[p.to]->receive_data(p.pkt, p.from);
        } else if constexpr (std::is_same_v<T, EmitBroadcast>) {
          emit_broadcast(p.from, p.msg);
        } else if constexpr (std::is_same_v<T, TimerFire>) {
          agents_[p.node]->on_timer(p.timer);
        } else if constexpr (std::is_same_v<T, TrafficTick>) {
          const TrafficPair &pair = pairs_[p.pair];
          DataPacket pkt;
          pkt.id = next_packet_id_++;
          pkt.source = pair.source;
          pkt.destination = pair.destination;
          pkt.created = ev.fire_time;
          pkt.size_bytes = cfg_.scenario.packet_size;
          ++acc_.data_generated;
          const std::size_t k = ++pair_sent_[p.pair];
          const double next =
              pair.first_packet + static_cast<double>(k) / cfg_.scenario.packet_rate;
          if (next < traffic_end_)
            queue_.push(next, TrafficTick{p.pair});
          agents_[pair.source]->originate_data(pkt);
        } else if constexpr (std::is_same_v<T, MobilityTick>) {
          RandomWaypointNode &node = mobility_[p.node];
          const KinematicState st = node.state_at(ev.fire_time);
          if (sinks_.mobility)
            fmt::print(*sinks_.mobility, "{:.6f},{},{:.6f},{:.6f},,\n", ev.fire_time, p.node,
                       st.position.x, st.position.y);
          const double next = node.next_event_time();
          if (next > ev.fire_time)
            queue_.push(next, MobilityTick{p.node});
        } else if constexpr (std::is_same_v<T, MeasurementTick>) {
          measure_all(ev.fire_time);
          queue_.push(ev.fire_time + cfg_.scenario.measurement_period, MeasurementTick{});
        } else if constexpr (std::is_same_v<T, MetricsTick>) {
          series_.push_back({ev.fire_time, acc_.data_generated, acc_.data_delivered,
                             acc_.control_transmissions});
          queue_.push(ev.fire_time + cfg_.scenario.metrics_period, MetricsTick{});
        }
      },
      ev.payload);
}

void Simulator::measure_all(double t)
{
  const routing::Variant variant = cfg_.protocol.variant;
  const NoiseModel noise{variant == routing::Variant::kEmpWo ? 0.0 : cfg_.scenario.sigma};
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const KinematicState truth = mobility_[i].state_at(t);
    const Measurement fix = measure_position(truth, noise, noise_rng_[i]);
    agents_[i]->on_fix(fix);
    if (sinks_.mobility)
      fmt::print(*sinks_.mobility, "{:.6f},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", t, i,
                 truth.position.x, truth.position.y, fix.measured_position.x,
                 fix.measured_position.y);
    if (sinks_.filter) {
      const NodeKinematicEstimate est = agents_[i]->tracker().filtered_estimate(t);
      fmt::print(*sinks_.filter, "{:.6f},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n",
                 t, i, truth.position.x, truth.position.y, fix.measured_position.x,
                 fix.measured_position.y, est.position.x, est.position.y, est.rms_error);
    }
  }
}

// ---------------------------------------------------------------------------
// Channel

bool Simulator::channel_delivers(NodeId from, NodeId to)
{
  const double t = now();
  return channel_admits(mobility_[from].position_at(t), mobility_[to].position_at(t),
                        cfg_.protocol.range, cfg_.channel.loss_probability, channel_rng_);
}

double Simulator::channel_delay()
{
  double d = cfg_.channel.propagation_delay;
  if (cfg_.channel.jitter > 0.0) {
    std::uniform_real_distribution<double> u(0.0, cfg_.channel.jitter);
    d += u(channel_rng_);
  }
  return d;
}

void Simulator::count_control(MessageKind kind)
{
  ++acc_.control_transmissions;
  ++acc_.control_by_kind[static_cast<std::size_t>(kind)];
}

void Simulator::broadcast(NodeId from, ControlMessage msg, double delay)
{
  if (delay > 0.0) {
    queue_.push(now() + delay, EmitBroadcast{from, std::move(msg)});
    return;
  }
  emit_broadcast(from, msg);
}

void Simulator::emit_broadcast(NodeId from, const ControlMessage &msg)
{
  count_control(msg.kind);
  for (std::size_t j = 0; j < agents_.size(); ++j) {
    const auto to = static_cast<NodeId>(j);
    if (to == from || !channel_delivers(from, to))
      continue;
    queue_.push(now() + channel_delay(), DeliverControl{to, msg});
  }
}

void Simulator::unicast(NodeId from, NodeId to, ControlMessage msg)
{
  count_control(msg.kind);
  if (!channel_delivers(from, to))
    return;
  queue_.push(now() + channel_delay(), DeliverControl{to, std::move(msg)});
}

void Simulator::send_data(NodeId from, NodeId to, DataPacket pkt)
{
  if (!channel_delivers(from, to)) {
    data_dropped(from, pkt, routing::DropReason::kLinkLoss);
    return;
  }
  ++data_in_channel_;
  queue_.push(now() + channel_delay(), DeliverData{to, from, std::move(pkt)});
}

void Simulator::schedule(NodeId node, double delay, routing::Timer timer)
{
  queue_.push(now() + delay, TimerFire{node, timer});
}

void Simulator::data_delivered(NodeId, const DataPacket &)
{
  ++acc_.data_delivered;
}

void Simulator::data_dropped(NodeId, const DataPacket &, routing::DropReason reason)
{
  switch (reason) {
    case routing::DropReason::kQueueOverflow: ++acc_.dropped_queue; break;
    case routing::DropReason::kNoRoute: ++acc_.dropped_no_route; break;
    case routing::DropReason::kLinkLoss: ++acc_.dropped_loss; break;
  }
}

// ---------------------------------------------------------------------------
// Observers

void Simulator::on_ldt(const routing::LdtRecord &r)
{
  if (cfg_.record_logs)
    ldt_log_.push_back(r);
}

void Simulator::on_discovery(const routing::DiscoveryRecord &r)
{
  if (cfg_.record_logs)
    discovery_log_.push_back(r);
}

void Simulator::on_hello(const routing::HelloRecord &r)
{
  if (cfg_.record_logs)
    hello_log_.push_back(r);
}

void Simulator::on_route_change(NodeId node, NodeId destination)
{
  // Follow active next hops toward the destination; revisiting a node is a loop.
  const double t = now();
  std::vector<bool> visited(agents_.size(), false);
  NodeId cur = node;
  visited[cur] = true;
  while (cur != destination) {
    const routing::RouteEntry *e = agents_[cur]->table().active(destination, t);
    if (!e)
      return;
    cur = e->next_hop;
    if (visited[cur]) {
      ++loop_detections_;
      return;
    }
    visited[cur] = true;
  }
}

void Simulator::on_event(const routing::ProtocolEvent &e)
{
  if (!sinks_.events)
    return;
  fmt::print(*sinks_.events, "{:.6f},{},{},{},{},{},{},{},{}\n", e.time, e.node, e.event,
             routing::to_string(e.kind), e.origin, e.destination, e.seq, e.hop,
             format_metric(e.ret));
}

}  // namespace emp::sim
