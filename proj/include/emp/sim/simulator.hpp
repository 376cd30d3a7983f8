#pragma once

#include "emp/mobility.hpp"
#include "emp/noise.hpp"
#include "emp/routing/agent.hpp"
#include "emp/sim/event_queue.hpp"
#include "emp/sim/metrics.hpp"

#include <memory>
#include <ostream>
#include <vector>

namespace emp::sim {

struct ScenarioConfig
{
  Rect area{2000.0, 1500.0};
  int nodes = 100;
  double duration = 900.0;
  double pause = 0.0;
  SpeedRange speeds{1.0, 20.0};
  double sigma = 20.0;
  double measurement_period = 1.0;
  bool r_diagonal_only = true;
  double q_scale = 2.0;
  int pairs = 10;
  double packet_rate = 4.0;
  int packet_size = 512;
  double drain = 5.0;
  double metrics_period = 10.0;
};

/// Unit-disk channel; the range is the protocol's transmission range.
struct ChannelModel
{
  double propagation_delay = 0.0;
  double jitter = 0.001;  ///< per delivery, uniform in [0, jitter]
  double loss_probability = 0.0;
};

struct SimConfig
{
  ScenarioConfig scenario;
  ChannelModel channel;
  routing::ProtocolConfig protocol;
  std::uint64_t seed = 1;
  /// Keep per-hop LDT, discovery and hello logs for auditing.
  bool record_logs = false;

  /// Throws std::invalid_argument on the first bad parameter.
  void validate() const;
};

struct TraceSinks
{
  std::ostream *events = nullptr;    ///< time,node,event,msg_kind,origin,dest,seq,hop,ret
  std::ostream *mobility = nullptr;  ///< time,node,true_x,true_y,meas_x,meas_y
  std::ostream *filter = nullptr;    ///< time,node,true_x,true_y,meas_x,meas_y,est_x,est_y,rms
};

/// A CBR source/destination pair.
struct TrafficPair
{
  NodeId source = 0;
  NodeId destination = 0;
  double first_packet = 0.0;
};

/// Unit-disk reception followed by an independent loss draw. The draw is only
/// taken when the receiver is in range and loss_probability > 0.
bool channel_admits(Vec2 from, Vec2 to, double range, double loss_probability, RngEngine &rng);

/// Send times of a constant-bit-rate flow over [start, end).
std::vector<double> cbr_schedule(double start, double end, double rate);

/// Deterministic single-threaded simulation of one (config, seed).
class Simulator final : public routing::AgentHost
{
 public:
  explicit Simulator(SimConfig cfg, TraceSinks sinks = {});
  ~Simulator() override;
  Simulator(const Simulator &) = delete;
  Simulator &operator=(const Simulator &) = delete;

  MetricsReport run();

  const std::vector<TrafficPair> &pairs() const { return pairs_; }
  const std::vector<routing::LdtRecord> &ldt_log() const { return ldt_log_; }
  const std::vector<routing::DiscoveryRecord> &discovery_log() const { return discovery_log_; }
  const std::vector<routing::HelloRecord> &hello_log() const { return hello_log_; }
  std::uint64_t loop_detections() const { return loop_detections_; }
  const routing::ProtocolAgent &agent(NodeId id) const { return *agents_.at(id); }

  // AgentHost
  double now() const override { return queue_.now(); }
  void broadcast(NodeId from, routing::ControlMessage msg, double delay) override;
  void unicast(NodeId from, NodeId to, routing::ControlMessage msg) override;
  void send_data(NodeId from, NodeId to, routing::DataPacket pkt) override;
  void schedule(NodeId node, double delay, routing::Timer timer) override;
  void data_delivered(NodeId at, const routing::DataPacket &pkt) override;
  void data_dropped(NodeId at, const routing::DataPacket &pkt,
                    routing::DropReason reason) override;
  void on_ldt(const routing::LdtRecord &r) override;
  void on_discovery(const routing::DiscoveryRecord &r) override;
  void on_hello(const routing::HelloRecord &r) override;
  void on_route_change(NodeId node, NodeId destination) override;
  void on_event(const routing::ProtocolEvent &e) override;

 private:
  void setup();
  void dispatch(const SimEvent &ev);
  void emit_broadcast(NodeId from, const routing::ControlMessage &msg);
  void count_control(routing::MessageKind kind);
  bool channel_delivers(NodeId from, NodeId to);
  double channel_delay();
  void measure_all(double t);
  void hash_event(const SimEvent &ev);

  SimConfig cfg_;
  TraceSinks sinks_;
  EventQueue queue_;
  std::vector<RandomWaypointNode> mobility_;
  std::vector<RngEngine> noise_rng_;
  std::vector<std::unique_ptr<routing::ProtocolAgent>> agents_;
  std::vector<TrafficPair> pairs_;
  std::vector<std::size_t> pair_sent_;
  RngEngine channel_rng_;
  MetricsAccumulator acc_;
  std::vector<SeriesPoint> series_;
  std::uint64_t next_packet_id_ = 0;
  std::uint64_t data_in_channel_ = 0;
  std::uint64_t loop_detections_ = 0;
  std::uint64_t event_count_ = 0;
  std::uint64_t trace_hash_ = 1469598103934665603ULL;
  double traffic_end_ = 0.0;
  std::vector<routing::LdtRecord> ldt_log_;
  std::vector<routing::DiscoveryRecord> discovery_log_;
  std::vector<routing::HelloRecord> hello_log_;
};

}  // namespace emp::sim
