#pragma once

#include "emp/rng.hpp"
#include "emp/routing/messages.hpp"
#include "emp/routing/protocol_config.hpp"
#include "emp/routing/route_table.hpp"
#include "emp/tracker.hpp"

#include <deque>
#include <map>
#include <set>
#include <utility>

namespace emp::routing {

enum class TimerKind : std::uint8_t
{
  kHello,
  kNeighborCheck,
  kDiscoveryTimeout,  ///< key = (destination, rreq_id)
  kCollectDeadline,   ///< key = (origin, rreq_id)
};

struct Timer
{
  TimerKind kind = TimerKind::kHello;
  NodeId node = 0;
  std::uint32_t id = 0;
};

enum class DropReason
{
  kQueueOverflow,
  kNoRoute,
  kLinkLoss,
};

/// Per-hop LDT evaluation on RREQ reception.
struct LdtRecord
{
  double time = 0.0;
  NodeId origin = 0;
  std::uint32_t rreq_id = 0;
  NodeId from = 0;
  NodeId to = 0;
  double ldt = 0.0;  ///< capped at the horizon
  double epsilon = 0.0;
  double ret_in = 0.0;
  double ret_out = 0.0;
  bool discarded = false;  ///< risky link, RREQ dropped
};

struct DiscoveryRecord
{
  double time = 0.0;
  NodeId origin = 0;
  NodeId destination = 0;
  std::uint32_t rreq_id = 0;
  NodeId reverse_hop = 0;
  double ret = 0.0;
  int hop_count = 0;
  int candidates = 0;
  bool ret_tie = false;  ///< another candidate had the same RET
};

struct HelloRecord
{
  double time = 0.0;
  NodeId node = 0;
  double interval = 0.0;
};

struct ProtocolEvent
{
  double time = 0.0;
  NodeId node = 0;
  std::string_view event;
  MessageKind kind = MessageKind::kHello;
  NodeId origin = 0;
  NodeId destination = 0;
  std::uint32_t seq = 0;
  int hop = 0;
  double ret = 0.0;
};

/// What an agent needs from its environment. The simulator implements it;
/// unit tests substitute a recording fake.
class AgentHost
{
 public:
  virtual ~AgentHost() = default;
  virtual double now() const = 0;
  /// Emits `msg` to every node in range after `delay` seconds.
  virtual void broadcast(NodeId from, ControlMessage msg, double delay) = 0;
  virtual void unicast(NodeId from, NodeId to, ControlMessage msg) = 0;
  virtual void send_data(NodeId from, NodeId to, DataPacket pkt) = 0;
  virtual void schedule(NodeId node, double delay, Timer timer) = 0;
  virtual void data_delivered(NodeId at, const DataPacket &pkt) = 0;
  virtual void data_dropped(NodeId at, const DataPacket &pkt, DropReason reason) = 0;

  virtual void on_ldt(const LdtRecord &) {}
  virtual void on_discovery(const DiscoveryRecord &) {}
  virtual void on_hello(const HelloRecord &) {}
  virtual void on_route_change(NodeId, NodeId /*destination*/) {}
  virtual void on_event(const ProtocolEvent &) {}
};

struct AgentCounters
{
  std::uint64_t rreq_originated = 0;
  std::uint64_t rreq_duplicates = 0;
  std::uint64_t rreq_risky_discards = 0;
  std::uint64_t rrep_sent = 0;
  std::uint64_t rrep_no_reverse = 0;
  std::uint64_t rerr_sent = 0;
  std::uint64_t hello_sent = 0;
  std::uint64_t malformed = 0;
  std::uint64_t neighbor_losses = 0;
  std::uint64_t discovery_failures = 0;
};

/// One node's routing state machine. Driven only through the public entry
/// points below; all output goes through the AgentHost.
class ProtocolAgent
{
 public:
  ProtocolAgent(NodeId id, ProtocolConfig cfg, FilterModel filter_model, AgentHost &host,
                RngEngine rng);

  void start();
  void on_fix(const Measurement &fix);
  void on_timer(const Timer &t);
  void receive(const ControlMessage &msg);
  void receive_data(const DataPacket &pkt, NodeId from);
  /// Application entry point at the traffic source.
  void originate_data(const DataPacket &pkt);

  /// Self estimate used in outgoing messages and LDT computations.
  NodeKinematicEstimate estimate(double now) const;

  NodeId id() const { return id_; }
  const ProtocolConfig &config() const { return cfg_; }
  const RoutingTable &table() const { return table_; }
  const AgentCounters &counters() const { return counters_; }
  const LocationTracker &tracker() const { return tracker_; }
  double current_hello_interval() const { return hello_interval_; }
  std::size_t queued_packets() const;
  bool discovery_pending(NodeId dest) const { return discoveries_.contains(dest); }

  /// Hello period from the HIA rule (or the fixed period when disabled).
  double compute_hello_interval(double now) const;

 private:
  struct Neighbor
  {
    double last_heard = 0.0;
    double interval = 0.0;
    std::optional<NodeKinematicEstimate> location;
  };
  struct Discovery
  {
    std::uint32_t rreq_id = 0;
    int retries = 0;
  };
  struct PendingRreq
  {
    NodeId origin = 0;
    std::uint32_t rreq_id = 0;
    std::uint32_t origin_seq = 0;
    double best_ret = -1.0;
    NodeId best_reverse_hop = 0;
    int best_hop_count = 0;
    double deadline = 0.0;
    int candidates = 0;
    bool tie = false;
  };
  using RreqKey = std::pair<NodeId, std::uint32_t>;

  ControlMessage make_message(MessageKind kind, double now) const;
  void hear(const ControlMessage &msg, double now);
  bool well_formed(const ControlMessage &msg) const;
  void handle_rreq(const ControlMessage &msg, double now);
  void handle_rrep(const ControlMessage &msg, double now);
  void handle_rerr(const ControlMessage &msg, double now);
  void originate_discovery(NodeId dest, double now, int retries = 0);
  void conclude_discovery(const RreqKey &key, double now);
  void reply_from_destination(NodeId reverse_hop, NodeId origin, std::uint32_t origin_seq,
                              int hop_count, double ret, double now);
  void on_discovery_timeout(NodeId dest, std::uint32_t rreq_id, double now);
  void hello_tick(double now);
  void neighbor_check(double now);
  void lose_neighbors(const std::vector<NodeId> &lost, double now);
  void send_rerr(std::vector<UnreachableDestination> lost, double now);
  void forward_data(DataPacket pkt, double now, bool at_source);
  void flush_queue(NodeId dest, double now);
  bool install(const RouteOffer &offer, double now);
  void log(std::string_view event, const ControlMessage &m, double now);
  double neighbor_timeout(const Neighbor &n) const;

  NodeId id_;
  ProtocolConfig cfg_;
  AgentHost &host_;
  RngEngine rng_;
  LocationTracker tracker_;
  RoutingTable table_;
  AgentCounters counters_;

  std::uint32_t own_seq_ = 0;
  std::uint32_t next_rreq_id_ = 0;
  double hello_interval_ = 1.0;
  double last_hello_time_ = -kUnbounded;

  std::map<NodeId, Neighbor> neighbors_;
  std::map<RreqKey, double> seen_;  ///< value: accepted ret
  std::map<RreqKey, PendingRreq> collecting_;
  std::map<NodeId, Discovery> discoveries_;
  std::map<NodeId, std::deque<DataPacket>> queues_;
};

}  // namespace emp::routing
