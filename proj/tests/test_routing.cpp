#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "emp/routing/agent.hpp"

#include <cmath>
#include <vector>

using namespace emp;
using namespace emp::routing;

namespace {

struct Sent
{
  NodeId to;  // broadcast when == kBroadcast
  ControlMessage msg;
  double delay;
};
constexpr NodeId kBroadcast = 0xFFFFFFFF;

class FakeHost final : public AgentHost
{
 public:
  double t = 0.0;
  std::vector<Sent> sent;
  std::vector<std::pair<NodeId, DataPacket>> data;
  std::vector<std::pair<double, Timer>> timers;
  std::vector<DropReason> drops;
  std::vector<DataPacket> delivered;
  std::vector<LdtRecord> ldts;
  std::vector<DiscoveryRecord> discoveries;
  std::vector<HelloRecord> hellos;

  double now() const override { return t; }
  void broadcast(NodeId, ControlMessage msg, double delay) override
  {
    sent.push_back({kBroadcast, std::move(msg), delay});
  }
  void unicast(NodeId, NodeId to, ControlMessage msg) override
  {
    sent.push_back({to, std::move(msg), 0.0});
  }
  void send_data(NodeId, NodeId to, DataPacket pkt) override { data.emplace_back(to, pkt); }
  void schedule(NodeId, double delay, Timer timer) override { timers.emplace_back(delay, timer); }
  void data_delivered(NodeId, const DataPacket &pkt) override { delivered.push_back(pkt); }
  void data_dropped(NodeId, const DataPacket &, DropReason r) override { drops.push_back(r); }
  void on_ldt(const LdtRecord &r) override { ldts.push_back(r); }
  void on_discovery(const DiscoveryRecord &r) override { discoveries.push_back(r); }
  void on_hello(const HelloRecord &r) override { hellos.push_back(r); }

  std::vector<Sent> of_kind(MessageKind k) const
  {
    std::vector<Sent> out;
    for (const auto &s : sent)
      if (s.msg.kind == k)
        out.push_back(s);
    return out;
  }
  const Timer *last_timer(TimerKind k) const
  {
    for (auto it = timers.rbegin(); it != timers.rend(); ++it)
      if (it->second.kind == k)
        return &it->second;
    return nullptr;
  }
};

NodeKinematicEstimate loc(Vec2 p, Vec2 v = {0, 0}, double rms = 0.0, double t = 0.0)
{
  NodeKinematicEstimate e;
  e.position = p;
  e.velocity = v;
  e.rms_error = rms;
  e.timestamp = t;
  return e;
}

ControlMessage rreq(NodeId sender, NodeId origin, NodeId dest, std::uint32_t id, double ret,
                    int hops = 1, std::optional<NodeKinematicEstimate> where = loc({0, 0}))
{
  ControlMessage m;
  m.kind = MessageKind::kRreq;
  m.sender = sender;
  m.origin = origin;
  m.destination = dest;
  m.seq_no = 1;
  m.rreq_id = id;
  m.ret = ret;
  m.hop_count = hops;
  m.hello_interval = 1.0;
  m.sender_location = where;
  return m;
}

ControlMessage rrep(NodeId sender, NodeId origin, NodeId dest, double lifetime, int hops = 1)
{
  ControlMessage m;
  m.kind = MessageKind::kRrep;
  m.sender = sender;
  m.origin = origin;
  m.destination = dest;
  m.seq_no = 5;
  m.hop_count = hops;
  m.ret = lifetime;
  m.lifetime = lifetime;
  m.hello_interval = 1.0;
  return m;
}

ControlMessage hello(NodeId sender, double interval, std::optional<NodeKinematicEstimate> where)
{
  ControlMessage m;
  m.kind = MessageKind::kHello;
  m.sender = sender;
  m.origin = sender;
  m.lifetime = interval;
  m.hello_interval = interval;
  m.sender_location = where;
  return m;
}

ProtocolConfig config(Variant v)
{
  ProtocolConfig c;
  c.variant = v;
  return c;
}

struct Node
{
  FakeHost host;
  ProtocolAgent agent;
  Node(NodeId id, ProtocolConfig cfg, double sigma = 0.0, Vec2 at = {0, 0})
      : agent(id, std::move(cfg), FilterModel::from_sigma(sigma, 1.0), host, RngEngine(id))
  {
    agent.on_fix({at, 0.0});
  }
};

DataPacket packet(NodeId src, NodeId dst, std::uint64_t id = 1)
{
  DataPacket p;
  p.id = id;
  p.source = src;
  p.destination = dst;
  return p;
}

}  // namespace

TEST_CASE("variant names and traits")
{
  CHECK(to_string(Variant::kAodvI) == "AODV-I");
  CHECK(to_string(Variant::kEmpWo) == "EMP-wo");
  CHECK(parse_variant("emp_wo") == Variant::kEmpWo);
  CHECK(parse_variant("AODV-I") == Variant::kAodvI);
  CHECK(parse_variant("mp") == Variant::kMp);
  CHECK_FALSE(parse_variant("DSR").has_value());
  CHECK_FALSE(uses_prediction(Variant::kAodv));
  CHECK(uses_prediction(Variant::kMp));
  CHECK_FALSE(uses_kalman(Variant::kMp));
  CHECK(uses_kalman(Variant::kEmpWo));
  CHECK(discards_risky(Variant::kEmp));
  CHECK_FALSE(discards_risky(Variant::kMp));
}

TEST_CASE("protocol config validation")
{
  ProtocolConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.base_hello_interval() == 1.0);
  c.variant = Variant::kAodvI;
  CHECK(c.base_hello_interval() == 20.0);
  CHECK(c.net_traversal_time() == doctest::Approx(2.8));
  c.beta = 0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.t_min = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.t_w = -0.1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("routing table freshness and expiry")
{
  RoutingTable t;
  RouteOffer o{9, 2, 5, 3, 20.0, 12.0};
  CHECK(t.offer(o, 1.0));
  REQUIRE(t.active(9, 1.0));
  CHECK(t.active(9, 1.0)->expiry_time == doctest::Approx(13.0));
  CHECK_FALSE(t.offer({9, 3, 4, 1, 20.0, 12.0}, 2.0));  // older sequence
  CHECK_FALSE(t.offer({9, 3, 5, 3, 20.0, 12.0}, 2.0));  // same seq, same hops
  CHECK(t.offer({9, 3, 5, 2, 20.0, 12.0}, 2.0));        // same seq, fewer hops
  CHECK(t.active(9, 2.0)->next_hop == 3);
  CHECK_FALSE(t.active(9, 14.5));
  CHECK_FALSE(t.offer({9, 4, 4, 1, 20.0, 12.0}, 15.0));  // never lowers the sequence
  CHECK(t.offer({9, 4, 5, 4, 20.0, 12.0}, 15.0));         // replaces an expired entry

  t.refresh(9, 20.0, 10.0);
  CHECK(t.active(9, 20.0)->expiry_time == doctest::Approx(30.0));
  t.offer({7, 4, 1, 1, 5.0, 10.0, 25.0}, 20.0);
  t.refresh(7, 22.0, 10.0);
  CHECK(t.active(7, 22.0)->expiry_time == doctest::Approx(25.0));

  const auto lost = t.invalidate_via(4, 22.0);
  CHECK(lost.size() == 2);
  CHECK_FALSE(t.has_active(22.0));
  CHECK(t.find(9)->seq_no == 6);
}

TEST_CASE("discovery starts with one RREQ")
{
  for (Variant v : {Variant::kAodv, Variant::kMp, Variant::kEmp}) {
    Node n(1, config(v));
    n.agent.originate_data(packet(1, 9));
    n.agent.originate_data(packet(1, 9, 2));
    const auto rreqs = n.host.of_kind(MessageKind::kRreq);
    REQUIRE(rreqs.size() == 1);
    const ControlMessage &m = rreqs[0].msg;
    CHECK(m.hop_count == 1);
    CHECK(m.ret == 3600.0);
    CHECK(m.origin == 1);
    CHECK(m.destination == 9);
    CHECK(m.sender_location.has_value() == uses_prediction(v));
    CHECK(n.agent.queued_packets() == 2);
    CHECK(n.agent.discovery_pending(9));
  }
}

TEST_CASE("discovery retries then gives up")
{
  ProtocolConfig c = config(Variant::kAodv);
  Node n(1, c);
  n.agent.originate_data(packet(1, 9));
  const auto first = n.host.of_kind(MessageKind::kRreq).back().msg;
  CHECK(n.host.timers.back().first == doctest::Approx(c.net_traversal_time()));
  n.host.t = 3.0;
  n.agent.on_timer(*n.host.last_timer(TimerKind::kDiscoveryTimeout));
  const auto second = n.host.of_kind(MessageKind::kRreq).back().msg;
  CHECK(second.rreq_id != first.rreq_id);
  CHECK(second.seq_no == first.seq_no + 1);
  CHECK(n.host.timers.back().first == doctest::Approx(2.0 * c.net_traversal_time()));
  n.host.t = 9.0;
  n.agent.on_timer(*n.host.last_timer(TimerKind::kDiscoveryTimeout));
  n.host.t = 20.0;
  n.agent.on_timer(*n.host.last_timer(TimerKind::kDiscoveryTimeout));
  CHECK(n.host.of_kind(MessageKind::kRreq).size() == 3);
  CHECK(n.host.drops == std::vector<DropReason>{DropReason::kNoRoute});
  CHECK(n.agent.queued_packets() == 0);
  CHECK_FALSE(n.agent.discovery_pending(9));
}

TEST_CASE("stale discovery timeouts are ignored")
{
  Node n(1, config(Variant::kAodv));
  n.agent.originate_data(packet(1, 9));
  const Timer stale = *n.host.last_timer(TimerKind::kDiscoveryTimeout);
  n.agent.receive(rrep(2, 1, 9, 10.0));
  n.agent.on_timer(stale);
  CHECK(n.host.of_kind(MessageKind::kRreq).size() == 1);
  CHECK(n.host.data.size() == 1);
}

TEST_CASE("duplicate RREQs are dropped")
{
  Node n(1, config(Variant::kMp));
  n.agent.receive(rreq(2, 5, 9, 1, 3600.0));
  n.agent.receive(rreq(3, 5, 9, 1, 3600.0));
  CHECK(n.host.of_kind(MessageKind::kRreq).size() == 1);
  CHECK(n.agent.counters().rreq_duplicates == 1);
}

TEST_CASE("RET is the running minimum of link durations")
{
  Node n(1, config(Variant::kMp));
  n.agent.receive(rreq(2, 5, 9, 1, 40.0, 2, loc({180, 0}, {10, 0})));
  const auto fwd = n.host.of_kind(MessageKind::kRreq);
  REQUIRE(fwd.size() == 1);
  CHECK(fwd[0].msg.ret == doctest::Approx(7.0));
  CHECK(fwd[0].msg.hop_count == 3);
  CHECK(fwd[0].delay >= 0.0);
  CHECK(fwd[0].delay <= 0.01);
  REQUIRE(n.host.ldts.size() == 1);
  CHECK(n.host.ldts[0].ret_in == 40.0);
  CHECK(n.host.ldts[0].ret_out == n.host.ldts[0].ldt);

  n.agent.receive(rreq(2, 5, 9, 2, 3.0, 2, loc({180, 0}, {10, 0})));
  CHECK(n.host.of_kind(MessageKind::kRreq).back().msg.ret == 3.0);
}

TEST_CASE("EMP discards risky links; MP does not")
{
  // Own rms = sigma * sqrt(2) = 22.4 m, sender rms 16.8 m, relative speed 10 m/s:
  // epsilon = 28 / 10 = 2.8 s against an LDT of 1.5 s.
  const double sigma = 22.4 / std::sqrt(2.0);
  const auto risky = rreq(2, 5, 9, 1, 3600.0, 1, loc({235, 0}, {10, 0}, 16.8));
  Node emp(1, config(Variant::kEmp), sigma);
  emp.agent.receive(risky);
  CHECK(emp.host.of_kind(MessageKind::kRreq).empty());
  CHECK(emp.agent.counters().rreq_risky_discards == 1);
  REQUIRE(emp.host.ldts.size() == 1);
  CHECK(emp.host.ldts[0].discarded);
  CHECK(emp.host.ldts[0].ldt == doctest::Approx(1.5));
  CHECK(emp.host.ldts[0].epsilon == doctest::Approx(2.8));
  // The discarded copy does not block a later, safer copy of the same request.
  emp.agent.receive(rreq(3, 5, 9, 1, 3600.0, 1, loc({50, 0}, {1, 0}, 1.0)));
  CHECK(emp.host.of_kind(MessageKind::kRreq).size() == 1);

  Node mp(1, config(Variant::kMp), sigma);
  mp.agent.receive(risky);
  CHECK(mp.host.of_kind(MessageKind::kRreq).size() == 1);
}

TEST_CASE("EMP-wo never sees a risky link")
{
  Node n(1, config(Variant::kEmpWo), 0.0);
  n.agent.receive(rreq(2, 5, 9, 1, 3600.0, 1, loc({249, 0}, {20, 0}, 0.0)));
  CHECK(n.agent.counters().rreq_risky_discards == 0);
  REQUIRE(n.host.ldts.size() == 1);
  CHECK(n.host.ldts[0].epsilon == 0.0);
}

TEST_CASE("destination waits and picks the longest RET")
{
  Node n(9, config(Variant::kMp));
  const auto still = loc({100, 0});
  n.agent.receive(rreq(2, 5, 9, 1, 7.0, 3, still));
  n.agent.receive(rreq(3, 5, 9, 1, 12.0, 4, still));
  n.agent.receive(rreq(4, 5, 9, 1, 9.0, 2, still));
  CHECK(n.host.of_kind(MessageKind::kRrep).empty());
  const Timer *deadline = n.host.last_timer(TimerKind::kCollectDeadline);
  REQUIRE(deadline);
  CHECK(n.host.timers.back().first == doctest::Approx(0.1));
  n.host.t = 0.1;
  n.agent.on_timer(*deadline);
  const auto reps = n.host.of_kind(MessageKind::kRrep);
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].to == 3);
  CHECK(reps[0].msg.ret == 12.0);
  CHECK(reps[0].msg.lifetime == 12.0);
  REQUIRE(n.host.discoveries.size() == 1);
  CHECK(n.host.discoveries[0].candidates == 3);
  CHECK_FALSE(n.host.discoveries[0].ret_tie);
}

TEST_CASE("ties go to fewer hops and are reported")
{
  Node n(9, config(Variant::kEmp));
  n.agent.receive(rreq(2, 5, 9, 1, 12.0, 4, loc({100, 0})));
  n.agent.receive(rreq(3, 5, 9, 1, 12.0, 2, loc({100, 0})));
  n.host.t = 0.1;
  n.agent.on_timer(*n.host.last_timer(TimerKind::kCollectDeadline));
  CHECK(n.host.of_kind(MessageKind::kRrep).at(0).to == 3);
  CHECK(n.host.discoveries.at(0).ret_tie);
}

TEST_CASE("single candidate is chosen regardless of RET")
{
  Node n(9, config(Variant::kMp));
  n.agent.receive(rreq(2, 5, 9, 1, 0.5, 3, loc({100, 0})));
  n.agent.on_timer(*n.host.last_timer(TimerKind::kCollectDeadline));
  CHECK(n.host.of_kind(MessageKind::kRrep).at(0).to == 2);
}

TEST_CASE("AODV destination replies at once")
{
  ProtocolConfig c = config(Variant::kAodv);
  c.t_w = 5.0;
  Node n(9, c);
  n.agent.receive(rreq(2, 5, 9, 1, 3600.0, 3, std::nullopt));
  const auto reps = n.host.of_kind(MessageKind::kRrep);
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].to == 2);
  CHECK(reps[0].msg.lifetime == c.active_route_timeout);
  CHECK(n.host.last_timer(TimerKind::kCollectDeadline) == nullptr);
  n.agent.receive(rreq(3, 5, 9, 1, 3600.0, 2, std::nullopt));
  CHECK(n.host.of_kind(MessageKind::kRrep).size() == 1);
}

TEST_CASE("intermediate replies only for AODV")
{
  Node aodv(1, config(Variant::kAodv));
  aodv.agent.receive(rrep(4, 1, 9, 10.0, 2));  // forward route to 9 via 4
  aodv.agent.receive(rreq(2, 5, 9, 1, 3600.0, 1, std::nullopt));
  const auto reps = aodv.host.of_kind(MessageKind::kRrep);
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].to == 2);
  CHECK(reps[0].msg.hop_count == 3);
  CHECK(aodv.host.of_kind(MessageKind::kRreq).empty());

  Node mp(1, config(Variant::kMp));
  mp.agent.receive(rrep(4, 1, 9, 10.0, 2));
  mp.agent.receive(rreq(2, 5, 9, 1, 3600.0, 1, loc({10, 0})));
  CHECK(mp.host.of_kind(MessageKind::kRrep).empty());
  CHECK(mp.host.of_kind(MessageKind::kRreq).size() == 1);
}

TEST_CASE("RREP installs the forward route and is relayed")
{
  Node n(1, config(Variant::kAodv));
  n.host.t = 3.0;
  n.agent.receive(rreq(2, 5, 9, 1, 3600.0, 1, std::nullopt));  // reverse route to 5
  n.agent.receive(rrep(4, 5, 9, 12.0));
  const RouteEntry *fwd = n.agent.table().active(9, 3.0);
  REQUIRE(fwd);
  CHECK(fwd->expiry_time == doctest::Approx(15.0));
  CHECK(fwd->next_hop == 4);
  const auto relayed = n.host.of_kind(MessageKind::kRrep);
  REQUIRE(relayed.size() == 1);
  CHECK(relayed[0].to == 2);
  CHECK(relayed[0].msg.hop_count == 2);

  n.agent.receive(rrep(4, 6, 9, 12.0));  // no reverse route toward 6
  CHECK(n.agent.counters().rrep_no_reverse == 1);
}

TEST_CASE("prediction variants bound the route lifetime by RET")
{
  Node n(1, config(Variant::kEmp));
  n.agent.receive(rrep(4, 1, 9, 4.0));
  CHECK(n.agent.table().active(9, 0.0)->expiry_time == doctest::Approx(4.0));
  n.agent.receive(rrep(7, 1, 8, 30.0));
  CHECK(n.agent.table().active(8, 0.0)->expiry_time == doctest::Approx(10.0));

  ProtocolConfig hard = config(Variant::kEmp);
  hard.ret_hard_deadline = true;
  Node h(1, hard);
  h.agent.receive(rrep(4, 1, 9, 4.0));
  h.host.t = 3.0;
  h.agent.originate_data(packet(1, 9));
  CHECK(h.agent.table().active(9, 3.0)->expiry_time == doctest::Approx(4.0));
}

TEST_CASE("queued data flushes when the route arrives")
{
  Node n(1, config(Variant::kMp));
  n.agent.originate_data(packet(1, 9, 1));
  n.agent.originate_data(packet(1, 9, 2));
  CHECK(n.host.data.empty());
  n.agent.receive(rrep(4, 1, 9, 20.0));
  REQUIRE(n.host.data.size() == 2);
  CHECK(n.host.data[0].first == 4);
  CHECK(n.host.data[0].second.id == 1);
  CHECK(n.agent.queued_packets() == 0);
}

TEST_CASE("queue overflow drops")
{
  ProtocolConfig c = config(Variant::kAodv);
  c.queue_capacity = 2;
  Node n(1, c);
  for (int i = 0; i < 3; ++i)
    n.agent.originate_data(packet(1, 9, i));
  CHECK(n.host.drops == std::vector<DropReason>{DropReason::kQueueOverflow});
}

TEST_CASE("data forwarding and delivery")
{
  Node n(1, config(Variant::kAodv));
  n.agent.receive_data(packet(5, 1), 2);
  CHECK(n.host.delivered.size() == 1);

  n.agent.receive_data(packet(5, 9), 2);  // no route at an intermediate node
  CHECK(n.host.drops == std::vector<DropReason>{DropReason::kNoRoute});
  CHECK(n.host.of_kind(MessageKind::kRerr).size() == 1);

  n.agent.receive(rrep(4, 1, 9, 10.0));
  n.agent.receive_data(packet(5, 9), 2);
  CHECK(n.host.data.back().first == 4);
  CHECK(n.host.data.back().second.hops == 1);
}

TEST_CASE("losing a neighbor invalidates its routes with one RERR")
{
  Node n(1, config(Variant::kAodv));
  n.agent.start();
  n.agent.receive(rrep(4, 1, 9, 10.0));
  n.agent.receive(rrep(4, 1, 8, 10.0));
  n.agent.receive(rrep(3, 1, 7, 10.0));
  n.host.t = 1.5;
  n.agent.receive(hello(3, 1.0, std::nullopt));
  n.host.t = 2.5;
  n.agent.on_timer({TimerKind::kNeighborCheck, 1, 0});
  const auto rerrs = n.host.of_kind(MessageKind::kRerr);
  REQUIRE(rerrs.size() == 1);
  CHECK(rerrs[0].msg.unreachable.size() == 2);
  CHECK_FALSE(n.agent.table().active(9, 2.5));
  CHECK_FALSE(n.agent.table().active(8, 2.5));
  CHECK(n.agent.table().active(7, 2.5));
  CHECK(n.agent.counters().neighbor_losses == 1);
}

TEST_CASE("RERR handling")
{
  Node n(1, config(Variant::kAodv));
  n.agent.receive(rrep(4, 1, 9, 10.0));
  ControlMessage e;
  e.kind = MessageKind::kRerr;
  e.sender = 6;
  e.hello_interval = 1.0;
  e.unreachable = {{9, 7}, {12, 3}};
  n.agent.receive(e);  // not our next hop: consumed silently
  CHECK(n.host.of_kind(MessageKind::kRerr).empty());
  CHECK(n.agent.table().active(9, 0.0));
  e.sender = 4;
  n.agent.receive(e);
  const auto out = n.host.of_kind(MessageKind::kRerr);
  REQUIRE(out.size() == 1);
  CHECK(out[0].msg.unreachable.size() == 1);
  CHECK(out[0].msg.unreachable[0].destination == 9);
  CHECK_FALSE(n.agent.table().active(9, 0.0));
}

TEST_CASE("malformed messages are counted")
{
  Node n(1, config(Variant::kMp));
  ControlMessage m = rreq(2, 5, 9, 1, 3600.0, 1, std::nullopt);  // missing location
  n.agent.receive(m);
  m = rreq(2, 5, 9, 1, std::nan(""), 1, loc({1, 1}));
  n.agent.receive(m);
  m = rreq(1, 5, 9, 1, 10.0);  // from ourselves
  n.agent.receive(m);
  CHECK(n.agent.counters().malformed == 3);
  CHECK(n.host.of_kind(MessageKind::kRreq).empty());
}

TEST_CASE("hello intervals")
{
  SUBCASE("fixed periods")
  {
    Node aodv(1, config(Variant::kAodv));
    Node aodv_i(1, config(Variant::kAodvI));
    CHECK(aodv.agent.current_hello_interval() == 1.0);
    CHECK(aodv_i.agent.current_hello_interval() == 20.0);
  }
  SUBCASE("adaptive interval from the shortest active link")
  {
    ProtocolConfig c = config(Variant::kEmp);
    c.hia_enabled = true;
    Node n(1, c, 0.0);
    n.agent.receive(hello(2, 1.0, loc({210, 0}, {1, 0})));
    n.agent.receive(rreq(2, 2, 9, 1, 3600.0, 1, loc({210, 0}, {1, 0})));  // route to 2 via 2
    CHECK(n.agent.compute_hello_interval(0.0) == doctest::Approx(10.0));

    Node m(1, c, 0.0);
    m.agent.receive(rreq(2, 2, 9, 1, 3600.0, 1, loc({240, 0}, {5, 0})));
    CHECK(m.agent.compute_hello_interval(0.0) == 1.0);

    c.hia_enabled = false;
    Node off(1, c, 0.0);
    off.agent.receive(rreq(2, 2, 9, 1, 3600.0, 1, loc({210, 0}, {1, 0})));
    CHECK(off.agent.compute_hello_interval(0.0) == 1.0);
  }
  SUBCASE("hellos need an active route")
  {
    Node n(1, config(Variant::kAodv));
    n.agent.on_timer({TimerKind::kHello, 1, 0});
    CHECK(n.host.of_kind(MessageKind::kHello).empty());
    n.agent.receive(rrep(4, 1, 9, 10.0));
    n.agent.on_timer({TimerKind::kHello, 1, 0});
    const auto h = n.host.of_kind(MessageKind::kHello);
    REQUIRE(h.size() == 1);
    CHECK(h[0].msg.lifetime == 1.0);
    CHECK(n.host.hellos.at(0).interval == 1.0);
  }
}

TEST_CASE("neighbor timeout follows the advertised interval")
{
  Node n(1, config(Variant::kEmp));
  n.agent.receive(rrep(4, 1, 9, 10.0));
  n.agent.receive(hello(4, 8.0, loc({10, 0})));
  n.host.t = 15.0;
  n.agent.on_timer({TimerKind::kNeighborCheck, 1, 0});
  CHECK(n.agent.counters().neighbor_losses == 0);
  n.host.t = 16.5;
  n.agent.on_timer({TimerKind::kNeighborCheck, 1, 0});
  CHECK(n.agent.counters().neighbor_losses == 1);
}
