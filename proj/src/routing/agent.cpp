#include "emp/routing/agent.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace emp::routing {
namespace {

bool finite_estimate(const NodeKinematicEstimate &e)
{
  return std::isfinite(e.position.x) && std::isfinite(e.position.y) &&
         std::isfinite(e.velocity.x) && std::isfinite(e.velocity.y) &&
         std::isfinite(e.rms_error) && e.rms_error >= 0.0 && std::isfinite(e.timestamp);
}

}  // namespace

ProtocolAgent::ProtocolAgent(NodeId id, ProtocolConfig cfg, FilterModel filter_model,
                             AgentHost &host, RngEngine rng)
    : id_(id),
      cfg_(std::move(cfg)),
      host_(host),
      rng_(std::move(rng)),
      tracker_(std::move(filter_model)),
      hello_interval_(cfg_.base_hello_interval())
{
  cfg_.validate();
}

void ProtocolAgent::start()
{
  // Desynchronize periodic timers across nodes.
  std::uniform_real_distribution<double> phase(0.0, 1.0);
  host_.schedule(id_, cfg_.base_hello_interval() * phase(rng_), {TimerKind::kHello, id_, 0});
  host_.schedule(id_, cfg_.t_min * phase(rng_), {TimerKind::kNeighborCheck, id_, 0});
}

void ProtocolAgent::on_fix(const Measurement &fix) { tracker_.add_fix(fix); }

NodeKinematicEstimate ProtocolAgent::estimate(double now) const
{
  if (uses_kalman(cfg_.variant))
    return tracker_.filtered_estimate(now);
  return tracker_.raw_estimate(now);
}

std::size_t ProtocolAgent::queued_packets() const
{
  std::size_t n = 0;
  for (const auto &[dest, q] : queues_)
    n += q.size();
  return n;
}

ControlMessage ProtocolAgent::make_message(MessageKind kind, double now) const
{
  ControlMessage m;
  m.kind = kind;
  m.sender = id_;
  m.hello_interval = hello_interval_;
  if (uses_prediction(cfg_.variant) && tracker_.has_fix())
    m.sender_location = estimate(now);
  return m;
}

void ProtocolAgent::log(std::string_view event, const ControlMessage &m, double now)
{
  host_.on_event({now, id_, event, m.kind, m.origin, m.destination, m.seq_no, m.hop_count,
                  m.ret});
}

bool ProtocolAgent::well_formed(const ControlMessage &msg) const
{
  if (msg.sender == id_)
    return false;
  if (!(msg.hello_interval > 0.0) || !std::isfinite(msg.hello_interval))
    return false;
  if (msg.sender_location && !finite_estimate(*msg.sender_location))
    return false;
  switch (msg.kind) {
    case MessageKind::kRreq:
      if (msg.hop_count < 1 || !(msg.ret >= 0.0) || !std::isfinite(msg.ret))
        return false;
      if (uses_prediction(cfg_.variant) && !msg.sender_location)
        return false;
      return true;
    case MessageKind::kRrep:
      return msg.hop_count >= 1 && msg.lifetime >= 0.0 && std::isfinite(msg.lifetime);
    case MessageKind::kRerr:
      return !msg.unreachable.empty();
    case MessageKind::kHello:
      return msg.lifetime > 0.0 && std::isfinite(msg.lifetime);
  }
  return false;
}

void ProtocolAgent::hear(const ControlMessage &msg, double now)
{
  Neighbor &n = neighbors_[msg.sender];
  n.last_heard = now;
  n.interval = msg.kind == MessageKind::kHello ? msg.lifetime : msg.hello_interval;
  if (msg.sender_location)
    n.location = msg.sender_location;
}

void ProtocolAgent::receive(const ControlMessage &msg)
{
  const double now = host_.now();
  if (!well_formed(msg)) {
    ++counters_.malformed;
    log("drop_malformed", msg, now);
    return;
  }
  hear(msg, now);
  switch (msg.kind) {
    case MessageKind::kRreq: handle_rreq(msg, now); break;
    case MessageKind::kRrep: handle_rrep(msg, now); break;
    case MessageKind::kRerr: handle_rerr(msg, now); break;
    case MessageKind::kHello: break;
  }
}

bool ProtocolAgent::install(const RouteOffer &offer, double now)
{
  if (offer.destination == id_)
    return false;
  const bool changed = table_.offer(offer, now);
  if (changed)
    host_.on_route_change(id_, offer.destination);
  return changed;
}

// ---------------------------------------------------------------------------
// Route discovery

void ProtocolAgent::originate_discovery(NodeId dest, double now, int retries)
{
  auto [it, fresh] = discoveries_.try_emplace(dest);
  if (!fresh)
    return;  // already searching
  Discovery &d = it->second;
  d.rreq_id = ++next_rreq_id_;
  d.retries = retries;

  ControlMessage m = make_message(MessageKind::kRreq, now);
  m.origin = id_;
  m.destination = dest;
  m.seq_no = ++own_seq_;
  if (const RouteEntry *e = table_.find(dest)) {
    m.dest_seq = e->seq_no;
    m.dest_seq_known = true;
  }
  m.hop_count = 1;
  m.ret = cfg_.horizon;
  m.rreq_id = d.rreq_id;
  seen_[{id_, d.rreq_id}] = cfg_.horizon;
  ++counters_.rreq_originated;
  log("originate", m, now);
  host_.broadcast(id_, std::move(m), 0.0);

  double wait = cfg_.net_traversal_time() * std::ldexp(1.0, d.retries);
  if (waits_at_destination(cfg_.variant))
    wait += cfg_.t_w;
  host_.schedule(id_, wait, {TimerKind::kDiscoveryTimeout, dest, d.rreq_id});
}

void ProtocolAgent::on_discovery_timeout(NodeId dest, std::uint32_t rreq_id, double now)
{
  auto it = discoveries_.find(dest);
  if (it == discoveries_.end() || it->second.rreq_id != rreq_id)
    return;
  if (it->second.retries < cfg_.rreq_retries) {
    const int retries = it->second.retries + 1;
    discoveries_.erase(it);
    originate_discovery(dest, now, retries);
    return;
  }
  discoveries_.erase(it);
  ++counters_.discovery_failures;
  auto q = queues_.find(dest);
  if (q != queues_.end()) {
    for (const DataPacket &p : q->second)
      host_.data_dropped(id_, p, DropReason::kNoRoute);
    queues_.erase(q);
  }
}

void ProtocolAgent::handle_rreq(const ControlMessage &msg, double now)
{
  if (msg.origin == id_)
    return;
  const RreqKey key{msg.origin, msg.rreq_id};
  const bool is_destination = msg.destination == id_;
  const bool collecting = is_destination && collecting_.contains(key);
  if (seen_.contains(key) && !collecting) {
    ++counters_.rreq_duplicates;
    log("drop_duplicate", msg, now);
    return;
  }

  double ret = msg.ret;
  if (uses_prediction(cfg_.variant)) {
    const NodeKinematicEstimate sender = advance_estimate(*msg.sender_location, now);
    const NodeKinematicEstimate self = estimate(now);
    const LinkForecast f = forecast_link(sender, self, cfg_.range);
    LdtRecord rec{now, msg.origin, msg.rreq_id, msg.sender, id_,
                  cap_duration(f.ldt, cfg_.horizon), f.epsilon, msg.ret, msg.ret, false};
    if (discards_risky(cfg_.variant) && f.risky) {
      rec.discarded = true;
      host_.on_ldt(rec);
      ++counters_.rreq_risky_discards;
      log("drop_risky", msg, now);
      return;
    }
    ret = std::min(msg.ret, rec.ldt);
    rec.ret_out = ret;
    host_.on_ldt(rec);
  }

  if (!collecting)
    seen_[key] = ret;

  if (is_destination) {
    if (!waits_at_destination(cfg_.variant)) {
      host_.on_discovery({now, msg.origin, id_, msg.rreq_id, msg.sender, ret, msg.hop_count, 1,
                          false});
      reply_from_destination(msg.sender, msg.origin, msg.seq_no, msg.hop_count, ret, now);
      return;
    }
    auto [it, fresh] = collecting_.try_emplace(key);
    PendingRreq &p = it->second;
    if (fresh) {
      p.origin = msg.origin;
      p.rreq_id = msg.rreq_id;
      p.origin_seq = msg.seq_no;
      p.deadline = now + cfg_.t_w;
      host_.schedule(id_, cfg_.t_w, {TimerKind::kCollectDeadline, msg.origin, msg.rreq_id});
    }
    ++p.candidates;
    // Longest RET wins; ties go to fewer hops, then to the earlier arrival.
    if (ret == p.best_ret)
      p.tie = true;
    if (ret > p.best_ret || (ret == p.best_ret && msg.hop_count < p.best_hop_count)) {
      if (ret > p.best_ret)
        p.tie = false;
      p.best_ret = ret;
      p.best_reverse_hop = msg.sender;
      p.best_hop_count = msg.hop_count;
    }
    log("collect", msg, now);
    return;
  }

  RouteOffer reverse;
  reverse.destination = msg.origin;
  reverse.next_hop = msg.sender;
  reverse.seq_no = msg.seq_no;
  reverse.hop_count = msg.hop_count;
  reverse.ret = ret;
  reverse.lifetime = cfg_.active_route_timeout;
  install(reverse, now);

  if (!waits_at_destination(cfg_.variant)) {
    const RouteEntry *known = table_.active(msg.destination, now);
    if (known && known->next_hop != msg.sender &&
        (!msg.dest_seq_known || known->seq_no >= msg.dest_seq)) {
      ControlMessage rep = make_message(MessageKind::kRrep, now);
      rep.origin = msg.origin;
      rep.destination = msg.destination;
      rep.seq_no = known->seq_no;
      rep.hop_count = known->hop_count + 1;
      rep.ret = cfg_.horizon;
      rep.lifetime = known->expiry_time - now;
      ++counters_.rrep_sent;
      log("reply_intermediate", rep, now);
      host_.unicast(id_, msg.sender, std::move(rep));
      return;
    }
  }

  ControlMessage fwd = make_message(MessageKind::kRreq, now);
  fwd.origin = msg.origin;
  fwd.destination = msg.destination;
  fwd.seq_no = msg.seq_no;
  fwd.dest_seq = msg.dest_seq;
  fwd.dest_seq_known = msg.dest_seq_known;
  fwd.hop_count = msg.hop_count + 1;
  fwd.ret = ret;
  fwd.rreq_id = msg.rreq_id;
  std::uniform_real_distribution<double> jitter(0.0, cfg_.rebroadcast_jitter);
  const double delay = cfg_.rebroadcast_jitter > 0.0 ? jitter(rng_) : 0.0;
  if (fwd.sender_location)
    fwd.sender_location = estimate(now + delay);
  log("rebroadcast", fwd, now);
  host_.broadcast(id_, std::move(fwd), delay);
}

void ProtocolAgent::conclude_discovery(const RreqKey &key, double now)
{
  auto it = collecting_.find(key);
  if (it == collecting_.end())
    return;
  const PendingRreq p = it->second;
  collecting_.erase(it);
  host_.on_discovery({now, p.origin, id_, p.rreq_id, p.best_reverse_hop, p.best_ret,
                      p.best_hop_count, p.candidates, p.tie});
  reply_from_destination(p.best_reverse_hop, p.origin, p.origin_seq, p.best_hop_count,
                         p.best_ret, now);
}

void ProtocolAgent::reply_from_destination(NodeId reverse_hop, NodeId origin,
                                           std::uint32_t origin_seq, int hop_count, double ret,
                                           double now)
{
  RouteOffer reverse;
  reverse.destination = origin;
  reverse.next_hop = reverse_hop;
  reverse.seq_no = origin_seq;
  reverse.hop_count = hop_count;
  reverse.ret = ret;
  reverse.lifetime = cfg_.active_route_timeout;
  install(reverse, now);

  ControlMessage rep = make_message(MessageKind::kRrep, now);
  rep.origin = origin;
  rep.destination = id_;
  rep.seq_no = ++own_seq_;
  rep.hop_count = 1;
  rep.ret = ret;
  rep.lifetime = uses_prediction(cfg_.variant) ? ret : cfg_.active_route_timeout;
  ++counters_.rrep_sent;
  log("reply", rep, now);
  host_.unicast(id_, reverse_hop, std::move(rep));
}

void ProtocolAgent::handle_rrep(const ControlMessage &msg, double now)
{
  RouteOffer fwd;
  fwd.destination = msg.destination;
  fwd.next_hop = msg.sender;
  fwd.seq_no = msg.seq_no;
  fwd.hop_count = msg.hop_count;
  fwd.ret = msg.ret;
  if (uses_prediction(cfg_.variant)) {
    fwd.lifetime = std::min(cfg_.active_route_timeout, msg.lifetime);
    if (cfg_.ret_hard_deadline)
      fwd.ret_deadline = now + msg.lifetime;
  } else {
    fwd.lifetime = msg.lifetime;
  }
  install(fwd, now);

  if (msg.origin == id_) {
    log("route_found", msg, now);
    discoveries_.erase(msg.destination);
    flush_queue(msg.destination, now);
    return;
  }
  const RouteEntry *back = table_.active(msg.origin, now);
  if (!back) {
    ++counters_.rrep_no_reverse;
    log("drop_no_reverse", msg, now);
    return;
  }
  table_.refresh(msg.origin, now, cfg_.active_route_timeout);
  ControlMessage out = make_message(MessageKind::kRrep, now);
  out.origin = msg.origin;
  out.destination = msg.destination;
  out.seq_no = msg.seq_no;
  out.hop_count = msg.hop_count + 1;
  out.ret = msg.ret;
  out.lifetime = msg.lifetime;
  log("forward_rrep", out, now);
  host_.unicast(id_, back->next_hop, std::move(out));
}

// ---------------------------------------------------------------------------
// Route maintenance

void ProtocolAgent::handle_rerr(const ControlMessage &msg, double now)
{
  std::vector<UnreachableDestination> lost;
  for (const UnreachableDestination &u : msg.unreachable) {
    if (auto hit = table_.invalidate_if_via(u.destination, msg.sender, u.seq_no, now)) {
      lost.push_back(*hit);
      host_.on_route_change(id_, u.destination);
    }
  }
  if (!lost.empty())
    send_rerr(std::move(lost), now);
}

void ProtocolAgent::send_rerr(std::vector<UnreachableDestination> lost, double now)
{
  ControlMessage m = make_message(MessageKind::kRerr, now);
  m.origin = id_;
  m.unreachable = std::move(lost);
  m.destination = m.unreachable.front().destination;
  m.hop_count = 1;
  ++counters_.rerr_sent;
  log("rerr", m, now);
  host_.broadcast(id_, std::move(m), 0.0);
}

double ProtocolAgent::neighbor_timeout(const Neighbor &n) const
{
  const double interval = n.interval > 0.0 ? n.interval : cfg_.base_hello_interval();
  return cfg_.allowed_hello_loss * interval;
}

void ProtocolAgent::lose_neighbors(const std::vector<NodeId> &lost, double now)
{
  std::vector<UnreachableDestination> broken;
  for (NodeId n : lost) {
    neighbors_.erase(n);
    ++counters_.neighbor_losses;
    for (const UnreachableDestination &u : table_.invalidate_via(n, now)) {
      broken.push_back(u);
      host_.on_route_change(id_, u.destination);
    }
  }
  if (!broken.empty())
    send_rerr(std::move(broken), now);
}

void ProtocolAgent::neighbor_check(double now)
{
  std::vector<NodeId> lost;
  for (const auto &[nid, n] : neighbors_)
    if (now - n.last_heard > neighbor_timeout(n))
      lost.push_back(nid);
  if (!lost.empty())
    lose_neighbors(lost, now);
}

double ProtocolAgent::compute_hello_interval(double now) const
{
  const double base = cfg_.base_hello_interval();
  if (!cfg_.hia_enabled || !uses_prediction(cfg_.variant) || !tracker_.has_fix())
    return base;
  const NodeKinematicEstimate self = estimate(now);
  double min_ldt = kUnbounded;
  bool any = false;
  for (NodeId hop : table_.active_next_hops(now)) {
    auto it = neighbors_.find(hop);
    if (it == neighbors_.end() || !it->second.location)
      continue;
    const NodeKinematicEstimate other = advance_estimate(*it->second.location, now);
    min_ldt = std::min(min_ldt, link_duration(self, other, cfg_.range));
    any = true;
  }
  if (!any)
    return base;
  return std::clamp(min_ldt / cfg_.beta, cfg_.t_min, cfg_.hia_max_interval);
}

void ProtocolAgent::hello_tick(double now)
{
  if (!table_.has_active(now)) {
    const double recheck = cfg_.hia_enabled ? cfg_.t_min : cfg_.base_hello_interval();
    host_.schedule(id_, recheck, {TimerKind::kHello, id_, 0});
    return;
  }
  hello_interval_ = compute_hello_interval(now);
  ControlMessage m = make_message(MessageKind::kHello, now);
  m.origin = id_;
  m.destination = id_;
  m.seq_no = own_seq_;
  m.hop_count = 1;
  m.lifetime = hello_interval_;
  ++counters_.hello_sent;
  host_.on_hello({now, id_, hello_interval_});
  last_hello_time_ = now;
  host_.broadcast(id_, std::move(m), 0.0);
  host_.schedule(id_, hello_interval_, {TimerKind::kHello, id_, 0});
}

void ProtocolAgent::on_timer(const Timer &t)
{
  const double now = host_.now();
  switch (t.kind) {
    case TimerKind::kHello: hello_tick(now); break;
    case TimerKind::kNeighborCheck:
      neighbor_check(now);
      host_.schedule(id_, cfg_.t_min, {TimerKind::kNeighborCheck, id_, 0});
      break;
    case TimerKind::kDiscoveryTimeout: on_discovery_timeout(t.node, t.id, now); break;
    case TimerKind::kCollectDeadline: conclude_discovery({t.node, t.id}, now); break;
  }
}

// ---------------------------------------------------------------------------
// Data plane

void ProtocolAgent::originate_data(const DataPacket &pkt)
{
  forward_data(pkt, host_.now(), true);
}

void ProtocolAgent::receive_data(const DataPacket &pkt, NodeId from)
{
  const double now = host_.now();
  if (auto it = neighbors_.find(from); it != neighbors_.end())
    it->second.last_heard = now;
  if (const RouteEntry *back = table_.active(pkt.source, now); back && back->next_hop == from)
    table_.refresh(pkt.source, now, cfg_.active_route_timeout);
  if (pkt.destination == id_) {
    host_.data_delivered(id_, pkt);
    return;
  }
  forward_data(pkt, now, false);
}

void ProtocolAgent::forward_data(DataPacket pkt, double now, bool at_source)
{
  if (const RouteEntry *e = table_.active(pkt.destination, now)) {
    const NodeId next = e->next_hop;
    table_.refresh(pkt.destination, now, cfg_.active_route_timeout);
    ++pkt.hops;
    host_.send_data(id_, next, pkt);
    return;
  }
  if (!at_source) {
    host_.data_dropped(id_, pkt, DropReason::kNoRoute);
    const RouteEntry *stale = table_.find(pkt.destination);
    send_rerr({{pkt.destination, stale ? stale->seq_no + 1 : 0}}, now);
    return;
  }
  auto &q = queues_[pkt.destination];
  if (q.size() >= cfg_.queue_capacity) {
    host_.data_dropped(id_, pkt, DropReason::kQueueOverflow);
  } else {
    q.push_back(pkt);
  }
  originate_discovery(pkt.destination, now);
}

void ProtocolAgent::flush_queue(NodeId dest, double now)
{
  auto it = queues_.find(dest);
  if (it == queues_.end())
    return;
  std::deque<DataPacket> pending = std::move(it->second);
  queues_.erase(it);
  for (DataPacket &p : pending)
    forward_data(std::move(p), now, true);
}

}  // namespace emp::routing
