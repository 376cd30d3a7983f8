#include "emp/routing/route_table.hpp"

#include <algorithm>

namespace emp::routing {

bool RoutingTable::offer(const RouteOffer &o, double now)
{
  auto it = entries_.find(o.destination);
  if (it != entries_.end() && it->second.active(now)) {
    const RouteEntry &cur = it->second;
    const bool fresher = o.seq_no > cur.seq_no ||
                         (o.seq_no == cur.seq_no && o.hop_count < cur.hop_count);
    if (!fresher)
      return false;
  } else if (it != entries_.end() && o.seq_no < it->second.seq_no) {
    // Never step a destination's sequence number backwards.
    return false;
  }
  RouteEntry e;
  e.destination = o.destination;
  e.next_hop = o.next_hop;
  e.seq_no = o.seq_no;
  e.hop_count = o.hop_count;
  e.ret = o.ret;
  e.ret_deadline = o.ret_deadline;
  e.expiry_time = std::min(now + o.lifetime, o.ret_deadline);
  e.state = RouteState::kValid;
  entries_[o.destination] = e;
  return true;
}

const RouteEntry *RoutingTable::find(NodeId dest) const
{
  auto it = entries_.find(dest);
  return it == entries_.end() ? nullptr : &it->second;
}

const RouteEntry *RoutingTable::active(NodeId dest, double now) const
{
  const RouteEntry *e = find(dest);
  return e && e->active(now) ? e : nullptr;
}

void RoutingTable::refresh(NodeId dest, double now, double timeout)
{
  auto it = entries_.find(dest);
  if (it == entries_.end() || !it->second.active(now))
    return;
  RouteEntry &e = it->second;
  e.expiry_time = std::max(e.expiry_time, std::min(now + timeout, e.ret_deadline));
}

std::vector<UnreachableDestination> RoutingTable::invalidate_via(NodeId neighbor, double now)
{
  std::vector<UnreachableDestination> lost;
  for (auto &[dest, e] : entries_) {
    if (e.next_hop != neighbor || e.state != RouteState::kValid)
      continue;
    const bool was_active = e.active(now);
    e.state = RouteState::kInvalid;
    ++e.seq_no;
    if (was_active)
      lost.push_back({dest, e.seq_no});
  }
  return lost;
}

std::optional<UnreachableDestination> RoutingTable::invalidate_if_via(NodeId dest, NodeId via,
                                                                      std::uint32_t seq,
                                                                      double now)
{
  auto it = entries_.find(dest);
  if (it == entries_.end() || !it->second.active(now) || it->second.next_hop != via)
    return std::nullopt;
  RouteEntry &e = it->second;
  e.state = RouteState::kInvalid;
  e.seq_no = std::max(e.seq_no, seq);
  return UnreachableDestination{dest, e.seq_no};
}

bool RoutingTable::has_active(double now) const
{
  return std::any_of(entries_.begin(), entries_.end(),
                     [now](const auto &kv) { return kv.second.active(now); });
}

std::vector<NodeId> RoutingTable::active_next_hops(double now) const
{
  std::vector<NodeId> hops;
  for (const auto &[dest, e] : entries_)
    if (e.active(now))
      hops.push_back(e.next_hop);
  std::sort(hops.begin(), hops.end());
  hops.erase(std::unique(hops.begin(), hops.end()), hops.end());
  return hops;
}

}  // namespace emp::routing
