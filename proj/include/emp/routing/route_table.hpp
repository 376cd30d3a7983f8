#pragma once

#include "emp/link_prediction.hpp"
#include "emp/routing/messages.hpp"

#include <map>
#include <optional>
#include <vector>

namespace emp::routing {

enum class RouteState
{
  kValid,
  kInvalid,
};

struct RouteEntry
{
  NodeId destination = 0;
  NodeId next_hop = 0;
  std::uint32_t seq_no = 0;
  int hop_count = 0;
  double ret = kUnbounded;
  double expiry_time = 0.0;
  /// Hard cap from the installed route expiration time; use never extends
  /// the entry past it.
  double ret_deadline = kUnbounded;
  RouteState state = RouteState::kInvalid;

  bool active(double now) const { return state == RouteState::kValid && expiry_time > now; }
};

/// Candidate route offered by a RREQ or RREP.
struct RouteOffer
{
  NodeId destination = 0;
  NodeId next_hop = 0;
  std::uint32_t seq_no = 0;
  int hop_count = 0;
  double ret = kUnbounded;
  double lifetime = 0.0;      ///< soft expiry, refreshed by use
  double ret_deadline = kUnbounded;  ///< absolute hard cap
};

class RoutingTable
{
 public:
  /// Installs the offer when it is fresher (higher seq, or equal seq and
  /// fewer hops) or when the current entry is not active. Returns true if the
  /// entry changed.
  bool offer(const RouteOffer &o, double now);

  const RouteEntry *find(NodeId dest) const;
  const RouteEntry *active(NodeId dest, double now) const;

  /// Extends an active entry to min(now + timeout, ret_deadline).
  void refresh(NodeId dest, double now, double timeout);

  /// Invalidates active routes whose next hop is `neighbor`; bumps their
  /// sequence numbers and returns them.
  std::vector<UnreachableDestination> invalidate_via(NodeId neighbor, double now);

  /// Invalidates dest if its active route goes through `via`.
  std::optional<UnreachableDestination> invalidate_if_via(NodeId dest, NodeId via,
                                                          std::uint32_t seq, double now);

  bool has_active(double now) const;
  std::vector<NodeId> active_next_hops(double now) const;

  const std::map<NodeId, RouteEntry> &entries() const { return entries_; }

 private:
  std::map<NodeId, RouteEntry> entries_;
};

}  // namespace emp::routing
