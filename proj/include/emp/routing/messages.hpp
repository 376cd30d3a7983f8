#pragma once

#include "emp/link_prediction.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace emp::routing {

using NodeId = std::uint32_t;

enum class MessageKind : std::uint8_t
{
  kRreq,
  kRrep,
  kRerr,
  kHello,
};

std::string_view to_string(MessageKind kind);

struct UnreachableDestination
{
  NodeId destination = 0;
  std::uint32_t seq_no = 0;
};

/// Control packet. `sender` is the per-hop transmitter; `origin` and
/// `destination` are end-to-end. Location fields are present only for the
/// prediction variants.
struct ControlMessage
{
  MessageKind kind = MessageKind::kHello;
  NodeId sender = 0;
  NodeId origin = 0;
  NodeId destination = 0;
  std::uint32_t seq_no = 0;
  std::uint32_t dest_seq = 0;
  bool dest_seq_known = false;
  int hop_count = 1;
  double ret = 0.0;
  std::optional<NodeKinematicEstimate> sender_location;
  std::uint32_t rreq_id = 0;
  double lifetime = 0.0;
  /// Sender's current hello period, so neighbors can time it out correctly.
  double hello_interval = 0.0;
  std::vector<UnreachableDestination> unreachable;
};

struct DataPacket
{
  std::uint64_t id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  double created = 0.0;
  int size_bytes = 512;
  int hops = 0;
};

}  // namespace emp::routing
