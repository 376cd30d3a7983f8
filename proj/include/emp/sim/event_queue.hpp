#pragma once

#include "emp/routing/agent.hpp"

#include <cstdint>
#include <queue>
#include <variant>
#include <vector>

namespace emp::sim {

using routing::NodeId;

struct DeliverControl
{
  NodeId to = 0;
  routing::ControlMessage msg;
};
struct DeliverData
{
  NodeId to = 0;
  NodeId from = 0;
  routing::DataPacket pkt;
};
struct EmitBroadcast
{
  NodeId from = 0;
  routing::ControlMessage msg;
};
struct TimerFire
{
  NodeId node = 0;
  routing::Timer timer;
};
struct TrafficTick
{
  std::size_t pair = 0;
};
struct MobilityTick
{
  NodeId node = 0;
};
struct MeasurementTick
{
};
struct MetricsTick
{
};

using EventPayload = std::variant<DeliverControl, DeliverData, EmitBroadcast, TimerFire,
                                  TrafficTick, MobilityTick, MeasurementTick, MetricsTick>;

struct SimEvent
{
  double fire_time = 0.0;
  std::uint64_t sequence = 0;
  EventPayload payload;
};

/// Min-queue ordered by (fire_time, insertion sequence).
class EventQueue
{
 public:
  /// Throws std::logic_error for events earlier than the current clock.
  std::uint64_t push(double fire_time, EventPayload payload);
  SimEvent pop();
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  double next_time() const { return heap_.top().fire_time; }
  double now() const { return now_; }

 private:
  struct Later
  {
    bool operator()(const SimEvent &a, const SimEvent &b) const
    {
      if (a.fire_time != b.fire_time)
        return a.fire_time > b.fire_time;
      return a.sequence > b.sequence;
    }
  };
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
  std::uint64_t next_sequence_ = 0;
  double now_ = 0.0;
};

}  // namespace emp::sim
