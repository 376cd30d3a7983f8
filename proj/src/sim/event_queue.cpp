#include "emp/sim/event_queue.hpp"

#include <cmath>
#include <stdexcept>

namespace emp::sim {

std::uint64_t EventQueue::push(double fire_time, EventPayload payload)
{
  if (!(fire_time >= now_) || !std::isfinite(fire_time))
    throw std::logic_error("EventQueue: event scheduled in the past");
  const std::uint64_t seq = next_sequence_++;
  heap_.push(SimEvent{fire_time, seq, std::move(payload)});
  return seq;
}

SimEvent EventQueue::pop()
{
  SimEvent ev = heap_.top();
  heap_.pop();
  if (ev.fire_time < now_)
    throw std::logic_error("EventQueue: causality violation");
  now_ = ev.fire_time;
  return ev;
}

}  // namespace emp::sim
