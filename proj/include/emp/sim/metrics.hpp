#pragma once

#include "emp/routing/protocol_config.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace emp::sim {

struct MetricsAccumulator
{
  std::uint64_t data_generated = 0;
  std::uint64_t data_delivered = 0;
  std::uint64_t control_transmissions = 0;
  std::array<std::uint64_t, 4> control_by_kind{};  ///< indexed by MessageKind
  std::uint64_t dropped_queue = 0;
  std::uint64_t dropped_no_route = 0;
  std::uint64_t dropped_loss = 0;
};

struct DeliveryMetrics
{
  double pdr = 0.0;
  double nrl = 0.0;  ///< +inf when nothing was delivered
};

/// pdr = delivered / generated; nrl = control transmissions / delivered.
/// Throws std::domain_error when nothing was generated.
DeliveryMetrics compute_metrics(const MetricsAccumulator &acc);

struct SeriesPoint
{
  double time = 0.0;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t control_tx = 0;
};

struct MetricsReport
{
  routing::Variant variant = routing::Variant::kAodv;
  bool hia = false;
  double sigma = 0.0;
  double v_max = 0.0;
  int pairs = 0;
  int nodes = 0;
  std::uint64_t seed = 0;
  double pdr = 0.0;
  double nrl = 0.0;
  MetricsAccumulator counts;
  std::uint64_t in_flight_at_end = 0;
  std::uint64_t hello_transmissions = 0;
  std::uint64_t discoveries = 0;
  std::uint64_t risky_discards = 0;
  std::uint64_t loop_detections = 0;
  std::uint64_t malformed = 0;
  double simulated_seconds = 0.0;
  std::uint64_t event_count = 0;
  std::uint64_t trace_hash = 0;
  std::vector<SeriesPoint> series;
};

/// Column names of the per-run CSV row.
std::string report_csv_header();
/// One CSV row (no trailing newline); fixed formatting so equal reports give
/// equal bytes.
std::string report_csv_row(const MetricsReport &r);
/// Formats +inf as "inf", otherwise fixed 6 decimals.
std::string format_metric(double v);

}  // namespace emp::sim
