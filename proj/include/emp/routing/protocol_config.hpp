#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace emp::routing {

enum class Variant
{
  kAodv,
  kAodvI,  ///< AODV with a long fixed hello period
  kMp,     ///< prediction from raw fixes
  kEmp,    ///< Kalman-corrected prediction plus risky-link discard
  kEmpWo,  ///< EMP fed with error-free locations
};

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

bool uses_prediction(Variant v);
bool uses_kalman(Variant v);
bool discards_risky(Variant v);
inline bool waits_at_destination(Variant v) { return uses_prediction(v); }

struct ProtocolConfig
{
  Variant variant = Variant::kAodv;
  bool hia_enabled = false;
  double hello_interval = 1.0;
  double long_hello_interval = 20.0;  ///< hello period of AODV-I
  double t_min = 1.0;
  double beta = 4.0;
  double hia_max_interval = 20.0;
  double t_w = 0.1;
  int allowed_hello_loss = 2;
  double range = 250.0;
  double active_route_timeout = 10.0;
  /// MP/EMP: when set, the advertised RET is a hard deadline that use cannot
  /// extend; otherwise it only bounds the initial route lifetime.
  bool ret_hard_deadline = false;
  double horizon = 3600.0;  ///< wire encoding of an unbounded duration
  int rreq_retries = 2;
  double node_traversal_time = 0.04;
  int net_diameter = 35;
  std::size_t queue_capacity = 64;
  double rebroadcast_jitter = 0.01;

  /// Fixed hello period of the variant (before HIA).
  double base_hello_interval() const
  {
    return variant == Variant::kAodvI ? long_hello_interval : hello_interval;
  }
  double net_traversal_time() const
  {
    return 2.0 * node_traversal_time * net_diameter;
  }
  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

}  // namespace emp::routing
