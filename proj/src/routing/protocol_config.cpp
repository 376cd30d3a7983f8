#include "emp/routing/protocol_config.hpp"
#include "emp/routing/messages.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace emp::routing {

std::string_view to_string(MessageKind kind)
{
  switch (kind) {
    case MessageKind::kRreq: return "RREQ";
    case MessageKind::kRrep: return "RREP";
    case MessageKind::kRerr: return "RERR";
    case MessageKind::kHello: return "HELLO";
  }
  return "?";
}

std::string_view to_string(Variant v)
{
  switch (v) {
    case Variant::kAodv: return "AODV";
    case Variant::kAodvI: return "AODV-I";
    case Variant::kMp: return "MP";
    case Variant::kEmp: return "EMP";
    case Variant::kEmpWo: return "EMP-wo";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view name)
{
  std::string key;
  for (char c : name) {
    if (c == '-')
      c = '_';
    key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (key == "AODV") return Variant::kAodv;
  if (key == "AODV_I") return Variant::kAodvI;
  if (key == "MP") return Variant::kMp;
  if (key == "EMP") return Variant::kEmp;
  if (key == "EMP_WO") return Variant::kEmpWo;
  return std::nullopt;
}

bool uses_prediction(Variant v)
{
  return v == Variant::kMp || v == Variant::kEmp || v == Variant::kEmpWo;
}

bool uses_kalman(Variant v) { return v == Variant::kEmp || v == Variant::kEmpWo; }

bool discards_risky(Variant v) { return v == Variant::kEmp || v == Variant::kEmpWo; }

void ProtocolConfig::validate() const
{
  auto require = [](bool ok, const char *what) {
    if (!ok)
      throw std::invalid_argument(what);
  };
  require(beta >= 1.0, "beta must be >= 1");
  require(t_min > 0.0, "t_min must be > 0");
  require(t_w >= 0.0, "t_w must be >= 0");
  require(hello_interval > 0.0, "hello_interval must be > 0");
  require(long_hello_interval > 0.0, "long_hello_interval must be > 0");
  require(hia_max_interval >= t_min, "hia_max_interval must be >= t_min");
  require(allowed_hello_loss >= 1, "allowed_hello_loss must be >= 1");
  require(range > 0.0, "range must be > 0");
  require(active_route_timeout > 0.0, "active_route_timeout must be > 0");
  require(horizon > 0.0, "horizon must be > 0");
  require(rreq_retries >= 0, "rreq_retries must be >= 0");
  require(node_traversal_time > 0.0, "node_traversal_time must be > 0");
  require(net_diameter >= 1, "net_diameter must be >= 1");
  require(queue_capacity >= 1, "queue_capacity must be >= 1");
  require(rebroadcast_jitter >= 0.0, "rebroadcast_jitter must be >= 0");
}

}  // namespace emp::routing
