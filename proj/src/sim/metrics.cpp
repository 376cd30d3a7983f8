#include "emp/sim/metrics.hpp"

#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace emp::sim {

DeliveryMetrics compute_metrics(const MetricsAccumulator &acc)
{
  if (acc.data_generated == 0)
    throw std::domain_error("compute_metrics: no data packets were generated");
  DeliveryMetrics m;
  m.pdr = static_cast<double>(acc.data_delivered) / static_cast<double>(acc.data_generated);
  m.nrl = acc.data_delivered == 0
              ? INFINITY
              : static_cast<double>(acc.control_transmissions) /
                    static_cast<double>(acc.data_delivered);
  return m;
}

std::string format_metric(double v)
{
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.6f}", v);
}

std::string report_csv_header()
{
  return "variant,hia,sigma,v_max,pairs,nodes,seed,pdr,nrl,generated,delivered,control_tx";
}

std::string report_csv_row(const MetricsReport &r)
{
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}", routing::to_string(r.variant),
                     r.hia ? "on" : "off", format_metric(r.sigma), format_metric(r.v_max),
                     r.pairs, r.nodes, r.seed, format_metric(r.pdr), format_metric(r.nrl),
                     r.counts.data_generated, r.counts.data_delivered,
                     r.counts.control_transmissions);
}

}  // namespace emp::sim
