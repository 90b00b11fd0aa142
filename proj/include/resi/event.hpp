#pragma once

#include <optional>

#include "resi/times.hpp"

namespace resi {

// One hypocenter record, normalized. Depth and the error fields are carried
// through but ignored by the analysis.
struct Event {
  UtcTime time;
  double lat = 0.0;        // degrees, [-90, 90]
  double lon = 0.0;        // degrees, normalized to [-180, 180)
  double magnitude = 0.0;  // JMA magnitude, 0.1 steps
  std::optional<double> depth_km;
  std::optional<double> time_err_s;
  std::optional<double> lat_err_deg;
  std::optional<double> lon_err_deg;
  bool depth_whole_km = false;  // depth was coded in the fixed whole-km form

  bool operator==(const Event&) const = default;
};

// Chronological order with a deterministic tie-break.
struct EventTimeOrder {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time < b.time;
    if (a.lat != b.lat) return a.lat < b.lat;
    if (a.lon != b.lon) return a.lon < b.lon;
    return a.magnitude < b.magnitude;
  }
};

}  // namespace resi
