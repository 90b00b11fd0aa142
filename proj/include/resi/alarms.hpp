#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "resi/entropy.hpp"

namespace resi {

struct AlarmConfig {
  double T_years = 28.0;    // rank-window cap
  int dt_months = 12;       // stdev window
  double gamma = 0.1;       // rank fraction
  double theta_std = 0.5;   // stdev threshold, same units as Hr
  MonthIndex t0 = month_index(1983, 1);  // series start
  int warmup_months = 36;   // minimum rank window

  // The rank threshold gamma * min(T, t - t0) leaves the unit of the window
  // length open. `years` reads it in years (a 28-year window alarms on the
  // top 2 monthly values); `window_samples` reads it in sampling steps of the
  // series. The two coincide for yearly series.
  enum class RankUnit { years, window_samples };
  RankUnit rank_unit = RankUnit::years;
};

// Magnitude equivalent of the window's total energy:
// log_31.62 of sum 31.62^M. nullopt for an empty window.
std::optional<double> activity_value(std::span<const double> magnitudes);

struct ActivityPoint {
  int cell_id = 0;
  TimeWindow window;
  std::optional<double> activity;
  bool high = false;
};

// Alarm-gated Hr: returns hr at `idx` when the rank condition and the
// saturation-or-perturbation condition both hold, else 0. Series may be
// monthly or yearly (window length decides the variant).
double hr_sat_at(const std::vector<ResiPoint>& series, const AlarmConfig& cfg, size_t idx);
std::vector<double> hr_sat_series(const std::vector<ResiPoint>& series, const AlarmConfig& cfg);

// Indicator of hr_sat > 0.
std::vector<std::uint8_t> high_hr(std::span<const double> hr_sat);

// Flags windows whose activity exceeds mean + stdev of the whole series and
// is strictly the largest over the two preceding years. Windows without
// events are excluded from the statistics and never flagged.
void mark_high_activity(std::vector<ActivityPoint>& series);

}  // namespace resi
