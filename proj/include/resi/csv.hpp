#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "resi/alarms.hpp"
#include "resi/entropy.hpp"

namespace resi {

// Row-oriented views of the per-cell series, as written to the CSV exports.
struct AlarmRow {
  int cell_id = 0;
  MonthIndex window_start = 0;
  double hr = 0.0;
  std::optional<double> hr_avr;
  double hr_sat = 0.0;
  std::optional<double> activity;
  int high_hr = 0;
  int high_activity = 0;
};

void write_series_csv(std::ostream& out, const std::vector<ResiPoint>& series);
void write_alarms_csv(std::ostream& out, const std::vector<AlarmRow>& rows);
std::vector<AlarmRow> read_alarms_csv(std::istream& in);

struct BaselineRow {
  int cell_id = 0;
  MonthIndex window_start = 0;
  std::optional<double> pi;
  std::optional<double> ri;
  int high_pi = 0;
  int high_ri = 0;
};

void write_baselines_csv(std::ostream& out, const std::vector<BaselineRow>& rows);

std::string format_double(double v);  // shared fixed formatting for exports

}  // namespace resi
