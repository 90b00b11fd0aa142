#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resi/alarms.hpp"
#include "resi/baselines.hpp"
#include "resi/catalog.hpp"
#include "resi/entropy.hpp"
#include "resi/evaluation.hpp"
#include "resi/grid.hpp"

namespace resi {

struct RunConfig {
  // Inputs (exactly one kind is used by the CLI; compute_pipeline takes events).
  std::vector<std::string> catalog_paths;
  std::string events_csv_path;
  std::string scenario_path;  // "builtin:figure1" or a scenario file
  std::string column_map_path;

  Region universe = Region::from_corners(25.0, 125.0, 49.0, 149.0);
  double cell_len = 4.0;
  GridSpec grid;
  int window_months = 1;
  CatalogFilter filter;
  AlarmConfig alarms;
  PiConfig pi;
  RiConfig ri;
  std::vector<int> delta_ts{12, 24, 36};
  bool shared_range = false;
  double log_base = 0.0;  // 0 = natural log

  std::string out_dir;
  bool write_csv = true;
  bool write_report = true;
  bool write_svg = true;
  std::vector<MonthIndex> geojson_months;

  void validate() const;  // throws on inconsistent settings
};

struct CellSeries {
  std::vector<ResiPoint> resi;
  std::vector<double> hr_sat;
  std::vector<std::uint8_t> high_hr;
  std::vector<ActivityPoint> activity;
  std::vector<std::optional<double>> pi;
  std::vector<std::optional<double>> ri;
  std::vector<std::uint8_t> high_pi;
  std::vector<std::uint8_t> high_ri;
};

struct PipelineResult {
  std::vector<TimeWindow> windows;
  std::vector<Region> cells;
  int cell_rows = 0;
  int cell_cols = 0;
  std::vector<CellSeries> series;     // per cell
  CellMonthlyCounts monthly_counts;   // per cell, full monthly axis
  bool evaluated = false;             // baselines + report need monthly windows
  EvalReport report;
};

// The full computation: bin -> cluster -> entropy -> alarms -> activity ->
// baselines -> evaluation. Events must already be filtered.
PipelineResult compute_pipeline(std::span<const Event> events, const RunConfig& cfg);

// Write the CSV/JSON/SVG artifact set for a computed result; file contents
// depend only on the result and config.
void write_artifacts(const PipelineResult& result, std::span<const Event> events,
                     const RunConfig& cfg);

}  // namespace resi
