#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "resi/times.hpp"

namespace resi {

// Monthly event counts per cell over a shared month axis. Cells are laid out
// row-major on a rows x cols map (the Moore neighborhood needs the shape).
struct CellMonthlyCounts {
  MonthIndex axis_start = 0;
  int cell_rows = 0;
  int cell_cols = 0;
  std::vector<std::vector<long>> counts;  // [cell][month offset]

  int n_cells() const { return static_cast<int>(counts.size()); }
  int n_months() const { return counts.empty() ? 0 : static_cast<int>(counts[0].size()); }
  MonthIndex axis_end() const { return axis_start + n_months() - 1; }
};

struct PiConfig {
  MonthIndex t0 = month_index(1983, 1);  // reference start
  MonthIndex t1 = month_index(1987, 1);  // reference end
  double cutoff = 2.0;                   // informational; counts are pre-cut
  int tb_step_months = 1;
};

struct RiConfig {
  MonthIndex t0 = month_index(1983, 1);
  double cutoff = 2.0;
};

// Pattern-informatics index at month t (> t1) for every cell: mean monthly
// frequencies over [t_b, t] normalized across cells, differenced against the
// same at t1, averaged over t_b, squared, background-subtracted.
std::vector<double> pi_index(const CellMonthlyCounts& counts, const PiConfig& cfg,
                             MonthIndex t);

// Relative intensity at month t: Moore-neighborhood mean of cell counts over
// [t0, t-1], normalized to sum 1 across the map. nullopt when the map holds
// no events in the reference period.
std::optional<std::vector<double>> ri_index(const CellMonthlyCounts& counts,
                                            const RiConfig& cfg, MonthIndex t);

// Top-n alarm selection for a baseline series: flags the n = round(m*T_f/T_hr)
// largest defined values; ties resolved toward earlier months. m is the
// number of hr_sat alarms, T_f and T_hr the defined-period lengths.
std::vector<std::uint8_t> high_topn(std::span<const std::optional<double>> f, long m,
                                    long t_f, long t_hr);

}  // namespace resi
