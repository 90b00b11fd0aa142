#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "resi/clustering.hpp"
#include "resi/grid.hpp"

namespace resi {

// Cluster-diversity entropy H = -sum p log p with 0 log 0 := 0.
// Probabilities may sum to less than one (events outside quaking meshes keep
// their mass out of every cluster). log_base defaults to natural log (nats).
double entropy_h(std::span<const double> probabilities, double log_base = 0.0);

// Regional entropy Hr = H - log p_s. p_s == 0 has no data behind it and
// yields nullopt rather than an infinity.
std::optional<double> resi_value(double h, double p_s, double log_base = 0.0);

struct ResiPoint {
  int cell_id = 0;
  TimeWindow window;
  bool no_data = true;
  double h = 0.0;
  double hr = 0.0;  // 0 by convention when no_data
  std::optional<double> hr_avr;
  double p_s = 0.0;
  double unclustered_mass = 0.0;
  size_t cluster_count = 0;
};

// Per-window pipeline for one cell: counts -> Msh(S) -> clusters ->
// probabilities -> H, Hr. hr_avr is filled in afterwards (fill_hr_avr).
std::vector<ResiPoint> resi_series(const std::vector<MeshWindowCounts>& cell_counts,
                                   int cell_id, double log_base = 0.0);

// Trailing mean of hr over the current and 5 preceding monthly points,
// no_data points excluded; nullopt when no point in the window has data.
// Yearly series use hr itself.
std::optional<double> hr_avr_at(const std::vector<ResiPoint>& series, size_t idx);
void fill_hr_avr(std::vector<ResiPoint>& series);

// Probability-weighted mean of sub-region Hr values:
// Hr(S+) = sum p(S_i) Hr(S_i) / sum p(S_i). nullopt when the weights sum to 0.
std::optional<double> aggregate_resi(std::span<const std::pair<double, double>> ps_and_hr);

}  // namespace resi
