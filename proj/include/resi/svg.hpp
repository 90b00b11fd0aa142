#pragma once

#include <string>
#include <vector>

#include "resi/csv.hpp"
#include "resi/evaluation.hpp"

namespace resi {

// Curve plot for one cell: hr (green), hr_sat (blue), activity (orange,
// right-hand scale). Rows must belong to a single cell and be month-sorted.
std::string render_series_svg(const std::vector<AlarmRow>& rows, const std::string& title);

// Condition map for one alarm function and one delta_t: two cell grids side
// by side (condition A left, condition B right), active cells shaded, a red
// dot where the condition holds.
std::string render_condition_grid_svg(const EvalReport& report, size_t function_index,
                                      size_t delta_index, int cell_rows, int cell_cols,
                                      const std::string& title);

}  // namespace resi
