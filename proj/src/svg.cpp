#include "resi/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace resi {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Scale {
  double lo = 0.0, hi = 1.0;
  double px0 = 0.0, px1 = 1.0;

  double operator()(double v) const {
    if (hi == lo) return (px0 + px1) / 2;
    return px0 + (v - lo) / (hi - lo) * (px1 - px0);
  }
};

void polyline(std::ostringstream& svg, const std::vector<std::pair<double, double>>& pts,
              const char* color, double width) {
  if (pts.empty()) return;
  svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
      << "\" points=\"";
  for (const auto& [x, y] : pts) svg << num(x) << ',' << num(y) << ' ';
  svg << "\"/>\n";
}

void text(std::ostringstream& svg, double x, double y, const std::string& s,
          const char* anchor = "start", int size = 11, const char* fill = "#333333") {
  svg << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
      << "\" font-family=\"sans-serif\" fill=\"" << fill << "\" text-anchor=\"" << anchor
      << "\">" << s << "</text>\n";
}

}  // namespace

std::string render_series_svg(const std::vector<AlarmRow>& rows, const std::string& title) {
  const double W = 920, H = 360;
  const double left = 60, right = 60, top = 36, bottom = 40;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  text(svg, left, top - 14, title, "start", 13);

  if (!rows.empty()) {
    double hr_max = 0.0, act_lo = 1e300, act_hi = -1e300;
    for (const AlarmRow& r : rows) {
      hr_max = std::max(hr_max, r.hr);
      if (r.activity) {
        act_lo = std::min(act_lo, *r.activity);
        act_hi = std::max(act_hi, *r.activity);
      }
    }
    if (hr_max <= 0.0) hr_max = 1.0;
    if (act_lo > act_hi) {
      act_lo = 0.0;
      act_hi = 1.0;
    }
    if (act_hi == act_lo) act_hi = act_lo + 1.0;

    const MonthIndex m0 = rows.front().window_start;
    const MonthIndex m1 = rows.back().window_start;
    const Scale sx{static_cast<double>(m0), static_cast<double>(std::max(m1, m0 + 1)), left,
                   W - right};
    const Scale sy{0.0, hr_max * 1.05, H - bottom, top};
    const Scale sa{act_lo, act_hi + (act_hi - act_lo) * 0.05, H - bottom, top};

    // Year grid lines.
    for (MonthIndex m = m0; m <= m1; ++m) {
      if (month_of(m) != 1) continue;
      const double x = sx(m);
      svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(top) << "\" x2=\"" << num(x)
          << "\" y2=\"" << num(H - bottom) << "\" stroke=\"#eeeeee\"/>\n";
      if (year_of(m) % 5 == 0) text(svg, x, H - bottom + 16, std::to_string(year_of(m)), "middle");
    }

    std::vector<std::pair<double, double>> hr_pts, act_pts;
    for (const AlarmRow& r : rows) {
      hr_pts.push_back({sx(r.window_start), sy(r.hr)});
      if (r.activity) act_pts.push_back({sx(r.window_start), sa(*r.activity)});
    }
    polyline(svg, act_pts, "#e69f00", 1.2);
    polyline(svg, hr_pts, "#2ca02c", 1.4);
    // Alarms as blue stems so isolated alarm months stay visible.
    for (const AlarmRow& r : rows) {
      if (r.hr_sat <= 0.0) continue;
      svg << "<line x1=\"" << num(sx(r.window_start)) << "\" y1=\"" << num(sy(0.0))
          << "\" x2=\"" << num(sx(r.window_start)) << "\" y2=\"" << num(sy(r.hr_sat))
          << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
    }
    for (const AlarmRow& r : rows) {
      if (!r.high_activity) continue;
      svg << "<circle cx=\"" << num(sx(r.window_start)) << "\" cy=\"" << num(sa(*r.activity))
          << "\" r=\"3\" fill=\"#d62728\"/>\n";
    }

    text(svg, 14, (top + H - bottom) / 2, "hr", "middle", 11, "#2ca02c");
    text(svg, W - 20, (top + H - bottom) / 2, "activity", "middle", 11, "#e69f00");
    text(svg, left, H - 8,
         "hr: green, alarms (hr_sat): blue, activity: orange, high activity: red dots", "start",
         10, "#666666");
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_condition_grid_svg(const EvalReport& report, size_t function_index,
                                      size_t delta_index, int cell_rows, int cell_cols,
                                      const std::string& title) {
  if (function_index >= report.functions.size() || delta_index >= report.delta_ts.size())
    throw std::invalid_argument("condition grid indexes out of range");
  const double cell_px = 34;
  const double pad = 24, gap = 40, top = 44;
  const double grid_w = cell_cols * cell_px;
  const double grid_h = cell_rows * cell_px;
  const double W = pad * 2 + grid_w * 2 + gap;
  const double H = top + grid_h + pad + 16;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  text(svg, pad, 20, title, "start", 13);

  for (int panel = 0; panel < 2; ++panel) {
    const double x0 = pad + panel * (grid_w + gap);
    text(svg, x0 + grid_w / 2, top - 8, panel == 0 ? "condition A" : "condition B", "middle");
    for (int r = 0; r < cell_rows; ++r) {
      for (int c = 0; c < cell_cols; ++c) {
        const size_t cell = static_cast<size_t>(r) * cell_cols + c;
        // Row 0 is the southernmost cell; draw it at the bottom.
        const double x = x0 + c * cell_px;
        const double y = top + (cell_rows - 1 - r) * cell_px;
        const bool active = cell < report.active.size() && report.active[cell];
        svg << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << cell_px
            << "\" height=\"" << cell_px << "\" fill=\"" << (active ? "#d7d7d7" : "white")
            << "\" stroke=\"#888888\"/>\n";
        if (cell >= report.scores.size()) continue;
        const PairScores& s = report.scores[cell][function_index][delta_index];
        const std::optional<bool>& cond = panel == 0 ? s.condition_a : s.condition_b;
        if (cond && *cond)
          svg << "<circle cx=\"" << num(x + cell_px / 2) << "\" cy=\"" << num(y + cell_px / 2)
              << "\" r=\"" << num(cell_px * 0.22) << "\" fill=\"#d62728\"/>\n";
      }
    }
  }
  text(svg, pad, H - 6, "shaded: active cells (monthly mean count >= 1)", "start", 10,
       "#666666");
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace resi
