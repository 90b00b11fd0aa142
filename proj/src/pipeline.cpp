#include "resi/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "resi/clustering.hpp"
#include "resi/csv.hpp"
#include "resi/svg.hpp"

namespace resi {

namespace {

MonthIndex start_month_of(const RunConfig& cfg) { return cfg.filter.t_start.month_idx(); }
MonthIndex end_month_of(const RunConfig& cfg) { return cfg.filter.t_end.month_idx(); }

}  // namespace

void RunConfig::validate() const {
  if (window_months != 1 && window_months != 12)
    throw std::invalid_argument("window must be month or year");
  cell_grid(universe, cell_len);  // throws when the tiling does not work out
  if (microdeg(cell_len) % microdeg(grid.dx) != 0 ||
      microdeg(cell_len) % microdeg(grid.dy) != 0)
    throw std::invalid_argument("mesh size must divide the cell length");
  if (filter.t_start.to_centiseconds() >= filter.t_end.to_centiseconds())
    throw std::invalid_argument("filter time range is empty");
  if (grid.theta_m < 0) throw std::invalid_argument("theta_m must be nonnegative");
  if (alarms.gamma <= 0.0 || alarms.gamma >= 1.0)
    throw std::invalid_argument("gamma must be inside (0, 1)");
  if (alarms.theta_std <= 0.0) throw std::invalid_argument("theta_std must be positive");
  if (alarms.T_years * 12.0 < alarms.warmup_months)
    throw std::invalid_argument("rank cap T below the warmup window");
  if (pi.t0 >= pi.t1) throw std::invalid_argument("pi reference needs t0 < t1");
  for (int dt : delta_ts)
    if (dt <= 0 || dt > 36)
      throw std::invalid_argument("delta_t must be within 1..36 months");
}

PipelineResult compute_pipeline(std::span<const Event> events, const RunConfig& cfg) {
  cfg.validate();
  PipelineResult res;

  const MonthIndex first = start_month_of(cfg);
  const MonthIndex last = end_month_of(cfg);
  res.windows = make_windows(first, last, cfg.window_months);
  res.cells = cell_grid(cfg.universe, cfg.cell_len);
  res.cell_rows = static_cast<int>(microdeg(cfg.universe.lat_len) / microdeg(cfg.cell_len));
  res.cell_cols = static_cast<int>(microdeg(cfg.universe.lon_len) / microdeg(cfg.cell_len));
  const size_t n_cells = res.cells.size();

  // Mesh counts over the whole universe, then per-cell views.
  const std::vector<MeshWindowCounts> universe_counts =
      bin_events(events, cfg.universe, cfg.grid, res.windows);
  std::vector<std::vector<MeshWindowCounts>> cell_counts =
      split_by_cells(universe_counts, cfg.cell_len);

  res.series.resize(n_cells);
  for (size_t c = 0; c < n_cells; ++c) {
    CellSeries& s = res.series[c];
    s.resi = resi_series(cell_counts[c], static_cast<int>(c), cfg.log_base);
    fill_hr_avr(s.resi);
    AlarmConfig alarm_cfg = cfg.alarms;
    alarm_cfg.t0 = res.windows.front().start;
    s.hr_sat = hr_sat_series(s.resi, alarm_cfg);
    s.high_hr = high_hr(s.hr_sat);
  }

  // Activity per (cell, window) and monthly counts per cell.
  const int n_months = last - first + 1;
  res.monthly_counts.axis_start = first;
  res.monthly_counts.cell_rows = res.cell_rows;
  res.monthly_counts.cell_cols = res.cell_cols;
  res.monthly_counts.counts.assign(n_cells, std::vector<long>(n_months, 0));

  std::vector<std::vector<std::vector<double>>> window_mags(n_cells);
  for (size_t c = 0; c < n_cells; ++c)
    window_mags[c].resize(res.windows.size());
  const GridSpec cell_spec{cfg.cell_len, cfg.cell_len, 0, cfg.filter.m0};
  for (const Event& e : events) {
    const auto cell_idx = mesh_index(e.lat, e.lon, cfg.universe, cell_spec);
    if (!cell_idx) continue;
    const size_t c = static_cast<size_t>(cell_idx->i) * res.cell_cols + cell_idx->j;
    const MonthIndex m = e.time.month_idx();
    if (m < first || m > last) continue;
    ++res.monthly_counts.counts[c][static_cast<size_t>(m - first)];
    const size_t w = cfg.window_months == 1
                         ? static_cast<size_t>(m - first)
                         : static_cast<size_t>((m - res.windows.front().start) / 12);
    if (w < res.windows.size() && res.windows[w].contains(m))
      window_mags[c][w].push_back(e.magnitude);
  }
  for (size_t c = 0; c < n_cells; ++c) {
    CellSeries& s = res.series[c];
    s.activity.resize(res.windows.size());
    for (size_t w = 0; w < res.windows.size(); ++w) {
      s.activity[w].cell_id = static_cast<int>(c);
      s.activity[w].window = res.windows[w];
      s.activity[w].activity = activity_value(window_mags[c][w]);
    }
    mark_high_activity(s.activity);
  }

  if (cfg.window_months != 1) return res;  // baselines and scoring run monthly

  // Baselines per month, then the top-n alarm selection scaled by the
  // hr_sat alarm count and the defined-period lengths.
  const MonthIndex hr_start = res.windows.front().start + cfg.alarms.warmup_months;
  const MonthIndex pi_start = cfg.pi.t1;
  const MonthIndex ri_start = cfg.ri.t0;
  const long t_hr = last - hr_start + 1;
  const long t_pi = last - pi_start + 1;
  const long t_ri = last - ri_start + 1;
  if (t_hr <= 0 || t_pi <= 0 || t_ri <= 0)
    throw std::invalid_argument("defined periods must fit inside the data period");

  for (size_t c = 0; c < n_cells; ++c) {
    res.series[c].pi.assign(res.windows.size(), std::nullopt);
    res.series[c].ri.assign(res.windows.size(), std::nullopt);
  }
  for (MonthIndex t = std::max(first, pi_start); t <= last; ++t) {
    if (t <= cfg.pi.t1) continue;  // defined for t > t1; the t1 point stays empty
    const std::vector<double> values = pi_index(res.monthly_counts, cfg.pi, t);
    for (size_t c = 0; c < n_cells; ++c)
      res.series[c].pi[static_cast<size_t>(t - first)] = values[c];
  }
  for (MonthIndex t = std::max(first, ri_start); t <= last; ++t) {
    if (t <= cfg.ri.t0) continue;
    const auto values = ri_index(res.monthly_counts, cfg.ri, t);
    if (!values) continue;
    for (size_t c = 0; c < n_cells; ++c)
      res.series[c].ri[static_cast<size_t>(t - first)] = (*values)[c];
  }

  for (size_t c = 0; c < n_cells; ++c) {
    CellSeries& s = res.series[c];
    long m = 0;
    for (std::uint8_t v : s.high_hr) m += v;
    s.high_pi = high_topn(s.pi, m, t_pi, t_hr);
    s.high_ri = high_topn(s.ri, m, t_ri, t_hr);
  }

  // Score the three alarm functions against activity.
  EvalInputs in;
  in.function_names = {"hr_sat", "pi", "ri"};
  in.alarm_series.resize(3);
  in.delta_ts = cfg.delta_ts;
  in.t_end = last;
  in.shared_range = cfg.shared_range;
  in.cell_counts = res.monthly_counts;
  for (size_t c = 0; c < n_cells; ++c) {
    const CellSeries& s = res.series[c];
    BinarySeries hr_b{first, hr_start, s.high_hr};
    BinarySeries pi_b{first, pi_start, s.high_pi};
    BinarySeries ri_b{first, ri_start, s.high_ri};
    in.alarm_series[0].push_back(std::move(hr_b));
    in.alarm_series[1].push_back(std::move(pi_b));
    in.alarm_series[2].push_back(std::move(ri_b));
    BinarySeries act{first, first, {}};
    act.values.reserve(res.windows.size());
    for (const ActivityPoint& p : s.activity) act.values.push_back(p.high ? 1 : 0);
    in.activity_series.push_back(std::move(act));
  }
  res.report = evaluate_all(in);
  res.evaluated = true;
  return res;
}

void write_artifacts(const PipelineResult& res, std::span<const Event> events,
                     const RunConfig& cfg) {
  namespace fs = std::filesystem;
  if (cfg.out_dir.empty()) throw std::invalid_argument("output directory not set");
  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);

  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error(std::string("cannot write ") + name);
    return out;
  };

  if (cfg.write_csv) {
    {
      auto out = open("events.csv");
      std::vector<Event> sorted(events.begin(), events.end());
      std::stable_sort(sorted.begin(), sorted.end(), EventTimeOrder{});
      write_events_csv(out, sorted);
    }
    {
      auto out = open("resi_series.csv");
      std::vector<ResiPoint> all;
      for (const CellSeries& s : res.series) all.insert(all.end(), s.resi.begin(), s.resi.end());
      write_series_csv(out, all);
    }
    {
      auto out = open("alarms.csv");
      std::vector<AlarmRow> rows;
      for (const CellSeries& s : res.series) {
        for (size_t w = 0; w < s.resi.size(); ++w) {
          AlarmRow r;
          r.cell_id = s.resi[w].cell_id;
          r.window_start = s.resi[w].window.start;
          r.hr = s.resi[w].hr;
          r.hr_avr = s.resi[w].hr_avr;
          r.hr_sat = s.hr_sat[w];
          r.activity = s.activity[w].activity;
          r.high_hr = s.high_hr[w];
          r.high_activity = s.activity[w].high ? 1 : 0;
          rows.push_back(r);
        }
      }
      write_alarms_csv(out, rows);
    }
    if (res.evaluated) {
      auto out = open("baselines.csv");
      std::vector<BaselineRow> rows;
      for (const CellSeries& s : res.series) {
        for (size_t w = 0; w < s.resi.size(); ++w) {
          BaselineRow r;
          r.cell_id = s.resi[w].cell_id;
          r.window_start = s.resi[w].window.start;
          r.pi = s.pi[w];
          r.ri = s.ri[w];
          r.high_pi = s.high_pi[w];
          r.high_ri = s.high_ri[w];
          rows.push_back(r);
        }
      }
      write_baselines_csv(out, rows);
    }
  }

  if (cfg.write_report && res.evaluated) {
    auto out = open("report.json");
    out << report_json(res.report);
  }

  if (cfg.write_svg) {
    for (size_t c = 0; c < res.series.size(); ++c) {
      std::vector<AlarmRow> rows;
      const CellSeries& s = res.series[c];
      for (size_t w = 0; w < s.resi.size(); ++w) {
        AlarmRow r;
        r.cell_id = s.resi[w].cell_id;
        r.window_start = s.resi[w].window.start;
        r.hr = s.resi[w].hr;
        r.hr_avr = s.resi[w].hr_avr;
        r.hr_sat = s.hr_sat[w];
        r.activity = s.activity[w].activity;
        r.high_hr = s.high_hr[w];
        r.high_activity = s.activity[w].high ? 1 : 0;
        rows.push_back(r);
      }
      char name[64];
      std::snprintf(name, sizeof(name), "curves_cell_%02zu.svg", c);
      auto out = open(name);
      const Region& cell = res.cells[c];
      char title[128];
      std::snprintf(title, sizeof(title), "cell %zu: (%g,%g)-(%g,%g)", c, cell.lat0, cell.lon0,
                    cell.lat1(), cell.lon1());
      out << render_series_svg(rows, title);
    }
    if (res.evaluated) {
      for (size_t fn = 0; fn < res.report.functions.size(); ++fn) {
        for (size_t d = 0; d < res.report.delta_ts.size(); ++d) {
          char name[64];
          std::snprintf(name, sizeof(name), "conditions_%s_dt%02d.svg",
                        res.report.functions[fn].c_str(), res.report.delta_ts[d]);
          auto out = open(name);
          out << render_condition_grid_svg(
              res.report, fn, d, res.cell_rows, res.cell_cols,
              res.report.functions[fn] + ", delta_t = " +
                  std::to_string(res.report.delta_ts[d]) + " months");
        }
      }
    }
  }

  // Cluster snapshots for requested months.
  for (MonthIndex m : cfg.geojson_months) {
    const auto it = std::find_if(res.windows.begin(), res.windows.end(),
                                 [m](const TimeWindow& w) { return w.contains(m); });
    if (it == res.windows.end())
      throw std::invalid_argument("geojson month outside the analysis period: " + format_month(m));
    const size_t w = static_cast<size_t>(it - res.windows.begin());

    // Rebuild per-cell counts for the one window; snapshots are on demand.
    std::vector<Event> in_window;
    for (const Event& e : events)
      if (it->contains(e.time.month_idx())) in_window.push_back(e);
    const auto universe_counts = bin_events(in_window, cfg.universe, cfg.grid, {*it});
    const auto per_cell = split_by_cells(universe_counts, cfg.cell_len);

    nlohmann::json features = nlohmann::json::array();
    for (size_t c = 0; c < per_cell.size(); ++c) {
      const MeshWindowCounts& counts = per_cell[c][0];
      const ClusterPartition part = make_clusters(quaking_meshes(counts));
      if (part.clusters.empty()) continue;
      const nlohmann::json fc = nlohmann::json::parse(cluster_geojson(part, counts));
      for (nlohmann::json f : fc.at("features")) {
        f["properties"]["cell_id"] = static_cast<int>(c);
        features.push_back(std::move(f));
      }
    }
    nlohmann::json fc{{"type", "FeatureCollection"},
                      {"properties", {{"window_start", format_month(res.windows[w].start)}}},
                      {"features", features}};
    char name[64];
    std::snprintf(name, sizeof(name), "clusters_%s.geojson", format_month(m).c_str());
    auto out = open(name);
    out << fc.dump();
  }
}

}  // namespace resi
