#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "resi/catalog.hpp"
#include "resi/config.hpp"
#include "resi/csv.hpp"
#include "resi/pipeline.hpp"
#include "resi/svg.hpp"
#include "resi/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

struct CliError : std::runtime_error {
  int code;
  CliError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
};

resi::Region region_from_flag(const std::vector<double>& v) {
  if (v.size() != 4) throw CliError(kExitConfig, "--universe needs lat0,lon0,lat1,lon1");
  return resi::Region::from_corners(v[0], v[1], v[2], v[3]);
}

resi::MonthIndex month_from_flag(const std::string& s, const char* what) {
  auto m = resi::parse_month(s);
  if (!m) throw CliError(kExitConfig, std::string(what) + " must be YYYY-MM");
  return *m;
}

resi::ColumnMap load_column_map(const std::string& path) {
  if (path.empty()) return resi::ColumnMap{};
  std::ifstream in(path);
  if (!in) throw CliError(kExitInput, "cannot open column map: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return resi::column_map_from_json(ss.str());
  } catch (const std::exception& e) {
    throw CliError(kExitConfig, std::string("bad column map: ") + e.what());
  }
}

std::vector<resi::Event> parse_catalog_files(const std::vector<std::string>& paths,
                                             const resi::ColumnMap& map, bool verbose) {
  std::vector<resi::Event> events;
  resi::ParseStats total;
  for (const std::string& path : paths) {
    std::ifstream in(path);
    if (!in) throw CliError(kExitInput, "cannot open catalog file: " + path);
    const resi::ParseStats stats = resi::parse_stream(in, map, events);
    total.lines += stats.lines;
    total.parsed += stats.parsed;
    total.rejected += stats.rejected;
    for (int k = 0; k < 5; ++k) total.rejected_by_reason[k] += stats.rejected_by_reason[k];
    if (verbose) {
      std::cerr << path << ": " << stats.parsed << " parsed, " << stats.rejected
                << " rejected of " << stats.lines << " lines\n";
      for (const resi::Rejection& r : stats.sample_rejections)
        std::cerr << "  line " << r.line_no << ": " << resi::to_string(r.error.reason) << " ("
                  << r.error.detail << ")\n";
    }
  }
  std::cerr << "catalog: " << total.parsed << " parsed, " << total.rejected << " rejected of "
            << total.lines << " lines";
  if (total.rejected > 0) {
    std::cerr << " [";
    for (int k = 0; k < 5; ++k) {
      if (total.rejected_by_reason[k] == 0) continue;
      std::cerr << ' ' << resi::to_string(static_cast<resi::RejectReason>(k)) << '='
                << total.rejected_by_reason[k];
    }
    std::cerr << " ]";
  }
  std::cerr << '\n';
  return events;
}

resi::ScenarioSpec load_scenario(const std::string& ref) {
  if (ref == "builtin:figure1" || ref == "builtin") return resi::default_figure1_scenario();
  try {
    return resi::scenario_from_file(ref);
  } catch (const std::exception& e) {
    throw CliError(kExitInput, std::string("cannot load scenario: ") + e.what());
  }
}

void apply_run_config_file(resi::RunConfig& cfg, const std::string& path) {
  const resi::ConfigDoc doc = resi::ConfigDoc::parse_file(path);
  if (auto v = doc.get_numbers("run", "universe")) {
    cfg.universe = region_from_flag(*v);
    cfg.filter.region = cfg.universe;
  }
  if (auto v = doc.get_double("run", "cell")) cfg.cell_len = *v;
  if (auto v = doc.get_double("run", "mesh")) cfg.grid.dx = cfg.grid.dy = *v;
  if (auto v = doc.get_double("run", "m0")) {
    cfg.filter.m0 = *v;
    cfg.grid.m_theta = *v;
  }
  if (auto v = doc.get_int("run", "theta_m")) cfg.grid.theta_m = static_cast<int>(*v);
  if (auto v = doc.get_string("run", "window"))
    cfg.window_months = (*v == "year") ? 12 : 1;
  if (auto v = doc.get_string("run", "from")) {
    const resi::MonthIndex m = month_from_flag(*v, "run.from");
    cfg.filter.t_start = resi::UtcTime{resi::year_of(m), resi::month_of(m), 1, 0, 0, 0};
  }
  if (auto v = doc.get_string("run", "to")) {
    const resi::MonthIndex m = month_from_flag(*v, "run.to");
    const int y = resi::year_of(m), mo = resi::month_of(m);
    cfg.filter.t_end = resi::UtcTime{y, mo, resi::days_in_month(y, mo), 23, 59, 5999};
  }
  if (auto v = doc.get_double("run", "log_base")) cfg.log_base = *v;
  if (auto v = doc.get_bool("run", "shared_range")) cfg.shared_range = *v;
  if (auto v = doc.get_numbers("run", "delta_ts")) {
    cfg.delta_ts.clear();
    for (double d : *v) cfg.delta_ts.push_back(static_cast<int>(d));
  }
  if (auto v = doc.get_double("alarms", "T_years")) cfg.alarms.T_years = *v;
  if (auto v = doc.get_int("alarms", "dt_months")) cfg.alarms.dt_months = static_cast<int>(*v);
  if (auto v = doc.get_double("alarms", "gamma")) cfg.alarms.gamma = *v;
  if (auto v = doc.get_double("alarms", "theta_std")) cfg.alarms.theta_std = *v;
  if (auto v = doc.get_int("alarms", "warmup_months"))
    cfg.alarms.warmup_months = static_cast<int>(*v);
  if (auto v = doc.get_string("alarms", "rank_unit"))
    cfg.alarms.rank_unit = (*v == "window_samples")
                               ? resi::AlarmConfig::RankUnit::window_samples
                               : resi::AlarmConfig::RankUnit::years;
  if (auto v = doc.get_string("pi", "t0")) cfg.pi.t0 = month_from_flag(*v, "pi.t0");
  if (auto v = doc.get_string("pi", "t1")) cfg.pi.t1 = month_from_flag(*v, "pi.t1");
  if (auto v = doc.get_int("pi", "tb_step_months")) cfg.pi.tb_step_months = static_cast<int>(*v);
  if (auto v = doc.get_string("ri", "t0")) cfg.ri.t0 = month_from_flag(*v, "ri.t0");
}

int cmd_parse(const std::vector<std::string>& catalogs, const std::string& column_map_path,
              const std::string& out_path, double m0, const std::vector<double>& universe,
              const std::string& from, const std::string& to, bool no_filter, bool verbose) {
  const resi::ColumnMap map = load_column_map(column_map_path);
  std::vector<resi::Event> events = parse_catalog_files(catalogs, map, verbose);

  if (!no_filter) {
    resi::CatalogFilter filter;
    filter.m0 = m0;
    if (!universe.empty()) filter.region = region_from_flag(universe);
    if (!from.empty()) {
      const resi::MonthIndex m = month_from_flag(from, "--from");
      filter.t_start = resi::UtcTime{resi::year_of(m), resi::month_of(m), 1, 0, 0, 0};
    }
    if (!to.empty()) {
      const resi::MonthIndex m = month_from_flag(to, "--to");
      const int y = resi::year_of(m), mo = resi::month_of(m);
      filter.t_end = resi::UtcTime{y, mo, resi::days_in_month(y, mo), 23, 59, 5999};
    }
    events = resi::filter_events(events, filter);
    std::cerr << "filter: " << events.size() << " events kept\n";
  }
  std::stable_sort(events.begin(), events.end(), resi::EventTimeOrder{});

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw CliError(kExitInput, "cannot write " + out_path);
  resi::write_events_csv(out, events);
  std::cerr << "wrote " << out_path << '\n';
  return kExitOk;
}

int cmd_synth(const std::string& scenario_ref, long seed_override, const std::string& out_jma,
              const std::string& out_csv) {
  resi::ScenarioSpec spec = load_scenario(scenario_ref);
  if (seed_override >= 0) spec.seed = static_cast<std::uint64_t>(seed_override);
  const std::vector<resi::Event> events = resi::generate(spec);
  std::cerr << "generated " << events.size() << " events over " << spec.total_months()
            << " months\n";
  if (!out_jma.empty()) {
    std::ofstream out(out_jma, std::ios::binary);
    if (!out) throw CliError(kExitInput, "cannot write " + out_jma);
    const resi::ColumnMap map;
    for (const resi::Event& e : events) out << resi::encode_record(e, map) << '\n';
    std::cerr << "wrote " << out_jma << '\n';
  }
  if (!out_csv.empty()) {
    std::ofstream out(out_csv, std::ios::binary);
    if (!out) throw CliError(kExitInput, "cannot write " + out_csv);
    resi::write_events_csv(out, events);
    std::cerr << "wrote " << out_csv << '\n';
  }
  return kExitOk;
}

int cmd_run(resi::RunConfig cfg, const std::vector<std::string>& geojson_month_flags,
            bool cell_given, bool verbose) {
  for (const std::string& s : geojson_month_flags)
    cfg.geojson_months.push_back(month_from_flag(s, "--geojson-month"));
  // A shifted analysis start without an explicit reference end: keep the
  // four-year reference span.
  if (cfg.pi.t1 <= cfg.pi.t0) cfg.pi.t1 = cfg.pi.t0 + 48;

  const int inputs = static_cast<int>(!cfg.catalog_paths.empty()) +
                     static_cast<int>(!cfg.events_csv_path.empty()) +
                     static_cast<int>(!cfg.scenario_path.empty());
  if (inputs != 1)
    throw CliError(kExitConfig, "exactly one of --catalog, --events, --synthetic is required");
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw CliError(kExitConfig, std::string("config: ") + e.what());
  }

  std::vector<resi::Event> events;
  if (!cfg.catalog_paths.empty()) {
    const resi::ColumnMap map = load_column_map(cfg.column_map_path);
    events = parse_catalog_files(cfg.catalog_paths, map, verbose);
    events = resi::filter_events(events, cfg.filter);
  } else if (!cfg.events_csv_path.empty()) {
    std::ifstream in(cfg.events_csv_path);
    if (!in) throw CliError(kExitInput, "cannot open " + cfg.events_csv_path);
    try {
      events = resi::read_events_csv(in);
    } catch (const std::exception& e) {
      throw CliError(kExitInput, std::string("events csv: ") + e.what());
    }
    events = resi::filter_events(events, cfg.filter);
  } else {
    resi::ScenarioSpec spec = load_scenario(cfg.scenario_path);
    // A scenario brings its own geometry and period. The default cell length
    // bends to fit the region; an explicit one must divide it.
    cfg.universe = spec.region;
    if (!cell_given &&
        (resi::microdeg(cfg.universe.lat_len) % resi::microdeg(cfg.cell_len) != 0 ||
         resi::microdeg(cfg.universe.lon_len) % resi::microdeg(cfg.cell_len) != 0))
      cfg.cell_len = std::min(cfg.universe.lat_len, cfg.universe.lon_len);
    cfg.grid = spec.grid;
    cfg.filter.region = spec.region;
    const resi::MonthIndex m0 = spec.start_month;
    const resi::MonthIndex m1 = spec.start_month + spec.total_months() - 1;
    cfg.filter.t_start = resi::UtcTime{resi::year_of(m0), resi::month_of(m0), 1, 0, 0, 0};
    cfg.filter.t_end = resi::UtcTime{resi::year_of(m1), resi::month_of(m1),
                                     resi::days_in_month(resi::year_of(m1), resi::month_of(m1)),
                                     23, 59, 5999};
    cfg.alarms.t0 = m0;
    cfg.pi.t0 = m0;
    cfg.pi.t1 = std::min<resi::MonthIndex>(m0 + 48, m1 - 1);
    cfg.ri.t0 = m0;
    events = resi::filter_events(resi::generate(spec), cfg.filter);
  }
  std::cerr << "pipeline input: " << events.size() << " events\n";

  const resi::PipelineResult result = resi::compute_pipeline(events, cfg);
  resi::write_artifacts(result, events, cfg);
  std::cerr << "artifacts written to " << cfg.out_dir << '\n';
  if (result.evaluated) {
    int active = 0;
    for (auto a : result.report.active) active += a;
    std::cerr << "active cells: " << active << " of " << result.report.active.size() << '\n';
  }
  return kExitOk;
}

int cmd_eval(const std::string& report_path, int dt) {
  std::ifstream in(report_path);
  if (!in) throw CliError(kExitInput, "cannot open " + report_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CliError(kExitInput, std::string("bad report: ") + e.what());
  }
  const std::string key = std::to_string(dt);
  std::cout << "condition summary for delta_t = " << dt << " months\n";
  std::cout << "function    A(all)  B(all)  A(active)  B(active)\n";
  for (const auto& [fn, per_dt] : j.at("summary").items()) {
    if (!per_dt.contains(key)) throw CliError(kExitInput, "report lacks delta_t " + key);
    const auto& s = per_dt.at(key);
    std::printf("%-10s  %6d  %6d  %9d  %9d\n", fn.c_str(), s.at("condition_a").get<int>(),
                s.at("condition_b").get<int>(), s.at("condition_a_active").get<int>(),
                s.at("condition_b_active").get<int>());
  }
  const auto& active = j.at("active_cells");
  std::cout << "active cells (" << active.size() << "):";
  for (const auto& c : active) std::cout << ' ' << c.get<int>();
  std::cout << '\n';
  return kExitOk;
}

int cmd_plot(const std::string& alarms_path, int cell, const std::string& out_path) {
  std::ifstream in(alarms_path);
  if (!in) throw CliError(kExitInput, "cannot open " + alarms_path);
  std::vector<resi::AlarmRow> rows;
  try {
    rows = resi::read_alarms_csv(in);
  } catch (const std::exception& e) {
    throw CliError(kExitInput, std::string("alarms csv: ") + e.what());
  }
  std::vector<resi::AlarmRow> mine;
  for (const resi::AlarmRow& r : rows)
    if (r.cell_id == cell) mine.push_back(r);
  if (mine.empty()) throw CliError(kExitInput, "no rows for cell " + std::to_string(cell));
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw CliError(kExitInput, "cannot write " + out_path);
  out << resi::render_series_svg(mine, "cell " + std::to_string(cell));
  std::cerr << "wrote " << out_path << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regional entropy of seismic information toolkit"};
  app.require_subcommand(1);

  // parse
  auto* parse = app.add_subcommand("parse", "parse catalog files into a normalized event CSV");
  std::vector<std::string> catalogs;
  std::string column_map_path, out_events = "events.csv", from, to;
  std::vector<double> universe_flag;
  double m0 = 2.0;
  bool no_filter = false, verbose = false;
  parse->add_option("--catalog", catalogs, "fixed-width catalog file(s)")->required();
  parse->add_option("--column-map", column_map_path, "column map JSON");
  parse->add_option("--out", out_events, "output CSV path");
  parse->add_option("--m0", m0, "cutoff magnitude");
  parse->add_option("--universe", universe_flag, "lat0,lon0,lat1,lon1")->delimiter(',');
  parse->add_option("--from", from, "start month YYYY-MM");
  parse->add_option("--to", to, "end month YYYY-MM (inclusive)");
  parse->add_flag("--no-filter", no_filter, "write every parsed event");
  parse->add_flag("-v,--verbose", verbose, "per-file stats and sampled rejects");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic catalog from a scenario");
  std::string scenario_ref = "builtin:figure1", out_jma, out_csv;
  long seed_override = -1;
  synth->add_option("--scenario", scenario_ref, "scenario file or builtin:figure1");
  synth->add_option("--seed", seed_override, "override the scenario seed");
  synth->add_option("--out-jma", out_jma, "write fixed-width records here");
  synth->add_option("--out-csv", out_csv, "write normalized CSV here");

  // run
  auto* run = app.add_subcommand("run", "run the full pipeline and write artifacts");
  resi::RunConfig cfg;
  std::string config_path, window_flag, run_from, run_to;
  std::vector<double> run_universe;
  std::vector<std::string> geojson_months;
  bool no_svg = false, no_csv = false, no_report = false, run_verbose = false;
  run->add_option("--catalog", cfg.catalog_paths, "fixed-width catalog file(s)");
  run->add_option("--events", cfg.events_csv_path, "normalized event CSV input");
  run->add_option("--synthetic", cfg.scenario_path, "scenario file or builtin:figure1");
  run->add_option("--column-map", cfg.column_map_path, "column map JSON");
  run->add_option("--config", config_path, "run configuration file");
  run->add_option("--out", cfg.out_dir, "output directory")->required();
  run->add_option("--universe", run_universe, "lat0,lon0,lat1,lon1")->delimiter(',');
  run->add_option("--cell", cfg.cell_len, "cell length (deg)");
  run->add_option("--mesh", cfg.grid.dx, "mesh length (deg)");
  run->add_option("--m0", cfg.filter.m0, "cutoff magnitude");
  run->add_option("--theta-m", cfg.grid.theta_m, "quaking-mesh count threshold");
  run->add_option("--window", window_flag, "month|year")->check(CLI::IsMember({"month", "year"}));
  run->add_option("--from", run_from, "start month YYYY-MM");
  run->add_option("--to", run_to, "end month YYYY-MM (inclusive)");
  run->add_option("--gamma", cfg.alarms.gamma, "alarm rank fraction");
  run->add_option("--theta-std", cfg.alarms.theta_std, "alarm stdev threshold");
  run->add_option("--rank-cap", cfg.alarms.T_years, "alarm rank window cap (years)");
  run->add_option("--delta-ts", cfg.delta_ts, "evaluation gaps in months")->delimiter(',');
  run->add_flag("--shared-range", cfg.shared_range, "score every function on a shared range");
  run->add_option("--geojson-month", geojson_months, "export cluster snapshots (YYYY-MM)");
  run->add_flag("--no-svg", no_svg, "skip SVG plots");
  run->add_flag("--no-csv", no_csv, "skip CSV exports");
  run->add_flag("--no-report", no_report, "skip the evaluation report");
  run->add_flag("-v,--verbose", run_verbose, "per-file stats");

  // eval
  auto* eval = app.add_subcommand("eval", "summarize a written report.json");
  std::string report_path;
  int eval_dt = 12;
  eval->add_option("--report", report_path, "report.json path")->required();
  eval->add_option("--dt", eval_dt, "delta_t in months");

  // plot
  auto* plot = app.add_subcommand("plot", "render one cell's curves from alarms.csv");
  std::string alarms_path, plot_out = "curves.svg";
  int plot_cell = 0;
  plot->add_option("--alarms", alarms_path, "alarms.csv path")->required();
  plot->add_option("--cell", plot_cell, "cell id");
  plot->add_option("--out", plot_out, "output SVG path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse->parsed())
      return cmd_parse(catalogs, column_map_path, out_events, m0, universe_flag, from, to,
                       no_filter, verbose);
    if (synth->parsed()) return cmd_synth(scenario_ref, seed_override, out_jma, out_csv);
    if (run->parsed()) {
      // Precedence: defaults < config file < explicit flags.
      const resi::RunConfig from_flags = cfg;
      if (!config_path.empty()) apply_run_config_file(cfg, config_path);
      auto given = [&](const char* name) { return run->count(name) > 0; };
      if (given("--cell")) cfg.cell_len = from_flags.cell_len;
      if (given("--mesh")) cfg.grid.dx = from_flags.grid.dx;
      if (given("--m0")) cfg.filter.m0 = from_flags.filter.m0;
      if (given("--theta-m")) cfg.grid.theta_m = from_flags.grid.theta_m;
      if (given("--gamma")) cfg.alarms.gamma = from_flags.alarms.gamma;
      if (given("--theta-std")) cfg.alarms.theta_std = from_flags.alarms.theta_std;
      if (given("--rank-cap")) cfg.alarms.T_years = from_flags.alarms.T_years;
      if (given("--delta-ts")) cfg.delta_ts = from_flags.delta_ts;
      if (given("--shared-range")) cfg.shared_range = from_flags.shared_range;
      if (!run_universe.empty()) {
        cfg.universe = region_from_flag(run_universe);
        cfg.filter.region = cfg.universe;
      }
      cfg.grid.dy = cfg.grid.dx;
      cfg.grid.m_theta = cfg.filter.m0;
      if (window_flag == "year") cfg.window_months = 12;
      if (window_flag == "month") cfg.window_months = 1;
      if (!run_from.empty()) {
        const resi::MonthIndex m = month_from_flag(run_from, "--from");
        cfg.filter.t_start = resi::UtcTime{resi::year_of(m), resi::month_of(m), 1, 0, 0, 0};
        cfg.alarms.t0 = m;
        cfg.pi.t0 = m;
        cfg.ri.t0 = m;
      }
      if (!run_to.empty()) {
        const resi::MonthIndex m = month_from_flag(run_to, "--to");
        const int y = resi::year_of(m), mo = resi::month_of(m);
        cfg.filter.t_end = resi::UtcTime{y, mo, resi::days_in_month(y, mo), 23, 59, 5999};
      }
      cfg.write_svg = !no_svg;
      cfg.write_csv = !no_csv;
      cfg.write_report = !no_report;
      return cmd_run(std::move(cfg), geojson_months, given("--cell"), run_verbose);
    }
    if (eval->parsed()) return cmd_eval(report_path, eval_dt);
    if (plot->parsed()) return cmd_plot(alarms_path, plot_cell, plot_out);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
