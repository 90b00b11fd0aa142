#include "resi/evaluation.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace resi {

int unit_step(double x) {
  if (x < 0.0) throw std::invalid_argument("unit_step needs x >= 0");
  return x > 0.0 ? 1 : 0;
}

int BinarySeries::at(MonthIndex t) const {
  if (t < defined_start || t < axis_start || t > axis_end()) return -1;
  return values[static_cast<size_t>(t - axis_start)];
}

std::optional<double> prec_over(const BinarySeries& f, const BinarySeries& g, int delta_months,
                                MonthIndex t_lo, MonthIndex t_hi) {
  long long num = 0, den = 0;
  for (MonthIndex t = t_lo; t <= t_hi; ++t) {
    if (f.at(t) != 1) continue;
    ++den;
    for (int tau = 1; tau <= delta_months; ++tau) {
      if (g.at(t + tau) == 1) {
        ++num;
        break;
      }
    }
  }
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / den;
}

std::optional<double> delay_over(const BinarySeries& g, const BinarySeries& f, int delta_months,
                                 MonthIndex t_lo, MonthIndex t_hi) {
  long long num = 0, den = 0;
  for (MonthIndex t = t_lo; t <= t_hi; ++t) {
    if (g.at(t) != 1) continue;
    ++den;
    for (int tau = 1; tau <= delta_months; ++tau) {
      if (f.at(t - tau) == 1) {
        ++num;
        break;
      }
    }
  }
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / den;
}

std::optional<double> prec(const BinarySeries& f, const BinarySeries& g, int delta_months,
                           MonthIndex t_end) {
  return prec_over(f, g, delta_months, f.defined_start, t_end - delta_months);
}

std::optional<double> delay(const BinarySeries& g, const BinarySeries& f, int delta_months,
                            MonthIndex t_end) {
  return delay_over(g, f, delta_months, f.defined_start + delta_months, t_end);
}

BinarySeries all_ones_like(const BinarySeries& f) {
  BinarySeries r = f;
  std::fill(r.values.begin(), r.values.end(), 1);
  return r;
}

std::optional<bool> condition_a(const BinarySeries& f, const BinarySeries& activity,
                                int delta_months, MonthIndex t_end) {
  const auto lhs = prec(f, activity, delta_months, t_end);
  const auto rhs = prec(all_ones_like(f), activity, delta_months, t_end);
  if (!lhs || !rhs) return std::nullopt;
  return *lhs > *rhs;
}

std::optional<bool> condition_b(const BinarySeries& f, const BinarySeries& activity,
                                int delta_months, MonthIndex t_end) {
  const auto lhs = delay(activity, f, delta_months, t_end);
  const auto rhs = delay(all_ones_like(f), f, delta_months, t_end);
  if (!lhs || !rhs) return std::nullopt;
  return *lhs > *rhs;
}

std::vector<std::uint8_t> active_cells(const CellMonthlyCounts& counts) {
  std::vector<std::uint8_t> out(counts.counts.size(), 0);
  const int months = counts.n_months();
  if (months == 0) return out;
  for (size_t c = 0; c < counts.counts.size(); ++c) {
    long long total = 0;
    for (long v : counts.counts[c]) total += v;
    out[c] = static_cast<double>(total) / months >= 1.0 ? 1 : 0;
  }
  return out;
}

EvalReport evaluate_all(const EvalInputs& in) {
  if (in.function_names.size() != in.alarm_series.size())
    throw std::invalid_argument("one alarm series set per function name");
  const size_t n_cells = in.activity_series.size();

  MonthIndex shared_start = 0;
  if (in.shared_range) {
    for (const auto& per_cell : in.alarm_series)
      for (const auto& s : per_cell) shared_start = std::max(shared_start, s.defined_start);
  }
  const int delta_max = in.delta_ts.empty()
                            ? 0
                            : *std::max_element(in.delta_ts.begin(), in.delta_ts.end());

  EvalReport report;
  report.delta_ts = in.delta_ts;
  report.functions = in.function_names;
  report.active = active_cells(in.cell_counts);
  report.scores.resize(n_cells);

  for (size_t cell = 0; cell < n_cells; ++cell) {
    report.scores[cell].resize(in.function_names.size());
    for (size_t fn = 0; fn < in.function_names.size(); ++fn) {
      if (in.alarm_series[fn].size() != n_cells)
        throw std::invalid_argument("alarm series count must match cell count");
      BinarySeries f = in.alarm_series[fn][cell];
      if (in.shared_range) f.defined_start = std::max(f.defined_start, shared_start);
      const BinarySeries& g = in.activity_series[cell];
      const BinarySeries ones = all_ones_like(f);

      for (int dt : in.delta_ts) {
        PairScores s;
        if (in.shared_range) {
          // One shared t range per function start so prec is comparable
          // across delta_t values.
          const MonthIndex hi = in.t_end - delta_max;
          s.prec = prec_over(f, g, dt, f.defined_start, hi);
          s.prec_random = prec_over(ones, g, dt, f.defined_start, hi);
          s.delay = delay_over(g, f, dt, f.defined_start + delta_max, in.t_end);
          s.delay_random = delay_over(ones, f, dt, f.defined_start + delta_max, in.t_end);
        } else {
          s.prec = prec(f, g, dt, in.t_end);
          s.prec_random = prec(ones, g, dt, in.t_end);
          s.delay = delay(g, f, dt, in.t_end);
          s.delay_random = delay(ones, f, dt, in.t_end);
        }
        if (s.prec && s.prec_random) s.condition_a = *s.prec > *s.prec_random;
        if (s.delay && s.delay_random) s.condition_b = *s.delay > *s.delay_random;
        report.scores[cell][fn].push_back(s);
      }
    }
  }
  return report;
}

std::string report_json(const EvalReport& report) {
  nlohmann::json j;
  j["delta_ts"] = report.delta_ts;
  nlohmann::json actives = nlohmann::json::array();
  for (size_t c = 0; c < report.active.size(); ++c)
    if (report.active[c]) actives.push_back(static_cast<int>(c));
  j["active_cells"] = actives;

  auto opt_num = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  auto opt_bool = [](const std::optional<bool>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };

  nlohmann::json cells = nlohmann::json::object();
  for (size_t c = 0; c < report.scores.size(); ++c) {
    nlohmann::json funcs = nlohmann::json::object();
    for (size_t fn = 0; fn < report.functions.size(); ++fn) {
      nlohmann::json per_dt = nlohmann::json::object();
      for (size_t d = 0; d < report.delta_ts.size(); ++d) {
        const PairScores& s = report.scores[c][fn][d];
        per_dt[std::to_string(report.delta_ts[d])] = {
            {"prec", opt_num(s.prec)},
            {"delay", opt_num(s.delay)},
            {"prec_random", opt_num(s.prec_random)},
            {"delay_random", opt_num(s.delay_random)},
            {"condition_a", opt_bool(s.condition_a)},
            {"condition_b", opt_bool(s.condition_b)},
        };
      }
      funcs[report.functions[fn]] = per_dt;
    }
    cells[std::to_string(c)] = funcs;
  }
  j["cells"] = cells;

  nlohmann::json summary = nlohmann::json::object();
  for (size_t fn = 0; fn < report.functions.size(); ++fn) {
    nlohmann::json per_dt = nlohmann::json::object();
    for (size_t d = 0; d < report.delta_ts.size(); ++d) {
      int a = 0, b = 0, a_active = 0, b_active = 0;
      for (size_t c = 0; c < report.scores.size(); ++c) {
        const PairScores& s = report.scores[c][fn][d];
        const bool is_active = c < report.active.size() && report.active[c];
        if (s.condition_a && *s.condition_a) {
          ++a;
          if (is_active) ++a_active;
        }
        if (s.condition_b && *s.condition_b) {
          ++b;
          if (is_active) ++b_active;
        }
      }
      per_dt[std::to_string(report.delta_ts[d])] = {{"condition_a", a},
                                                    {"condition_b", b},
                                                    {"condition_a_active", a_active},
                                                    {"condition_b_active", b_active}};
    }
    summary[report.functions[fn]] = per_dt;
  }
  j["summary"] = summary;
  return j.dump(2);
}

}  // namespace resi
