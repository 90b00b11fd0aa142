#include "resi/alarms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace resi {

namespace {

constexpr double kJmaLogBottom = 31.62;

// Population standard deviation of the defined hr values in series[first..last].
// Returns the number of defined points through n_out.
double pop_stdev(const std::vector<ResiPoint>& series, size_t first, size_t last, int& n_out) {
  double sum = 0.0;
  int n = 0;
  for (size_t k = first; k <= last && k < series.size(); ++k) {
    if (series[k].no_data) continue;
    sum += series[k].hr;
    ++n;
  }
  n_out = n;
  if (n == 0) return 0.0;
  const double mean = sum / n;
  double acc = 0.0;
  for (size_t k = first; k <= last && k < series.size(); ++k) {
    if (series[k].no_data) continue;
    acc += (series[k].hr - mean) * (series[k].hr - mean);
  }
  return std::sqrt(acc / n);
}

}  // namespace

std::optional<double> activity_value(std::span<const double> magnitudes) {
  if (magnitudes.empty()) return std::nullopt;
  double total = 0.0;
  for (double m : magnitudes) total += std::pow(kJmaLogBottom, m);
  return std::log(total) / std::log(kJmaLogBottom);
}

double hr_sat_at(const std::vector<ResiPoint>& series, const AlarmConfig& cfg, size_t idx) {
  if (idx >= series.size()) throw std::out_of_range("hr_sat_at index");
  const ResiPoint& at = series[idx];
  const bool yearly = at.window.months >= 12;
  const int step = yearly ? 12 : 1;

  const int elapsed = at.window.start - cfg.t0;  // months since series start
  if (elapsed < cfg.warmup_months) return 0.0;
  if (at.no_data || !at.hr_avr) return 0.0;

  // Rank condition: the value at t must rank within gamma * min(T, t - t0)
  // of the defined hr_avr values over the trailing window. The window covers
  // exactly min(T, t - t0) sampling steps ending at t, so with gamma = 1 the
  // condition always holds. Ties do not push the rank down.
  const int window_months = static_cast<int>(
      std::min(cfg.T_years * 12.0, static_cast<double>(elapsed)));
  const int window_samples = std::max(1, window_months / step);
  const size_t lo = idx >= static_cast<size_t>(window_samples - 1)
                        ? idx - static_cast<size_t>(window_samples - 1)
                        : 0;
  int rank = 1;
  int defined = 0;
  const double here = *at.hr_avr;
  for (size_t k = lo; k <= idx; ++k) {
    if (!series[k].hr_avr) continue;
    ++defined;
    if (k != idx && *series[k].hr_avr > here) ++rank;
  }
  if (defined < 3) return 0.0;
  const double window_years = window_months / 12.0;
  const double threshold = cfg.rank_unit == AlarmConfig::RankUnit::years
                               ? cfg.gamma * window_years
                               : cfg.gamma * window_samples;
  if (rank > threshold) return 0.0;

  if (yearly) {
    // Two points per stdev window only: compare |Hr(t) - Hr(t - 1y)| directly.
    if (idx == 0 || series[idx - 1].no_data) return 0.0;
    if (std::abs(at.hr - series[idx - 1].hr) >= cfg.theta_std) return 0.0;
    return at.hr;
  }

  // Saturation: stdev of hr over [t - dt, t] below theta_std. Perturbation:
  // stdev over the trailing half more than twice the preceding half's.
  const int dt = cfg.dt_months;
  if (idx < static_cast<size_t>(dt)) return 0.0;
  int n_full = 0, n_recent = 0, n_early = 0;
  const double sd_full = pop_stdev(series, idx - dt, idx, n_full);
  const double sd_recent = pop_stdev(series, idx - dt / 2, idx, n_recent);
  const double sd_early = pop_stdev(series, idx - dt, idx - dt / 2 - 1, n_early);
  if (n_full < 3) return 0.0;
  const bool saturated = sd_full < cfg.theta_std;
  const bool perturbed = n_recent >= 2 && n_early >= 2 && sd_recent > 2.0 * sd_early;
  if (!saturated && !perturbed) return 0.0;
  return at.hr;
}

std::vector<double> hr_sat_series(const std::vector<ResiPoint>& series, const AlarmConfig& cfg) {
  std::vector<double> out(series.size(), 0.0);
  for (size_t k = 0; k < series.size(); ++k) out[k] = hr_sat_at(series, cfg, k);
  return out;
}

std::vector<std::uint8_t> high_hr(std::span<const double> hr_sat) {
  std::vector<std::uint8_t> out(hr_sat.size(), 0);
  for (size_t k = 0; k < hr_sat.size(); ++k) out[k] = hr_sat[k] > 0.0 ? 1 : 0;
  return out;
}

void mark_high_activity(std::vector<ActivityPoint>& series) {
  double sum = 0.0;
  long n = 0;
  for (const ActivityPoint& p : series) {
    if (!p.activity) continue;
    sum += *p.activity;
    ++n;
  }
  if (n == 0) {
    for (ActivityPoint& p : series) p.high = false;
    return;
  }
  const double mean = sum / n;
  double acc = 0.0;
  for (const ActivityPoint& p : series)
    if (p.activity) acc += (*p.activity - mean) * (*p.activity - mean);
  const double bar = mean + std::sqrt(acc / n);

  const int span_months = 24;
  for (size_t k = 0; k < series.size(); ++k) {
    ActivityPoint& p = series[k];
    p.high = false;
    if (!p.activity || *p.activity <= bar) continue;
    const int step = std::max(1, p.window.months);
    const size_t back = static_cast<size_t>(span_months / step);
    bool largest = true;
    for (size_t b = 1; b <= back && b <= k; ++b) {
      const ActivityPoint& q = series[k - b];
      // Equal earlier peaks win: only the first point of a flat maximum flags.
      if (q.activity && *q.activity >= *p.activity) {
        largest = false;
        break;
      }
    }
    if (largest) p.high = true;
  }
}

}  // namespace resi
