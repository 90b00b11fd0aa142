#include "resi/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace resi {

namespace {

// prefix[c][k] = events of cell c in the first k months of the axis.
std::vector<std::vector<long long>> prefix_sums(const CellMonthlyCounts& counts) {
  std::vector<std::vector<long long>> pre(counts.counts.size());
  for (size_t c = 0; c < counts.counts.size(); ++c) {
    pre[c].resize(counts.counts[c].size() + 1, 0);
    for (size_t k = 0; k < counts.counts[c].size(); ++k)
      pre[c][k + 1] = pre[c][k] + counts.counts[c][k];
  }
  return pre;
}

// Mean monthly count of cell c over months [a, b] inclusive (axis offsets).
double mean_rate(const std::vector<std::vector<long long>>& pre, size_t c, int a, int b) {
  return static_cast<double>(pre[c][b + 1] - pre[c][a]) / (b - a + 1);
}

// Across-cell normalization: subtract the map mean, divide by the map
// population stdev; a flat map normalizes to zeros.
std::vector<double> normalize_across_cells(std::vector<double> x) {
  const size_t n = x.size();
  double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  for (double& v : x) v = sd > 0.0 ? (v - mean) / sd : 0.0;
  return x;
}

}  // namespace

std::vector<double> pi_index(const CellMonthlyCounts& counts, const PiConfig& cfg,
                             MonthIndex t) {
  if (t <= cfg.t1) throw std::invalid_argument("pi_index needs t > t1");
  if (cfg.t0 >= cfg.t1) throw std::invalid_argument("pi_index needs t0 < t1");
  if (cfg.t0 < counts.axis_start || t > counts.axis_end())
    throw std::invalid_argument("pi_index range outside the counts axis");

  const size_t n = counts.counts.size();
  const auto pre = prefix_sums(counts);
  const int off_t = t - counts.axis_start;
  const int off_t1 = cfg.t1 - counts.axis_start;

  std::vector<double> delta_mean(n, 0.0);
  int n_tb = 0;
  for (MonthIndex tb = cfg.t0; tb <= cfg.t1; tb += cfg.tb_step_months) {
    const int off_tb = tb - counts.axis_start;
    std::vector<double> at_t(n), at_t1(n);
    for (size_t c = 0; c < n; ++c) {
      at_t[c] = mean_rate(pre, c, off_tb, off_t);
      at_t1[c] = mean_rate(pre, c, off_tb, off_t1);
    }
    at_t = normalize_across_cells(std::move(at_t));
    at_t1 = normalize_across_cells(std::move(at_t1));
    for (size_t c = 0; c < n; ++c) delta_mean[c] += at_t[c] - at_t1[c];
    ++n_tb;
  }
  for (double& v : delta_mean) v /= n_tb;

  std::vector<double> pi(n);
  double background = 0.0;
  for (size_t c = 0; c < n; ++c) {
    pi[c] = delta_mean[c] * delta_mean[c];
    background += pi[c];
  }
  background /= n;
  for (double& v : pi) v -= background;
  return pi;
}

std::optional<std::vector<double>> ri_index(const CellMonthlyCounts& counts,
                                            const RiConfig& cfg, MonthIndex t) {
  if (t <= cfg.t0) throw std::invalid_argument("ri_index needs t > t0");
  if (cfg.t0 < counts.axis_start) throw std::invalid_argument("ri t0 outside the counts axis");

  const int a = cfg.t0 - counts.axis_start;
  const int b = std::min(t - 1, counts.axis_end()) - counts.axis_start;
  if (b < a) return std::nullopt;

  const auto pre = prefix_sums(counts);
  const int rows = counts.cell_rows, cols = counts.cell_cols;
  std::vector<double> totals(counts.counts.size());
  for (size_t c = 0; c < counts.counts.size(); ++c)
    totals[c] = static_cast<double>(pre[c][b + 1] - pre[c][a]);

  std::vector<double> neigh(counts.counts.size(), 0.0);
  double sum = 0.0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double acc = 0.0;
      int k = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;  // edges: existing cells only
          acc += totals[static_cast<size_t>(rr) * cols + cc];
          ++k;
        }
      }
      const size_t idx = static_cast<size_t>(r) * cols + c;
      neigh[idx] = acc / k;
      sum += neigh[idx];
    }
  }
  if (sum <= 0.0) return std::nullopt;
  for (double& v : neigh) v /= sum;
  return neigh;
}

std::vector<std::uint8_t> high_topn(std::span<const std::optional<double>> f, long m,
                                    long t_f, long t_hr) {
  if (m < 0 || t_f <= 0 || t_hr <= 0) throw std::invalid_argument("bad high_topn arguments");
  std::vector<std::uint8_t> out(f.size(), 0);
  const long n = std::llround(std::floor(static_cast<double>(m) * t_f / t_hr + 0.5));
  if (n <= 0) return out;

  std::vector<std::pair<double, size_t>> defined;
  for (size_t k = 0; k < f.size(); ++k)
    if (f[k]) defined.push_back({*f[k], k});
  std::sort(defined.begin(), defined.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;  // ties: earlier month first
  });
  const size_t take = std::min(defined.size(), static_cast<size_t>(n));
  for (size_t k = 0; k < take; ++k) out[defined[k].second] = 1;
  return out;
}

}  // namespace resi
