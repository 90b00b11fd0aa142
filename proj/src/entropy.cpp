#include "resi/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace resi {

namespace {

// log_base == 0 selects the natural log.
double log_scale(double log_base) {
  if (log_base == 0.0) return 1.0;
  if (log_base <= 0.0 || log_base == 1.0) throw std::invalid_argument("bad log base");
  return 1.0 / std::log(log_base);
}

}  // namespace

double entropy_h(std::span<const double> probabilities, double log_base) {
  const double scale = log_scale(log_base);
  double sum = 0.0;
  double h = 0.0;
  for (double p : probabilities) {
    if (p < 0.0) throw std::invalid_argument("negative probability");
    if (p > 0.0) h -= p * std::log(p);
    sum += p;
  }
  if (sum > 1.0 + 1e-9) throw std::invalid_argument("probabilities sum past one");
  return h * scale;
}

std::optional<double> resi_value(double h, double p_s, double log_base) {
  if (p_s < 0.0 || p_s > 1.0 + 1e-9) throw std::invalid_argument("p_s outside [0, 1]");
  if (p_s == 0.0) return std::nullopt;
  return h - std::log(p_s) * log_scale(log_base);
}

std::vector<ResiPoint> resi_series(const std::vector<MeshWindowCounts>& cell_counts,
                                   int cell_id, double log_base) {
  std::vector<ResiPoint> out;
  out.reserve(cell_counts.size());
  for (const MeshWindowCounts& counts : cell_counts) {
    ResiPoint p;
    p.cell_id = cell_id;
    p.window = counts.window;
    if (counts.universe_total > 0)
      p.p_s = static_cast<double>(counts.region_total) / counts.universe_total;

    const std::vector<MeshIdx> quaking = quaking_meshes(counts);
    if (!quaking.empty() && counts.region_total > 0) {
      const ClusterPartition partition = make_clusters(quaking);
      const ClusterProbabilities probs = cluster_probabilities(partition, counts);
      p.cluster_count = partition.size();
      p.unclustered_mass = probs.unclustered_mass;
      p.h = entropy_h(probs.p_given_s, log_base);
      if (auto hr = resi_value(p.h, probs.p_s, log_base)) {
        p.hr = *hr;
        p.no_data = false;
      }
    }
    out.push_back(p);
  }
  return out;
}

std::optional<double> hr_avr_at(const std::vector<ResiPoint>& series, size_t idx) {
  if (idx >= series.size()) throw std::out_of_range("hr_avr_at index");
  if (series[idx].window.months >= 12)
    return series[idx].no_data ? std::nullopt : std::optional<double>(series[idx].hr);
  const size_t first = idx >= 5 ? idx - 5 : 0;
  double sum = 0.0;
  int n = 0;
  for (size_t k = first; k <= idx; ++k) {
    if (series[k].no_data) continue;
    sum += series[k].hr;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

void fill_hr_avr(std::vector<ResiPoint>& series) {
  for (size_t k = 0; k < series.size(); ++k) series[k].hr_avr = hr_avr_at(series, k);
}

std::optional<double> aggregate_resi(std::span<const std::pair<double, double>> ps_and_hr) {
  double weight = 0.0;
  double sum = 0.0;
  for (const auto& [p, hr] : ps_and_hr) {
    if (p < 0.0) throw std::invalid_argument("negative sub-region probability");
    weight += p;
    sum += p * hr;
  }
  if (weight <= 0.0) return std::nullopt;
  return sum / weight;
}

}  // namespace resi
