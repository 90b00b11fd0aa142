#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "resi/baselines.hpp"
#include "resi/times.hpp"

namespace resi {

// Step indicator with a non-negative argument.
int unit_step(double x);

// Monthly 0/1 series on a shared axis; months before defined_start carry no
// value and never enter a sum.
struct BinarySeries {
  MonthIndex axis_start = 0;
  MonthIndex defined_start = 0;
  std::vector<std::uint8_t> values;  // one per month from axis_start

  MonthIndex axis_end() const { return axis_start + static_cast<int>(values.size()) - 1; }
  int at(MonthIndex t) const;  // -1 undefined, else 0/1
};

// Share of f-alarms followed by a g-positive within (t, t + delta] months,
// over t in [f.defined_start, t_end - delta]. nullopt when no alarm is in
// range. t_end is the last data month.
std::optional<double> prec(const BinarySeries& f, const BinarySeries& g, int delta_months,
                           MonthIndex t_end);

// Share of g-positives preceded by an f-positive within [t - delta, t - 1],
// over t in [f.defined_start + delta, t_end].
std::optional<double> delay(const BinarySeries& g, const BinarySeries& f, int delta_months,
                            MonthIndex t_end);

// Same sums over an explicit t range [t_lo, t_hi]; the shared-range
// evaluation mode and the range-invariance checks use these.
std::optional<double> prec_over(const BinarySeries& f, const BinarySeries& g, int delta_months,
                                MonthIndex t_lo, MonthIndex t_hi);
std::optional<double> delay_over(const BinarySeries& g, const BinarySeries& f, int delta_months,
                                 MonthIndex t_lo, MonthIndex t_hi);

BinarySeries all_ones_like(const BinarySeries& f);  // the "random" reference

// Condition A: prec(f, g) strictly beats prec(random, g).
// Condition B: delay(g, f) strictly beats delay(random, f).
// nullopt when either side is undefined.
std::optional<bool> condition_a(const BinarySeries& f, const BinarySeries& activity,
                                int delta_months, MonthIndex t_end);
std::optional<bool> condition_b(const BinarySeries& f, const BinarySeries& activity,
                                int delta_months, MonthIndex t_end);

// Cells whose monthly mean event count over the whole axis is >= 1.
std::vector<std::uint8_t> active_cells(const CellMonthlyCounts& counts);

struct PairScores {
  std::optional<double> prec;
  std::optional<double> delay;
  std::optional<double> prec_random;
  std::optional<double> delay_random;
  std::optional<bool> condition_a;
  std::optional<bool> condition_b;
};

struct EvalReport {
  std::vector<int> delta_ts;
  std::vector<std::string> functions;
  std::vector<std::uint8_t> active;  // per cell
  // scores[cell][function][delta index]
  std::vector<std::vector<std::vector<PairScores>>> scores;
};

struct EvalInputs {
  std::vector<std::string> function_names;              // e.g. hr_sat, pi, ri
  std::vector<std::vector<BinarySeries>> alarm_series;  // [function][cell]
  std::vector<BinarySeries> activity_series;            // [cell]
  CellMonthlyCounts cell_counts;
  std::vector<int> delta_ts{12, 24, 36};
  MonthIndex t_end = 0;
  bool shared_range = false;  // align every function on the latest defined_start
};

EvalReport evaluate_all(const EvalInputs& in);

std::string report_json(const EvalReport& report);

}  // namespace resi
