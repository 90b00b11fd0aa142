#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "resi/baselines.hpp"

using namespace resi;

namespace {

CellMonthlyCounts make_counts(int rows, int cols, int months,
                              const std::function<long(int, int)>& value) {
  CellMonthlyCounts c;
  c.axis_start = 0;
  c.cell_rows = rows;
  c.cell_cols = cols;
  c.counts.resize(static_cast<size_t>(rows) * cols);
  for (int cell = 0; cell < rows * cols; ++cell) {
    c.counts[cell].resize(months);
    for (int m = 0; m < months; ++m) c.counts[cell][m] = value(cell, m);
  }
  return c;
}

// Step-by-step reference for the pattern-informatics index, written as the
// procedure reads: running means, across-cell normalization, difference
// against the reference end, average over reference starts, square, subtract
// the map average.
std::vector<double> pi_reference(const CellMonthlyCounts& counts, const PiConfig& cfg, int t) {
  const size_t n = counts.counts.size();
  auto mean_freq = [&](size_t cell, int from, int to) {
    double s = 0;
    for (int m = from; m <= to; ++m) s += counts.counts[cell][m];
    return s / (to - from + 1);
  };
  auto normalized = [&](int tb, int to) {
    std::vector<double> x(n);
    for (size_t c = 0; c < n; ++c) x[c] = mean_freq(c, tb, to);
    double mean = 0;
    for (double v : x) mean += v;
    mean /= n;
    double var = 0;
    for (double v : x) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / n);
    for (double& v : x) v = sd > 0 ? (v - mean) / sd : 0.0;
    return x;
  };

  std::vector<double> avg(n, 0.0);
  int count = 0;
  for (int tb = cfg.t0; tb <= cfg.t1; tb += cfg.tb_step_months) {
    const auto now = normalized(tb, t);
    const auto ref = normalized(tb, cfg.t1);
    for (size_t c = 0; c < n; ++c) avg[c] += now[c] - ref[c];
    ++count;
  }
  for (double& v : avg) v /= count;

  std::vector<double> pi(n);
  double bg = 0;
  for (size_t c = 0; c < n; ++c) {
    pi[c] = avg[c] * avg[c];
    bg += pi[c];
  }
  bg /= n;
  for (double& v : pi) v -= bg;
  return pi;
}

}  // namespace

TEST_CASE("pi_index is zero when nothing changes") {
  const auto counts = make_counts(2, 2, 48, [](int cell, int) { return 3 + cell; });
  PiConfig cfg;
  cfg.t0 = 0;
  cfg.t1 = 12;
  const auto pi = pi_index(counts, cfg, 40);
  for (double v : pi) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pi_index matches the step-by-step reference on a 2-cell map") {
  // Hand-set counts: cell 1 ramps up after the reference period.
  const auto counts = make_counts(1, 2, 36, [](int cell, int m) {
    if (cell == 0) return 4L;
    return m < 18 ? 2L : 9L;
  });
  PiConfig cfg;
  cfg.t0 = 2;
  cfg.t1 = 14;
  for (int t = 20; t < 36; t += 5) {
    const auto pi = pi_index(counts, cfg, t);
    const auto ref = pi_reference(counts, cfg, t);
    REQUIRE(pi.size() == ref.size());
    for (size_t c = 0; c < pi.size(); ++c)
      CHECK(pi[c] == doctest::Approx(ref[c]).epsilon(1e-9));
  }
}

TEST_CASE("pi_index against the reference on random maps") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto counts = make_counts(3, 3, 60, [&](int, int) {
      return static_cast<long>(rng() % 20);
    });
    PiConfig cfg;
    cfg.t0 = 0;
    cfg.t1 = 20;
    const int t = 30 + static_cast<int>(rng() % 29);
    const auto pi = pi_index(counts, cfg, t);
    const auto ref = pi_reference(counts, cfg, t);
    for (size_t c = 0; c < pi.size(); ++c)
      CHECK(pi[c] == doctest::Approx(ref[c]).epsilon(1e-9));
  }
}

TEST_CASE("pi_index: concentrated change wins the map") {
  const auto counts = make_counts(2, 3, 50, [](int cell, int m) {
    if (cell == 4 && m >= 25) return 30L;
    return 5L;
  });
  PiConfig cfg;
  cfg.t0 = 0;
  cfg.t1 = 20;
  const auto pi = pi_index(counts, cfg, 45);
  for (size_t c = 0; c < pi.size(); ++c)
    if (c != 4) CHECK(pi[4] > pi[c]);
}

TEST_CASE("pi_index translation invariance") {
  std::mt19937_64 rng(29);
  const auto base = make_counts(2, 2, 40, [&](int, int) {
    return static_cast<long>(rng() % 10);
  });
  auto shifted = base;
  for (auto& cell : shifted.counts)
    for (long& v : cell) v += 7;
  PiConfig cfg;
  cfg.t0 = 0;
  cfg.t1 = 10;
  const auto a = pi_index(base, cfg, 30);
  const auto b = pi_index(shifted, cfg, 30);
  for (size_t c = 0; c < a.size(); ++c) CHECK(a[c] == doctest::Approx(b[c]).epsilon(1e-9));
}

TEST_CASE("ri_index uniform counts give 1/36 each") {
  const auto counts = make_counts(6, 6, 24, [](int, int) { return 5L; });
  RiConfig cfg;
  cfg.t0 = 0;
  const auto ri = ri_index(counts, cfg, 20);
  REQUIRE(ri.has_value());
  for (double v : *ri) CHECK(v == 1.0 / 36.0);
}

TEST_CASE("ri_index neighborhood averaging and the edge rule") {
  // All events in one interior cell of a 3x3 map.
  const auto counts = make_counts(3, 3, 12, [](int cell, int) { return cell == 4 ? 90L : 0L; });
  RiConfig cfg;
  cfg.t0 = 0;
  const auto ri = ri_index(counts, cfg, 10);
  REQUIRE(ri.has_value());
  // Reference period [0, 9]: cell 4 holds 900 events. Corner neighborhoods
  // average over 4 existing cells, edges over 6, the center over 9.
  const double corner = 900.0 / 4.0;
  const double edge = 900.0 / 6.0;
  const double center = 900.0 / 9.0;
  const double total = 4 * corner + 4 * edge + center;
  CHECK((*ri)[0] == doctest::Approx(corner / total).epsilon(1e-12));
  CHECK((*ri)[1] == doctest::Approx(edge / total).epsilon(1e-12));
  CHECK((*ri)[4] == doctest::Approx(center / total).epsilon(1e-12));

  double sum = 0;
  for (double v : *ri) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ri_index sums to one on random counts") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto counts = make_counts(6, 6, 30, [&](int, int) {
      return static_cast<long>(rng() % 7);
    });
    RiConfig cfg;
    cfg.t0 = 0;
    const auto ri = ri_index(counts, cfg, 25);
    if (!ri) continue;
    double sum = 0;
    for (double v : *ri) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("ri_index with an empty reference period has no data") {
  const auto counts = make_counts(2, 2, 12, [](int, int) { return 0L; });
  RiConfig cfg;
  cfg.t0 = 0;
  CHECK_FALSE(ri_index(counts, cfg, 6).has_value());
}

TEST_CASE("high_topn selection") {
  using V = std::vector<std::optional<double>>;

  SUBCASE("zero alarms flag nothing") {
    const V f{1.0, 2.0, 3.0};
    CHECK(high_topn(f, 0, 10, 10) == std::vector<std::uint8_t>{0, 0, 0});
  }
  SUBCASE("equal periods take the top m") {
    const V f{0.5, 3.0, 1.0, 2.0, 2.5};
    CHECK(high_topn(f, 3, 10, 10) == std::vector<std::uint8_t>{0, 1, 0, 1, 1});
  }
  SUBCASE("ties at the cut go to the earlier month") {
    const V f{2.0, 3.0, 2.0, 1.0};
    CHECK(high_topn(f, 2, 10, 10) == std::vector<std::uint8_t>{1, 1, 0, 0});
  }
  SUBCASE("n larger than the defined series flags all defined points") {
    const V f{std::nullopt, 1.0, 2.0};
    CHECK(high_topn(f, 9, 10, 10) == std::vector<std::uint8_t>{0, 1, 1});
  }
  SUBCASE("period scaling rounds half up") {
    const V f{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    // m = 1, T_f/T_hr = 3/2 -> n = round(1.5) = 2
    CHECK(high_topn(f, 1, 3, 2) == std::vector<std::uint8_t>{0, 0, 0, 0, 1, 1});
  }
  SUBCASE("undefined points never flag") {
    const V f{std::nullopt, 5.0, std::nullopt, 1.0};
    CHECK(high_topn(f, 1, 10, 10) == std::vector<std::uint8_t>{0, 1, 0, 0});
  }
}
