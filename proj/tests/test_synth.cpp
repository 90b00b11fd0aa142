#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "resi/catalog.hpp"
#include "resi/clustering.hpp"
#include "resi/config.hpp"
#include "resi/synth.hpp"

using namespace resi;

TEST_CASE("zero rates produce an empty stream") {
  ScenarioSpec spec;
  spec.phases = {{12, {{0, 0, 3, 3}}, 0.0, 0.0}};
  CHECK(generate(spec).empty());
}

TEST_CASE("same seed gives a byte-identical stream") {
  const ScenarioSpec spec = default_figure1_scenario();
  const auto a = generate(spec);
  const auto b = generate(spec);
  REQUIRE(a.size() == b.size());
  CHECK(a == b);

  std::ostringstream ca, cb;
  write_events_csv(ca, a);
  write_events_csv(cb, b);
  CHECK(ca.str() == cb.str());

  ScenarioSpec other = spec;
  other.seed += 1;
  CHECK(generate(other) != a);
}

TEST_CASE("single-mesh scenario counts replay exactly") {
  ScenarioSpec spec;
  spec.seed = 99;
  spec.phases = {{12, {{5, 5, 5, 5}}, 2.0, 0.0}};
  const auto events = generate(spec);

  // Independent replay of the generator's draw order: one Poisson count per
  // month for the single mesh, then position/time/magnitude draws per event.
  std::mt19937_64 rng(spec.seed);
  auto u01 = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto poisson = [&](double lambda) {
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= u01();
    } while (p > limit);
    return k - 1;
  };
  long expected_total = 0;
  std::vector<long> monthly(12, 0);
  for (int m = 0; m < 12; ++m) {
    const int n = poisson(2.0);
    monthly[m] = n;
    expected_total += n;
    for (int e = 0; e < n; ++e) {
      u01();  // lat
      u01();  // lon
      u01();  // time
      u01();  // magnitude
    }
  }
  CHECK(static_cast<long>(events.size()) == expected_total);

  std::vector<long> by_month(12, 0);
  for (const Event& e : events) ++by_month[e.time.month_idx() - spec.start_month];
  CHECK(by_month == monthly);

  for (const Event& e : events) {
    CHECK(e.magnitude >= spec.mag_floor);
    CHECK(spec.region.contains(e.lat, e.lon));
    const auto mesh = mesh_index(e.lat, e.lon, spec.region, spec.grid);
    REQUIRE(mesh.has_value());
    CHECK(*mesh == MeshIdx{5, 5});
  }
}

TEST_CASE("events come out time-sorted and fixed-width encodable") {
  const auto events = generate(default_figure1_scenario());
  REQUIRE_FALSE(events.empty());
  for (size_t k = 1; k < events.size(); ++k)
    CHECK(events[k - 1].time.to_centiseconds() <= events[k].time.to_centiseconds());

  const ColumnMap map;
  for (size_t k = 0; k < events.size(); k += 97) {
    const auto out = parse_record(encode_record(events[k], map), map);
    REQUIRE(std::holds_alternative<Event>(out));
    CHECK(std::get<Event>(out) == events[k]);
  }
}

TEST_CASE("cluster-count trajectory follows the phase schedule") {
  // 3x3-mesh clusters at rate 5: a mesh misses the quaking threshold only
  // when it draws fewer than two events.
  ScenarioSpec spec;
  spec.seed = 4242;
  ScenarioPhase one{12, {{10, 10, 12, 12}}, 5.0, 0.0};
  ScenarioPhase four{24,
                     {{4, 4, 6, 6}, {4, 24, 6, 26}, {24, 4, 26, 6}, {24, 24, 26, 26}},
                     5.0,
                     0.0};
  ScenarioPhase merged = one;
  spec.phases = {one, four, merged};

  const auto events = generate(spec);
  const auto windows = make_windows(spec.start_month, spec.start_month + 47, 1);
  const auto counts = bin_events(events, spec.region, spec.grid, windows);

  const std::vector<size_t> designed = [] {
    std::vector<size_t> d(48, 1);
    for (int k = 12; k < 36; ++k) d[k] = 4;
    return d;
  }();
  int matches = 0;
  for (size_t w = 0; w < counts.size(); ++w) {
    const auto part = make_clusters(quaking_meshes(counts[w]));
    if (part.size() == designed[w]) ++matches;
  }
  CHECK(matches >= 46);  // at least 95% of the 48 windows
}

TEST_CASE("deterministic mode emits exact counts at lattice positions") {
  ScenarioSpec spec;
  spec.deterministic = true;
  spec.phases = {{3, {{2, 2, 3, 3}}, 4.0, 0.0}};  // 4 meshes x 4 events x 3 months
  const auto events = generate(spec);
  CHECK(events.size() == 48);
  const auto again = generate(spec);
  CHECK(events == again);

  const auto windows = make_windows(spec.start_month, spec.start_month + 2, 1);
  const auto counts = bin_events(events, spec.region, spec.grid, windows);
  for (const auto& c : counts) {
    REQUIRE(c.counts.size() == 4);
    for (const auto& [mesh, n] : c.counts) CHECK(n == 4);
  }
}

TEST_CASE("scenario files parse into specs") {
  const std::string text = R"(
# comment
[scenario]
seed = 7
region = [30.0, 130.0, 31.0, 131.0]
start = "2001-06"
deterministic = true
mag_floor = 2.5

[phase.a]
months = 2
rate = 3
clusters = ["0,0,1,1"]

[phase.b]
months = 1
rate = 2
clusters = ["4,4,4,4", "7,7,8,8"]
)";
  const ScenarioSpec spec = scenario_from_config(ConfigDoc::parse(text));
  CHECK(spec.seed == 7);
  CHECK(spec.region == Region::from_corners(30.0, 130.0, 31.0, 131.0));
  CHECK(spec.start_month == month_index(2001, 6));
  CHECK(spec.deterministic);
  CHECK(spec.mag_floor == 2.5);
  REQUIRE(spec.phases.size() == 2);
  CHECK(spec.phases[0].months == 2);
  CHECK(spec.phases[0].clusters == std::vector<MeshRect>{{0, 0, 1, 1}});
  REQUIRE(spec.phases[1].clusters.size() == 2);
  CHECK(spec.phases[1].clusters[1] == MeshRect{7, 7, 8, 8});
  CHECK(spec.total_months() == 3);
}
