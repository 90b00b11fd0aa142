#pragma once

#include <cstdint>
#include <vector>

#include "resi/event.hpp"
#include "resi/grid.hpp"

namespace resi {

// Inclusive mesh-index rectangle within the scenario region's grid.
struct MeshRect {
  int i0 = 0, j0 = 0, i1 = 0, j1 = 0;

  bool operator==(const MeshRect&) const = default;
};

struct ScenarioPhase {
  int months = 1;
  std::vector<MeshRect> clusters;  // meshes active in this phase
  double rate_per_mesh = 0.0;      // expected events per active mesh per month
  double background_rate = 0.0;    // expected events per month anywhere in the region
};

// Cluster-transition scenario: a phase schedule over cluster geometries with
// Poisson counts and Gutenberg-Richter magnitudes. `deterministic` replaces
// the random draws with fixed per-mesh counts and lattice positions so a test
// can trace the expected series exactly.
struct ScenarioSpec {
  std::uint64_t seed = 1;
  Region region = Region::from_corners(30.0, 130.0, 34.0, 134.0);
  GridSpec grid;
  MonthIndex start_month = month_index(1983, 1);
  double b_value = 1.0;
  double mag_floor = 2.0;
  bool deterministic = false;
  std::vector<ScenarioPhase> phases;

  int total_months() const;
};

// Gap-separated-to-merged cluster transition over a 4x4-degree region:
// one cluster, a split into several gap-separated clusters, a sparse bridge,
// then the merged cluster.
ScenarioSpec default_figure1_scenario();

// Deterministic for a fixed spec: same spec, byte-identical stream.
// Events come out time-sorted.
std::vector<Event> generate(const ScenarioSpec& spec);

}  // namespace resi
