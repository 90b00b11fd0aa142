#include "resi/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace resi {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

// Knuth's product method; fine for the per-mesh rates used here.
int poisson_draw(std::mt19937_64& rng, double lambda) {
  if (lambda <= 0.0) return 0;
  const double limit = std::exp(-lambda);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform01(rng);
  } while (p > limit);
  return k - 1;
}

// Gutenberg-Richter magnitude above the floor, quantized to 0.1 steps.
double gr_magnitude(std::mt19937_64& rng, double floor_mag, double b_value) {
  const double u = uniform01(rng);
  const double m = floor_mag - std::log10(1.0 - u) / b_value;
  return std::min(9.9, std::floor(m * 10.0) / 10.0);
}

std::vector<MeshIdx> expand_rects(const std::vector<MeshRect>& rects) {
  std::vector<MeshIdx> meshes;
  for (const MeshRect& r : rects)
    for (int i = r.i0; i <= r.i1; ++i)
      for (int j = r.j0; j <= r.j1; ++j) meshes.push_back({i, j});
  std::sort(meshes.begin(), meshes.end());
  meshes.erase(std::unique(meshes.begin(), meshes.end()), meshes.end());
  return meshes;
}

// Catalog-resolution coordinates: snap to centi-arcminutes, composed the same
// way the record parser composes them so a round trip is value-exact.
double snap_to_centiminutes(double raw) {
  const long n = std::llround(raw * 6000.0);
  const long degrees = std::labs(n) / 6000;
  const long centi_minutes = std::labs(n) % 6000;
  const double v = static_cast<double>(degrees) + centi_minutes / 6000.0;
  return n < 0 ? -v : v;
}

// Coordinate inside mesh (index + fraction), kept off the mesh edges so the
// snap cannot cross a boundary.
double mesh_coordinate(double origin, int index, double fraction, double step) {
  return snap_to_centiminutes(origin + (index + 0.05 + 0.9 * fraction) * step);
}

UtcTime time_in_month(MonthIndex month, double fraction) {
  const int y = year_of(month), m = month_of(month);
  const int n_days = days_in_month(y, m);
  const double total = fraction * n_days * 86400.0;
  const int day = std::min(n_days - 1, static_cast<int>(total / 86400.0));
  const int rem = static_cast<int>(total - day * 86400.0);
  return UtcTime{y, m, day + 1, rem / 3600, rem / 60 % 60, rem % 60 * 100};
}

}  // namespace

int ScenarioSpec::total_months() const {
  int total = 0;
  for (const ScenarioPhase& p : phases) total += p.months;
  return total;
}

ScenarioSpec default_figure1_scenario() {
  ScenarioSpec spec;
  spec.seed = 20170301;
  spec.start_month = month_index(1990, 1);

  // One 10x10-mesh cluster. Long enough that the rank window can reach the
  // ten years the default gamma needs before any alarm is possible.
  ScenarioPhase whole;
  whole.months = 120;
  whole.clusters = {{12, 12, 21, 21}};
  whole.rate_per_mesh = 5.0;

  // The center goes quiet: four gap-separated 4x4 clusters.
  ScenarioPhase split;
  split.months = 24;
  split.clusters = {{12, 12, 15, 15}, {12, 18, 15, 21}, {18, 12, 21, 15}, {18, 18, 21, 21}};
  split.rate_per_mesh = 5.0;

  // Sparse events on the bridge between the lower clusters.
  ScenarioPhase bridge = split;
  bridge.months = 12;
  bridge.clusters.push_back({13, 16, 14, 17});
  bridge.background_rate = 0.0;

  // The clusters unite.
  ScenarioPhase merged = whole;
  merged.months = 12;

  spec.phases = {whole, split, bridge, merged};
  return spec;
}

std::vector<Event> generate(const ScenarioSpec& spec) {
  const int rows = grid_rows(spec.region, spec.grid);
  const int cols = grid_cols(spec.region, spec.grid);
  std::mt19937_64 rng(spec.seed);
  std::vector<Event> out;

  MonthIndex month = spec.start_month;
  for (const ScenarioPhase& phase : spec.phases) {
    const std::vector<MeshIdx> meshes = expand_rects(phase.clusters);
    for (const MeshIdx m : meshes)
      if (m.i < 0 || m.i >= rows || m.j < 0 || m.j >= cols)
        throw std::invalid_argument("scenario mesh outside the region grid");

    for (int k = 0; k < phase.months; ++k, ++month) {
      long seq = 0;
      auto emit = [&](MeshIdx mesh) {
        Event e;
        if (spec.deterministic) {
          // Lattice jitter keeps positions inside the mesh and replayable.
          e.lat = mesh_coordinate(spec.region.lat0, mesh.i, ((seq * 7) % 10) / 10.0,
                                  spec.grid.dx);
          e.lon = mesh_coordinate(spec.region.lon0, mesh.j, ((seq * 3) % 10) / 10.0,
                                  spec.grid.dy);
          e.time = time_in_month(month, ((seq * 13) % 97) / 97.0);
          e.magnitude = spec.mag_floor + 0.1 * (seq % 3);
        } else {
          e.lat = mesh_coordinate(spec.region.lat0, mesh.i, uniform01(rng), spec.grid.dx);
          e.lon = mesh_coordinate(spec.region.lon0, mesh.j, uniform01(rng), spec.grid.dy);
          e.time = time_in_month(month, uniform01(rng));
          e.magnitude = gr_magnitude(rng, spec.mag_floor, spec.b_value);
        }
        ++seq;
        out.push_back(e);
      };

      for (const MeshIdx mesh : meshes) {
        const int n = spec.deterministic ? static_cast<int>(std::llround(phase.rate_per_mesh))
                                         : poisson_draw(rng, phase.rate_per_mesh);
        for (int ev = 0; ev < n; ++ev) emit(mesh);
      }
      if (phase.background_rate > 0.0 && !spec.deterministic) {
        const int n = poisson_draw(rng, phase.background_rate);
        for (int ev = 0; ev < n; ++ev) {
          Event e;
          e.lat = snap_to_centiminutes(spec.region.lat0 +
                                       uniform01(rng) * spec.region.lat_len * 0.999);
          e.lon = snap_to_centiminutes(spec.region.lon0 +
                                       uniform01(rng) * spec.region.lon_len * 0.999);
          e.time = time_in_month(month, uniform01(rng));
          e.magnitude = gr_magnitude(rng, spec.mag_floor, spec.b_value);
          out.push_back(e);
        }
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), EventTimeOrder{});
  return out;
}

}  // namespace resi
