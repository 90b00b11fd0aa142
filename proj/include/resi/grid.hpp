#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "resi/event.hpp"
#include "resi/times.hpp"

namespace resi {

// Geometry is evaluated on a 1e-6-degree integer lattice so that decimal mesh
// boundaries (multiples of 0.1) and catalog coordinates (centi-arcminutes)
// land exactly where they should. Coordinates are snapped to the nearest
// micro-degree before comparison.
std::int64_t microdeg(double degrees);

// Lat/lon-aligned rectangle, half-open: [lat0, lat0+lat_len) x [lon0, lon0+lon_len).
struct Region {
  double lat0 = 0.0;
  double lon0 = 0.0;
  double lat_len = 0.0;
  double lon_len = 0.0;

  static Region from_corners(double lat0, double lon0, double lat1, double lon1);
  double lat1() const { return lat0 + lat_len; }
  double lon1() const { return lon0 + lon_len; }
  bool contains(double lat, double lon) const;
  bool operator==(const Region&) const = default;
};

struct GridSpec {
  double dx = 0.1;       // mesh width, latitude (deg)
  double dy = 0.1;       // mesh width, longitude (deg)
  int theta_m = 1;       // quaking-mesh threshold: quaking iff count > theta_m
  double m_theta = 2.0;  // mesh cutoff magnitude

  bool operator==(const GridSpec&) const = default;
};

struct MeshIdx {
  int i = 0;  // latitude row
  int j = 0;  // longitude column

  auto operator<=>(const MeshIdx&) const = default;
};

int grid_rows(const Region& region, const GridSpec& spec);
int grid_cols(const Region& region, const GridSpec& spec);

// Mesh containing (lat, lon), or nullopt when outside the half-open region.
std::optional<MeshIdx> mesh_index(double lat, double lon, const Region& region,
                                  const GridSpec& spec);

// Per-mesh counts of magnitude >= m_theta events for one (region, window).
// `counts` is sorted by (i, j) and omits empty meshes. region_total counts all
// such events inside the region (quaking or not); universe_total the ones in
// the universe region the analysis runs over.
struct MeshWindowCounts {
  Region region;
  GridSpec spec;
  TimeWindow window;
  std::vector<std::pair<MeshIdx, int>> counts;
  long long region_total = 0;
  long long universe_total = 0;

  int count_at(MeshIdx m) const;
};

// Bin events into per-window mesh counts. universe_total is set to
// region_total; when the region is a sub-region, overwrite it afterwards (see
// split_by_cells). Event order does not affect the result.
std::vector<MeshWindowCounts> bin_events(std::span<const Event> events, const Region& region,
                                         const GridSpec& spec,
                                         const std::vector<TimeWindow>& windows);

// Msh(S): meshes with count > theta_m.
std::vector<MeshIdx> quaking_meshes(const MeshWindowCounts& counts);

// Row-major tiling of the universe into square cells of cell_len degrees,
// bottom-left cell first. Throws when cell_len does not divide the extents.
std::vector<Region> cell_grid(const Region& universe, double cell_len);

// Split universe-level counts into per-cell counts with cell-local mesh
// indices; universe totals are carried over. Result is [cell][window].
std::vector<std::vector<MeshWindowCounts>> split_by_cells(
    const std::vector<MeshWindowCounts>& universe_counts, double cell_len);

}  // namespace resi
