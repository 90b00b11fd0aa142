#include "resi/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace resi {

std::int64_t microdeg(double degrees) {
  return std::llround(degrees * 1e6);
}

Region Region::from_corners(double lat0, double lon0, double lat1, double lon1) {
  if (lat1 <= lat0 || lon1 <= lon0)
    throw std::invalid_argument("region corners must satisfy lat1 > lat0 and lon1 > lon0");
  return Region{lat0, lon0, lat1 - lat0, lon1 - lon0};
}

bool Region::contains(double lat, double lon) const {
  const std::int64_t u = microdeg(lat) - microdeg(lat0);
  const std::int64_t v = microdeg(lon) - microdeg(lon0);
  return u >= 0 && u < microdeg(lat_len) && v >= 0 && v < microdeg(lon_len);
}

namespace {

int axis_meshes(double extent, double step, const char* what) {
  const std::int64_t ext = microdeg(extent);
  const std::int64_t st = microdeg(step);
  if (st <= 0 || ext <= 0) throw std::invalid_argument(std::string("bad grid ") + what);
  return static_cast<int>((ext + st / 2) / st);
}

}  // namespace

int grid_rows(const Region& region, const GridSpec& spec) {
  return axis_meshes(region.lat_len, spec.dx, "rows");
}

int grid_cols(const Region& region, const GridSpec& spec) {
  return axis_meshes(region.lon_len, spec.dy, "cols");
}

std::optional<MeshIdx> mesh_index(double lat, double lon, const Region& region,
                                  const GridSpec& spec) {
  const std::int64_t u = microdeg(lat) - microdeg(region.lat0);
  const std::int64_t v = microdeg(lon) - microdeg(region.lon0);
  if (u < 0 || v < 0 || u >= microdeg(region.lat_len) || v >= microdeg(region.lon_len))
    return std::nullopt;
  const int i = static_cast<int>(u / microdeg(spec.dx));
  const int j = static_cast<int>(v / microdeg(spec.dy));
  return MeshIdx{i, j};
}

int MeshWindowCounts::count_at(MeshIdx m) const {
  auto it = std::lower_bound(counts.begin(), counts.end(), m,
                             [](const auto& p, MeshIdx key) { return p.first < key; });
  if (it != counts.end() && it->first == m) return it->second;
  return 0;
}

std::vector<MeshWindowCounts> bin_events(std::span<const Event> events, const Region& region,
                                         const GridSpec& spec,
                                         const std::vector<TimeWindow>& windows) {
  std::vector<MeshWindowCounts> out;
  out.reserve(windows.size());
  std::vector<std::map<MeshIdx, int>> acc(windows.size());
  std::vector<long long> totals(windows.size(), 0);

  // Window lookup by month; windows tile a contiguous month range.
  if (windows.empty()) return out;
  const MonthIndex first = windows.front().start;
  const MonthIndex last = windows.back().end();
  std::vector<int> window_of(static_cast<size_t>(last - first), -1);
  for (size_t w = 0; w < windows.size(); ++w)
    for (MonthIndex m = windows[w].start; m < windows[w].end(); ++m)
      if (m >= first && m < last) window_of[static_cast<size_t>(m - first)] = static_cast<int>(w);

  for (const Event& e : events) {
    if (e.magnitude < spec.m_theta) continue;
    const MonthIndex m = e.time.month_idx();
    if (m < first || m >= last) continue;
    const int w = window_of[static_cast<size_t>(m - first)];
    if (w < 0) continue;
    auto mi = mesh_index(e.lat, e.lon, region, spec);
    if (!mi) continue;
    ++acc[static_cast<size_t>(w)][*mi];
    ++totals[static_cast<size_t>(w)];
  }

  for (size_t w = 0; w < windows.size(); ++w) {
    MeshWindowCounts c;
    c.region = region;
    c.spec = spec;
    c.window = windows[w];
    c.counts.assign(acc[w].begin(), acc[w].end());
    c.region_total = totals[w];
    c.universe_total = totals[w];
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<MeshIdx> quaking_meshes(const MeshWindowCounts& counts) {
  std::vector<MeshIdx> out;
  for (const auto& [mesh, n] : counts.counts)
    if (n > counts.spec.theta_m) out.push_back(mesh);
  return out;
}

std::vector<Region> cell_grid(const Region& universe, double cell_len) {
  const std::int64_t step = microdeg(cell_len);
  const std::int64_t lat_ext = microdeg(universe.lat_len);
  const std::int64_t lon_ext = microdeg(universe.lon_len);
  if (step <= 0) throw std::invalid_argument("cell length must be positive");
  if (lat_ext % step != 0 || lon_ext % step != 0)
    throw std::invalid_argument("cell length must divide the universe extents");
  const int rows = static_cast<int>(lat_ext / step);
  const int cols = static_cast<int>(lon_ext / step);
  std::vector<Region> cells;
  cells.reserve(static_cast<size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      cells.push_back(Region{universe.lat0 + r * cell_len, universe.lon0 + c * cell_len,
                             cell_len, cell_len});
  return cells;
}

std::vector<std::vector<MeshWindowCounts>> split_by_cells(
    const std::vector<MeshWindowCounts>& universe_counts, double cell_len) {
  if (universe_counts.empty()) return {};
  const Region& universe = universe_counts.front().region;
  const GridSpec& spec = universe_counts.front().spec;
  const std::vector<Region> cells = cell_grid(universe, cell_len);

  const std::int64_t step = microdeg(cell_len);
  const int cell_cols = static_cast<int>(microdeg(universe.lon_len) / step);
  const int meshes_per_cell_i = static_cast<int>(step / microdeg(spec.dx));
  const int meshes_per_cell_j = static_cast<int>(step / microdeg(spec.dy));
  if (meshes_per_cell_i <= 0 || meshes_per_cell_j <= 0 ||
      step % microdeg(spec.dx) != 0 || step % microdeg(spec.dy) != 0)
    throw std::invalid_argument("mesh size must divide the cell length");

  std::vector<std::vector<MeshWindowCounts>> out(cells.size());
  for (size_t k = 0; k < cells.size(); ++k) {
    out[k].reserve(universe_counts.size());
    for (const auto& uc : universe_counts) {
      MeshWindowCounts c;
      c.region = cells[k];
      c.spec = spec;
      c.window = uc.window;
      c.universe_total = uc.universe_total;
      out[k].push_back(std::move(c));
    }
  }

  for (size_t w = 0; w < universe_counts.size(); ++w) {
    for (const auto& [mesh, n] : universe_counts[w].counts) {
      const int cr = mesh.i / meshes_per_cell_i;
      const int cc = mesh.j / meshes_per_cell_j;
      const size_t cell = static_cast<size_t>(cr) * cell_cols + cc;
      MeshWindowCounts& dst = out[cell][w];
      dst.counts.push_back({MeshIdx{mesh.i - cr * meshes_per_cell_i,
                                    mesh.j - cc * meshes_per_cell_j},
                            n});
      dst.region_total += n;
    }
  }
  // Per-cell subsequences of the (i, j)-sorted universe counts stay sorted
  // under the constant offset, so no re-sort is needed.
  return out;
}

}  // namespace resi
