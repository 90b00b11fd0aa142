#include "resi/clustering.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace resi {

namespace {

struct Bounds {
  int i0 = 0, j0 = 0, rows = 0, cols = 0;

  size_t flat(MeshIdx m) const {
    return static_cast<size_t>(m.i - i0) * cols + (m.j - j0);
  }
  bool inside(int i, int j) const {
    return i >= i0 && i < i0 + rows && j >= j0 && j < j0 + cols;
  }
};

Bounds bounding_box(std::span<const MeshIdx> meshes) {
  Bounds b;
  if (meshes.empty()) return b;
  int i0 = std::numeric_limits<int>::max(), i1 = std::numeric_limits<int>::min();
  int j0 = i0, j1 = i1;
  for (MeshIdx m : meshes) {
    i0 = std::min(i0, m.i);
    i1 = std::max(i1, m.i);
    j0 = std::min(j0, m.j);
    j1 = std::max(j1, m.j);
  }
  b.i0 = i0;
  b.j0 = j0;
  b.rows = i1 - i0 + 1;
  b.cols = j1 - j0 + 1;
  return b;
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

int ClusterPartition::label_of(MeshIdx m) const {
  const auto it = std::lower_bound(meshes.begin(), meshes.end(), m);
  if (it == meshes.end() || *it != m) return -1;
  return labels[static_cast<size_t>(it - meshes.begin())];
}

ClusterPartition make_clusters(std::span<const MeshIdx> quaking) {
  ClusterPartition part;
  if (quaking.empty()) return part;

  part.meshes.assign(quaking.begin(), quaking.end());
  if (!std::is_sorted(part.meshes.begin(), part.meshes.end())) {
    std::sort(part.meshes.begin(), part.meshes.end());
    part.meshes.erase(std::unique(part.meshes.begin(), part.meshes.end()), part.meshes.end());
  }
  const std::vector<MeshIdx>& meshes = part.meshes;

  // Two-pass labeling with provisional labels: the union-find stays sized by
  // the provisional label count, not the mesh count, so it sits in cache even
  // on million-mesh grids.
  const Bounds b = bounding_box(meshes);
  const size_t area = static_cast<size_t>(b.rows) * b.cols;
  std::vector<int> cell(area, -1);  // provisional label per grid position
  std::vector<int> parent;          // union-find over provisional labels
  constexpr int di[4] = {-1, -1, -1, 0};
  constexpr int dj[4] = {-1, 0, 1, -1};

  part.labels.assign(meshes.size(), -1);
  for (size_t k = 0; k < meshes.size(); ++k) {
    const MeshIdx m = meshes[k];
    int label = -1;
    for (int n = 0; n < 4; ++n) {
      const int ni = m.i + di[n], nj = m.j + dj[n];
      if (!b.inside(ni, nj)) continue;
      const int other = cell[static_cast<size_t>(ni - b.i0) * b.cols + (nj - b.j0)];
      if (other < 0) continue;
      if (label < 0) {
        label = find_root(parent, other);
      } else {
        const int rb = find_root(parent, other);
        if (label != rb) {
          const int lo = std::min(label, rb);
          parent[static_cast<size_t>(std::max(label, rb))] = lo;
          label = lo;
        }
      }
    }
    if (label < 0) {
      label = static_cast<int>(parent.size());
      parent.push_back(label);
    }
    cell[b.flat(m)] = label;
    part.labels[k] = label;
  }

  // Resolve provisional labels to roots, then densify in first-occurrence
  // order over the sorted meshes: cluster ids come out ordered by smallest
  // member and each cluster fills ascending.
  std::vector<int> dense(parent.size(), -1);
  std::vector<int> sizes;
  int next = 0;
  for (size_t k = 0; k < meshes.size(); ++k) {
    const int r = find_root(parent, part.labels[k]);
    if (dense[static_cast<size_t>(r)] < 0) {
      dense[static_cast<size_t>(r)] = next++;
      sizes.push_back(0);
    }
    part.labels[k] = dense[static_cast<size_t>(r)];
    ++sizes[static_cast<size_t>(part.labels[k])];
  }
  part.clusters.resize(static_cast<size_t>(next));
  for (int c = 0; c < next; ++c) part.clusters[static_cast<size_t>(c)].reserve(sizes[static_cast<size_t>(c)]);
  for (size_t k = 0; k < meshes.size(); ++k)
    part.clusters[static_cast<size_t>(part.labels[k])].push_back(meshes[k]);
  return part;
}

ClusterPartition make_clusters_seeded(std::span<const MeshIdx> quaking,
                                      std::span<const size_t> seed_order) {
  ClusterPartition part;
  if (quaking.empty()) return part;
  if (seed_order.size() != quaking.size())
    throw std::invalid_argument("seed order must index every quaking mesh");

  const Bounds b = bounding_box(quaking);
  const size_t area = static_cast<size_t>(b.rows) * b.cols;
  std::vector<int> cell(area, -1);
  for (size_t k = 0; k < quaking.size(); ++k) cell[b.flat(quaking[k])] = static_cast<int>(k);

  std::vector<int> raw_label(quaking.size(), -1);
  std::vector<int> stack;
  int next = 0;
  for (size_t s : seed_order) {
    if (raw_label[s] >= 0) continue;  // the seed already joined an earlier cluster
    const int label = next++;
    raw_label[s] = label;
    stack.assign(1, static_cast<int>(s));
    while (!stack.empty()) {
      const MeshIdx m = quaking[static_cast<size_t>(stack.back())];
      stack.pop_back();
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int ni = m.i + di, nj = m.j + dj;
          if (!b.inside(ni, nj)) continue;
          const int other = cell[static_cast<size_t>(ni - b.i0) * b.cols + (nj - b.j0)];
          if (other >= 0 && raw_label[static_cast<size_t>(other)] < 0) {
            raw_label[static_cast<size_t>(other)] = label;
            stack.push_back(other);
          }
        }
      }
    }
  }

  // Canonicalize: sort meshes, remap labels by first occurrence.
  std::vector<std::pair<MeshIdx, int>> tagged(quaking.size());
  for (size_t k = 0; k < quaking.size(); ++k) tagged[k] = {quaking[k], raw_label[k]};
  std::sort(tagged.begin(), tagged.end());
  std::vector<int> remap(static_cast<size_t>(next), -1);
  int canonical = 0;
  part.meshes.reserve(tagged.size());
  part.labels.reserve(tagged.size());
  for (const auto& [mesh, raw] : tagged) {
    if (remap[static_cast<size_t>(raw)] < 0) {
      remap[static_cast<size_t>(raw)] = canonical++;
      part.clusters.emplace_back();
    }
    const int label = remap[static_cast<size_t>(raw)];
    part.meshes.push_back(mesh);
    part.labels.push_back(label);
    part.clusters[static_cast<size_t>(label)].push_back(mesh);
  }
  return part;
}

ClusterProbabilities cluster_probabilities(const ClusterPartition& partition,
                                           const MeshWindowCounts& counts) {
  ClusterProbabilities out;
  out.cluster_counts.reserve(partition.size());
  long long clustered = 0;
  for (const auto& cluster : partition.clusters) {
    long long n = 0;
    for (MeshIdx m : cluster) n += counts.count_at(m);
    out.cluster_counts.push_back(n);
    clustered += n;
  }
  if (counts.region_total <= 0) return out;  // no_data: no events to divide by

  out.no_data = false;
  const double region = static_cast<double>(counts.region_total);
  const double universe = static_cast<double>(counts.universe_total);
  for (long long n : out.cluster_counts) {
    out.p_given_s.push_back(n / region);
    out.p_universe.push_back(universe > 0 ? n / universe : 0.0);
  }
  out.p_s = universe > 0 ? region / universe : 0.0;
  out.unclustered_mass = (region - clustered) / region;
  return out;
}

std::string cluster_geojson(const ClusterPartition& partition, const MeshWindowCounts& counts) {
  nlohmann::json features = nlohmann::json::array();
  const double dx = counts.spec.dx, dy = counts.spec.dy;
  for (size_t c = 0; c < partition.clusters.size(); ++c) {
    long long n = 0;
    nlohmann::json polygons = nlohmann::json::array();
    for (MeshIdx m : partition.clusters[c]) {
      n += counts.count_at(m);
      const double lat = counts.region.lat0 + m.i * dx;
      const double lon = counts.region.lon0 + m.j * dy;
      polygons.push_back({{{lon, lat},
                           {lon + dy, lat},
                           {lon + dy, lat + dx},
                           {lon, lat + dx},
                           {lon, lat}}});
    }
    features.push_back({{"type", "Feature"},
                        {"properties",
                         {{"cluster_id", static_cast<int>(c)}, {"event_count", n}}},
                        {"geometry", {{"type", "MultiPolygon"}, {"coordinates", polygons}}}});
  }
  nlohmann::json fc{{"type", "FeatureCollection"}, {"features", features}};
  return fc.dump();
}

}  // namespace resi
