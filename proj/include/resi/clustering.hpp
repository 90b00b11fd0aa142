#pragma once

#include <span>
#include <string>
#include <vector>

#include "resi/grid.hpp"

namespace resi {

// Partition of the quaking meshes into maximal 8-connected components
// (edge- or vertex-adjacent). Canonical form: clusters ordered by their
// smallest mesh index, meshes ascending within each cluster.
struct ClusterPartition {
  std::vector<std::vector<MeshIdx>> clusters;
  std::vector<MeshIdx> meshes;  // sorted union of all clusters
  std::vector<int> labels;      // cluster id per entry of `meshes`

  size_t size() const { return clusters.size(); }
  int label_of(MeshIdx m) const;  // -1 when the mesh is in no cluster
  bool operator==(const ClusterPartition&) const = default;
};

// Connected-component labeling over the mesh set; time and memory O(n) in
// the covered grid area. The result does not depend on the order of
// `quaking`.
ClusterPartition make_clusters(std::span<const MeshIdx> quaking);

// Seeded flood-fill formulation: grow one cluster at a time from each seed,
// absorbing 8-neighbors. Produces the same partition for every seed order;
// kept as a second route for equivalence checks.
ClusterPartition make_clusters_seeded(std::span<const MeshIdx> quaking,
                                      std::span<const size_t> seed_order);

// Per-cluster event shares for one window.
// p_given_s[k] = quakes(C_k) / quakes(S);  p_universe[k] = quakes(C_k) / quakes(S^U).
// no_data is set when the region has no events (no division is attempted).
struct ClusterProbabilities {
  bool no_data = true;
  std::vector<long long> cluster_counts;
  std::vector<double> p_given_s;
  std::vector<double> p_universe;
  double p_s = 0.0;               // quakes(S) / quakes(S^U)
  double unclustered_mass = 0.0;  // share of region events outside every cluster
};

ClusterProbabilities cluster_probabilities(const ClusterPartition& partition,
                                           const MeshWindowCounts& counts);

// FeatureCollection with one MultiPolygon feature per cluster
// (properties: cluster_id, event_count).
std::string cluster_geojson(const ClusterPartition& partition, const MeshWindowCounts& counts);

}  // namespace resi
