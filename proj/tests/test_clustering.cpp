#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "resi/clustering.hpp"

using namespace resi;

namespace {

std::vector<MeshIdx> random_meshes(std::mt19937_64& rng, int size, double fill) {
  std::vector<MeshIdx> out;
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      if (testref::uniform01(rng) < fill) out.push_back({i, j});
  return out;
}

std::set<std::pair<int, int>> as_set(const std::vector<MeshIdx>& meshes) {
  std::set<std::pair<int, int>> s;
  for (MeshIdx m : meshes) s.insert({m.i, m.j});
  return s;
}

}  // namespace

TEST_CASE("small cluster shapes") {
  SUBCASE("single mesh") {
    const auto part = make_clusters(std::vector<MeshIdx>{{0, 0}});
    REQUIRE(part.size() == 1);
    CHECK(part.clusters[0] == std::vector<MeshIdx>{{0, 0}});
  }
  SUBCASE("diagonal adjacency joins") {
    const auto part = make_clusters(std::vector<MeshIdx>{{0, 0}, {1, 1}});
    CHECK(part.size() == 1);
  }
  SUBCASE("one-mesh gap separates") {
    const auto part = make_clusters(std::vector<MeshIdx>{{0, 0}, {0, 2}});
    CHECK(part.size() == 2);
  }
  SUBCASE("empty input") {
    const auto part = make_clusters(std::vector<MeshIdx>{});
    CHECK(part.size() == 0);
    CHECK(part.labels.empty());
    CHECK(part.label_of(MeshIdx{0, 0}) == -1);
  }
}

TEST_CASE("partition matches breadth-first labeling on random grids") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const auto meshes = random_meshes(rng, 64, 0.25 + 0.5 * testref::uniform01(rng));
    const auto part = make_clusters(meshes);
    const auto expected = testref::bfs_components(as_set(meshes));
    const auto actual = testref::as_mesh_sets(part.clusters);
    REQUIRE(actual.size() == expected.size());
    CHECK(actual == expected);

    // Union covers the input, clusters are disjoint.
    size_t total = 0;
    for (const auto& c : part.clusters) total += c.size();
    CHECK(total == meshes.size());
    CHECK(part.labels.size() == meshes.size());
  }
}

TEST_CASE("seed order does not change the partition") {
  std::mt19937_64 rng(202);
  const auto meshes = random_meshes(rng, 32, 0.45);
  const auto reference = make_clusters(meshes);

  std::vector<size_t> order(meshes.size());
  std::iota(order.begin(), order.end(), 0);
  for (int trial = 0; trial < 100; ++trial) {
    std::shuffle(order.begin(), order.end(), rng);
    const auto part = make_clusters_seeded(meshes, order);
    CHECK(part == reference);
  }
}

TEST_CASE("gap property: dilated clusters stay disjoint") {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    const auto meshes = random_meshes(rng, 40, 0.35);
    const auto part = make_clusters(meshes);
    const auto all = as_set(meshes);
    for (size_t c = 0; c < part.size(); ++c) {
      for (MeshIdx m : part.clusters[c]) {
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            const int label = part.label_of(MeshIdx{m.i + di, m.j + dj});
            if (label >= 0) CHECK(label == static_cast<int>(c));
          }
        }
      }
    }
  }
}

TEST_CASE("cluster probabilities split the region mass") {
  MeshWindowCounts counts;
  counts.region = Region{0, 0, 1, 1};
  counts.spec = GridSpec{};
  counts.counts = {{MeshIdx{0, 0}, 2}, {MeshIdx{0, 1}, 0}, {MeshIdx{3, 3}, 6}};
  counts.region_total = 8;
  counts.universe_total = 16;

  const auto part = make_clusters(std::vector<MeshIdx>{{0, 0}, {3, 3}});
  const auto probs = cluster_probabilities(part, counts);
  REQUIRE_FALSE(probs.no_data);
  REQUIRE(probs.p_given_s.size() == 2);
  CHECK(probs.p_given_s[0] == 0.25);
  CHECK(probs.p_given_s[1] == 0.75);
  CHECK(probs.p_universe[0] == 0.125);
  CHECK(probs.p_s == 0.5);
  CHECK(probs.unclustered_mass == 0.0);

  SUBCASE("single cluster holding everything") {
    MeshWindowCounts all;
    all.spec = GridSpec{};
    all.counts = {{MeshIdx{1, 1}, 10}};
    all.region_total = 10;
    all.universe_total = 10;
    const auto one = make_clusters(std::vector<MeshIdx>{{1, 1}});
    const auto p = cluster_probabilities(one, all);
    CHECK(p.p_given_s == std::vector<double>{1.0});
    CHECK(p.p_s == 1.0);
  }

  SUBCASE("no events means no_data, no division") {
    MeshWindowCounts zero;
    zero.spec = GridSpec{};
    const auto p = cluster_probabilities(ClusterPartition{}, zero);
    CHECK(p.no_data);
  }

  SUBCASE("probabilities equal an independent recount") {
    std::mt19937_64 rng(404);
    MeshWindowCounts random_counts;
    random_counts.spec = GridSpec{};
    long long total = 0;
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        if (testref::uniform01(rng) < 0.4) {
          const int n = 2 + static_cast<int>(rng() % 9);
          random_counts.counts.push_back({MeshIdx{i, j}, n});
          total += n;
        }
      }
    }
    random_counts.region_total = total;
    random_counts.universe_total = total * 2;
    const auto partition = make_clusters(quaking_meshes(random_counts));
    const auto p = cluster_probabilities(partition, random_counts);
    for (size_t c = 0; c < partition.size(); ++c) {
      long long recount = 0;
      for (const auto& [mesh, n] : random_counts.counts)
        if (partition.label_of(mesh) == static_cast<int>(c)) recount += n;
      CHECK(p.p_given_s[c] == doctest::Approx(static_cast<double>(recount) / total).epsilon(1e-12));
    }
  }
}

TEST_CASE("geojson export carries ids and counts") {
  MeshWindowCounts counts;
  counts.region = Region{30.0, 130.0, 1.0, 1.0};
  counts.spec = GridSpec{};
  counts.counts = {{MeshIdx{0, 0}, 3}, {MeshIdx{5, 5}, 4}};
  counts.region_total = 7;
  counts.universe_total = 7;
  const auto part = make_clusters(std::vector<MeshIdx>{{0, 0}, {5, 5}});
  const std::string geo = cluster_geojson(part, counts);
  CHECK(geo.find("FeatureCollection") != std::string::npos);
  CHECK(geo.find("cluster_id") != std::string::npos);
  CHECK(geo.find("\"event_count\":3") != std::string::npos);
  CHECK(geo.find("\"event_count\":4") != std::string::npos);
  CHECK(geo.find("130.5") != std::string::npos);  // mesh corner longitude
}
