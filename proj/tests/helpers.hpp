#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they check.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "resi/event.hpp"
#include "resi/grid.hpp"

namespace testref {

// 8-connected component labeling by plain breadth-first search over a set.
inline std::vector<std::set<std::pair<int, int>>> bfs_components(
    const std::set<std::pair<int, int>>& meshes) {
  std::vector<std::set<std::pair<int, int>>> comps;
  std::set<std::pair<int, int>> seen;
  for (const auto& start : meshes) {
    if (seen.count(start)) continue;
    std::set<std::pair<int, int>> comp;
    std::queue<std::pair<int, int>> queue;
    queue.push(start);
    seen.insert(start);
    while (!queue.empty()) {
      const auto [i, j] = queue.front();
      queue.pop();
      comp.insert({i, j});
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const std::pair<int, int> n{i + di, j + dj};
          if (meshes.count(n) && !seen.count(n)) {
            seen.insert(n);
            queue.push(n);
          }
        }
      }
    }
    comps.push_back(std::move(comp));
  }
  // Canonical order for comparisons.
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
  return comps;
}

inline std::vector<std::set<std::pair<int, int>>> as_mesh_sets(
    const std::vector<std::vector<resi::MeshIdx>>& clusters) {
  std::vector<std::set<std::pair<int, int>>> out;
  for (const auto& c : clusters) {
    std::set<std::pair<int, int>> s;
    for (resi::MeshIdx m : c) s.insert({m.i, m.j});
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
  return out;
}

// Exhaustive prec/delay sums straight from their definitions.
// Series are full-axis vectors; entries before `defined_from` are ignored.
inline std::optional<double> naive_prec(const std::vector<int>& f, const std::vector<int>& g,
                                        int defined_from, int delta, int t_end) {
  long num = 0, den = 0;
  for (int t = defined_from; t <= t_end - delta; ++t) {
    if (t < 0 || t >= static_cast<int>(f.size()) || f[t] != 1) continue;
    ++den;
    int any = 0;
    for (int tau = 1; tau <= delta; ++tau) {
      const int u = t + tau;
      if (u >= 0 && u < static_cast<int>(g.size()) && g[u] == 1) any = 1;
    }
    num += any;
  }
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / den;
}

inline std::optional<double> naive_delay(const std::vector<int>& g, const std::vector<int>& f,
                                         int defined_from, int delta, int t_end) {
  long num = 0, den = 0;
  for (int t = defined_from + delta; t <= t_end; ++t) {
    if (t < 0 || t >= static_cast<int>(g.size()) || g[t] != 1) continue;
    ++den;
    int any = 0;
    for (int tau = 1; tau <= delta; ++tau) {
      const int u = t - tau;
      if (u >= defined_from && u < static_cast<int>(f.size()) && f[u] == 1) any = 1;
    }
    num += any;
  }
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / den;
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace testref
