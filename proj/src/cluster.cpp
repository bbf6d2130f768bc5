#include "atlas/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace atlas {

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("cosine_distance: vector length mismatch");
  double dot = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 1.0;
  // sqrt(x * x) == x exactly, so a vector is at distance 0 from itself.
  const double d = 1.0 - dot / std::sqrt(aa * bb);
  return std::clamp(d, 0.0, 2.0);
}

DistanceMatrix cosine_distance_matrix(const std::vector<std::vector<double>>& vectors) {
  if (vectors.empty()) throw Error("cosine_distance_matrix: no vectors");
  const std::size_t len = vectors.front().size();
  if (len == 0) throw Error("cosine_distance_matrix: empty vectors");
  for (const auto& v : vectors) {
    if (v.size() != len) throw Error("cosine_distance_matrix: vector length mismatch");
  }
  const int n = static_cast<int>(vectors.size());
  DistanceMatrix m{RowMatrix::Zero(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = cosine_distance(vectors[i], vectors[j]);
      m.entries(i, j) = d;
      m.entries(j, i) = d;
    }
  }
  return m;
}

Dendrogram agglomerate(const DistanceMatrix& distances) {
  const int n = distances.size();
  Dendrogram tree;
  tree.leaf_count = n;
  if (n <= 1) return tree;

  // linkage(a, b) over active node ids; complete linkage updates by max,
  // which is exact.
  const int total = 2 * n - 1;
  std::vector<double> linkage(static_cast<std::size_t>(total) * total, 0.0);
  auto at = [&](int a, int b) -> double& { return linkage[static_cast<std::size_t>(a) * total + b]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) at(i, j) = distances(i, j);
  }
  std::vector<int> active(n);
  std::iota(active.begin(), active.end(), 0);

  for (int step = 0; step < n - 1; ++step) {
    // `active` stays sorted, so the first strict minimum in (i, j) order is
    // the lexicographically smallest tied pair.
    int best_i = -1, best_j = -1;
    double best = 0.0;
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double d = at(active[i], active[j]);
        if (best_i < 0 || d < best) {
          best = d;
          best_i = static_cast<int>(i);
          best_j = static_cast<int>(j);
        }
      }
    }
    const int left = active[best_i];
    const int right = active[best_j];
    const int node = n + step;
    tree.merges.push_back({left, right, best, node});
    active.erase(active.begin() + best_j);
    active.erase(active.begin() + best_i);
    for (int other : active) {
      const double d = std::max(at(left, other), at(right, other));
      at(node, other) = d;
      at(other, node) = d;
    }
    active.push_back(node);  // largest id so far: order preserved
  }
  return tree;
}

std::vector<int> cut(const Dendrogram& dendrogram, int n_clusters) {
  const int n = dendrogram.leaf_count;
  if (n_clusters < 1 || n_clusters > n) {
    throw Error("cut: n_clusters " + std::to_string(n_clusters) + " outside [1, " +
                std::to_string(n) + "]");
  }
  std::vector<int> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const int keep = (n - 1) - (n_clusters - 1);
  for (int m = 0; m < keep; ++m) {
    const auto& merge = dendrogram.merges[m];
    parent[find(merge.left)] = merge.node;
    parent[find(merge.right)] = merge.node;
  }
  // Leaves are visited in index order, so the first leaf of each root is its
  // smallest and ids come out ranked by it.
  std::vector<int> root_id(2 * n - 1, -1);
  std::vector<int> labels(n);
  int next = 0;
  for (int leaf = 0; leaf < n; ++leaf) {
    const int root = find(leaf);
    if (root_id[root] < 0) root_id[root] = next++;
    labels[leaf] = root_id[root];
  }
  return labels;
}

}  // namespace atlas
