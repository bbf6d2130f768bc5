#pragma once

#include "atlas/common.hpp"

#include <span>
#include <vector>

namespace atlas {

/// 1 - cos(a, b). A zero-norm vector is at distance 1 from any other
/// vector. Throws atlas::Error on length mismatch.
double cosine_distance(std::span<const double> a, std::span<const double> b);

struct DistanceMatrix {
  RowMatrix entries;  // symmetric, zero diagonal, values in [0, 2]

  int size() const { return static_cast<int>(entries.rows()); }
  double operator()(int i, int j) const { return entries(i, j); }
};

DistanceMatrix cosine_distance_matrix(const std::vector<std::vector<double>>& vectors);

struct Merge {
  int left = 0;   // smaller node id
  int right = 0;
  double height = 0.0;
  int node = 0;   // leaf_count + merge index

  bool operator==(const Merge&) const = default;
};

/// Leaves are 0..n-1, internal nodes n..2n-2 in merge order.
struct Dendrogram {
  int leaf_count = 0;
  std::vector<Merge> merges;

  bool operator==(const Dendrogram&) const = default;
};

/// Complete-linkage agglomerative clustering. Ties on the linkage distance
/// go to the lexicographically smallest (left, right) node pair.
Dendrogram agglomerate(const DistanceMatrix& distances);

/// Flat clusters after undoing the last n_clusters - 1 merges. Cluster ids
/// are ranked by the smallest leaf each cluster contains.
std::vector<int> cut(const Dendrogram& dendrogram, int n_clusters);

}  // namespace atlas
