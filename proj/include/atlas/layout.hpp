#pragma once

#include "atlas/cluster.hpp"
#include "atlas/common.hpp"
#include "atlas/geometry.hpp"

#include "json.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace atlas {

struct Bubble {
  TopicRef topic;
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
  int cluster = 0;
  std::string label;
};

struct ClusterOutline {
  int cluster = 0;
  std::vector<Point> points;  // closed, counter-clockwise
};

struct BubbleMap {
  std::vector<Bubble> bubbles;
  std::vector<ClusterOutline> cluster_outlines;
  Circle bounds;
};

struct LayoutOptions {
  double padding_fraction = 0.04;  // of the mean leaf radius
  int rotation_steps = 64;
  int arc_points = 32;
  double max_radius = 100.0;
};

/// What the leaves of a dendrogram stand for.
struct MapLeaves {
  Level level = Level::main;
  std::vector<int> topics;          // global topic index per leaf
  std::vector<double> weights;      // S_k per leaf, all > 0
  std::vector<std::string> labels;  // display label per leaf
};

/// Bubble treemap: radii proportional to sqrt(S_k) with the largest at
/// options.max_radius; subtrees packed pairwise in merge order, the second
/// child slid against the first along the best of options.rotation_steps
/// directions; colors and outlines from cut(dendrogram, n_clusters).
BubbleMap layout_map(const Dendrogram& dendrogram, const MapLeaves& leaves,
                     int n_clusters, const LayoutOptions& options = {});

void write_svg(const BubbleMap& map, const std::filesystem::path& path);

void to_json(nlohmann::json& j, const Bubble& bubble);
void from_json(const nlohmann::json& j, Bubble& bubble);
void to_json(nlohmann::json& j, const BubbleMap& map);
void from_json(const nlohmann::json& j, BubbleMap& map);

}  // namespace atlas
