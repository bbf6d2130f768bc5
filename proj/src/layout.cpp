#include "atlas/layout.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>

namespace atlas {

using nlohmann::json;

namespace {

// A packed subtree: its leaf circles relative to its enclosing circle's center.
struct Packed {
  std::vector<int> leaves;
  std::vector<Circle> circles;
  double radius = 0.0;
};

// Smallest translation t along (ux, uy) that keeps every circle of `moving`
// at least `gap` away from every circle of `fixed` for all larger t.
double contact_distance(const Packed& fixed, const Packed& moving, double ux, double uy,
                        double gap) {
  double t = -std::numeric_limits<double>::infinity();
  for (const auto& a : fixed.circles) {
    for (const auto& b : moving.circles) {
      const double px = b.x - a.x, py = b.y - a.y;
      const double reach = a.r + b.r + gap;
      const double pu = px * ux + py * uy;
      const double disc = pu * pu - (px * px + py * py - reach * reach);
      if (disc >= 0.0) t = std::max(t, -pu + std::sqrt(disc));
    }
  }
  return std::isfinite(t) ? t : 0.0;
}

Packed pack_pair(const Packed& first, const Packed& second, double gap, int steps) {
  std::vector<Circle> trial(first.circles);
  trial.resize(first.circles.size() + second.circles.size());
  const std::size_t offset = first.circles.size();

  double best_radius = std::numeric_limits<double>::infinity();
  double best_t = 0.0, best_ux = 1.0, best_uy = 0.0;
  for (int step = 0; step < steps; ++step) {
    const double angle = 2.0 * std::numbers::pi * step / steps;
    const double ux = std::cos(angle), uy = std::sin(angle);
    const double t = contact_distance(first, second, ux, uy, gap);
    for (std::size_t i = 0; i < second.circles.size(); ++i) {
      const auto& b = second.circles[i];
      trial[offset + i] = {b.x + t * ux, b.y + t * uy, b.r};
    }
    const Circle enclosing = smallest_enclosing_circle(trial);
    if (enclosing.r < best_radius) {
      best_radius = enclosing.r;
      best_t = t;
      best_ux = ux;
      best_uy = uy;
    }
  }

  Packed out;
  out.leaves = first.leaves;
  out.leaves.insert(out.leaves.end(), second.leaves.begin(), second.leaves.end());
  out.circles = first.circles;
  for (const auto& b : second.circles) {
    out.circles.push_back({b.x + best_t * best_ux, b.y + best_t * best_uy, b.r});
  }
  const Circle enclosing = smallest_enclosing_circle(out.circles);
  for (auto& c : out.circles) {
    c.x -= enclosing.x;
    c.y -= enclosing.y;
  }
  out.radius = enclosing.r;
  return out;
}

}  // namespace

BubbleMap layout_map(const Dendrogram& dendrogram, const MapLeaves& leaves, int n_clusters,
                     const LayoutOptions& options) {
  const int n = dendrogram.leaf_count;
  if (n < 1) throw Error("layout_map: empty dendrogram");
  if (static_cast<int>(leaves.weights.size()) != n || static_cast<int>(leaves.topics.size()) != n ||
      static_cast<int>(leaves.labels.size()) != n) {
    throw Error("layout_map: leaf data does not match the dendrogram's leaf count");
  }
  for (double w : leaves.weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw Error("layout_map: topic weights must be positive");
  }
  if (options.rotation_steps < 1) throw Error("layout_map: rotation_steps must be positive");

  const double max_weight = *std::max_element(leaves.weights.begin(), leaves.weights.end());
  std::vector<double> radius(n);
  for (int i = 0; i < n; ++i) radius[i] = options.max_radius * std::sqrt(leaves.weights[i] / max_weight);
  const double gap = options.padding_fraction * std::accumulate(radius.begin(), radius.end(), 0.0) / n;

  std::vector<Packed> nodes(2 * n - 1);
  for (int i = 0; i < n; ++i) nodes[i] = Packed{{i}, {{0.0, 0.0, radius[i]}}, radius[i]};
  for (const auto& merge : dendrogram.merges) {
    nodes[merge.node] = pack_pair(nodes[merge.left], nodes[merge.right], gap, options.rotation_steps);
    nodes[merge.left] = {};
    nodes[merge.right] = {};
  }
  const Packed& root = nodes[n == 1 ? 0 : dendrogram.merges.back().node];

  const int clusters = std::clamp(n_clusters, 1, n);
  const auto cluster_of = cut(dendrogram, clusters);

  BubbleMap map;
  map.bounds = {0.0, 0.0, root.radius};
  map.bubbles.resize(n);
  for (std::size_t i = 0; i < root.leaves.size(); ++i) {
    const int leaf = root.leaves[i];
    const auto& c = root.circles[i];
    map.bubbles[leaf] = Bubble{{leaves.level, leaves.topics[leaf]}, c.x, c.y, c.r,
                               cluster_of[leaf], leaves.labels[leaf]};
  }
  for (int k = 0; k < clusters; ++k) {
    std::vector<Circle> members;
    for (const auto& b : map.bubbles) {
      if (b.cluster == k) members.push_back({b.x, b.y, b.r});
    }
    map.cluster_outlines.push_back({k, circle_hull_outline(members, gap, options.arc_points)});
  }
  return map;
}

void write_svg(const BubbleMap& map, const std::filesystem::path& path) {
  static constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                             "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  const double R = map.bounds.r * 1.05;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << map.bounds.x - R << ' '
      << map.bounds.y - R << ' ' << 2 * R << ' ' << 2 * R << "\">\n";
  for (const auto& outline : map.cluster_outlines) {
    out << "<polygon fill=\"none\" stroke=\"" << kPalette[outline.cluster % 10] << "\" points=\"";
    for (const auto& p : outline.points) out << p.x << ',' << p.y << ' ';
    out << "\"/>\n";
  }
  for (const auto& b : map.bubbles) {
    out << "<circle cx=\"" << b.x << "\" cy=\"" << b.y << "\" r=\"" << b.r << "\" fill=\""
        << kPalette[b.cluster % 10] << "\" fill-opacity=\"0.6\"><title>" << b.label
        << "</title></circle>\n";
  }
  out << "</svg>\n";
}

void to_json(json& j, const Bubble& b) {
  j = json{{"level", to_string(b.topic.level)}, {"topic", b.topic.index}, {"x", b.x}, {"y", b.y},
           {"r", b.r}, {"cluster", b.cluster}, {"label", b.label}};
}

void from_json(const json& j, Bubble& b) {
  b.topic = {level_from_string(j.at("level").get<std::string>()), j.at("topic").get<int>()};
  b.x = j.at("x").get<double>();
  b.y = j.at("y").get<double>();
  b.r = j.at("r").get<double>();
  b.cluster = j.at("cluster").get<int>();
  b.label = j.at("label").get<std::string>();
}

void to_json(json& j, const BubbleMap& map) {
  json outlines = json::array();
  for (const auto& o : map.cluster_outlines) {
    json points = json::array();
    for (const auto& p : o.points) points.push_back({p.x, p.y});
    outlines.push_back({{"cluster", o.cluster}, {"points", std::move(points)}});
  }
  j = json{{"bubbles", map.bubbles},
           {"cluster_outlines", std::move(outlines)},
           {"bounding_circle", {{"x", map.bounds.x}, {"y", map.bounds.y}, {"r", map.bounds.r}}}};
}

void from_json(const json& j, BubbleMap& map) {
  map.bubbles = j.at("bubbles").get<std::vector<Bubble>>();
  map.cluster_outlines.clear();
  for (const auto& o : j.at("cluster_outlines")) {
    ClusterOutline outline;
    outline.cluster = o.at("cluster").get<int>();
    for (const auto& p : o.at("points")) outline.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    map.cluster_outlines.push_back(std::move(outline));
  }
  const auto& bc = j.at("bounding_circle");
  map.bounds = {bc.at("x").get<double>(), bc.at("y").get<double>(), bc.at("r").get<double>()};
}

}  // namespace atlas
