#pragma once

#include <optional>
#include <span>
#include <vector>

namespace atlas {

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

struct Circle {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;

  bool operator==(const Circle&) const = default;
};

/// True when `inner` lies inside `outer` up to a relative tolerance on
/// outer's radius.
bool encloses(const Circle& outer, const Circle& inner, double rel_tol = 1e-9);

/// Smallest circle containing both circles.
Circle enclose_pair(const Circle& a, const Circle& b);

/// The circle internally tangent to all three; nullopt when the
/// configuration has no such circle (collinear centers and the like).
std::optional<Circle> enclose_triple(const Circle& a, const Circle& b, const Circle& c);

/// Minimal enclosing circle of a non-empty set of circles. Closed-form for
/// up to three circles, randomized incremental (fixed shuffle seed) beyond.
Circle smallest_enclosing_circle(std::span<const Circle> circles);

/// Boundary of the convex hull of the circles, each grown by `offset`,
/// counter-clockwise. Each hull arc is discretized into `arc_points` points.
std::vector<Point> circle_hull_outline(std::span<const Circle> circles, double offset,
                                       int arc_points);

}  // namespace atlas
