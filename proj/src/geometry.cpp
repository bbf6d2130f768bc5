#include "atlas/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>

namespace atlas {
namespace {

constexpr double kContainTol = 1e-12;

double scale_of(const Circle& c) {
  return std::max({std::abs(c.x), std::abs(c.y), c.r, 1e-300});
}

bool contains(const Circle& outer, const Circle& inner) {
  const double d = std::hypot(inner.x - outer.x, inner.y - outer.y);
  return d + inner.r <= outer.r + kContainTol * scale_of(outer);
}

// SplitMix64; the shuffle must not depend on the standard library.
std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Smallest circle containing all three; the tangent-triple circle when no
// smaller candidate (one circle, or a pair circle) already works.
Circle enclose_three(const Circle& a, const Circle& b, const Circle& c) {
  const Circle* in[3] = {&a, &b, &c};
  std::optional<Circle> best;
  auto consider = [&](const Circle& cand) {
    if (!(cand.r >= 0.0) || !std::isfinite(cand.x) || !std::isfinite(cand.y)) return;
    for (const Circle* p : in) {
      if (!contains(cand, *p)) return;
    }
    if (!best || cand.r < best->r) best = cand;
  };
  for (const Circle* p : in) consider(*p);
  consider(enclose_pair(a, b));
  consider(enclose_pair(a, c));
  consider(enclose_pair(b, c));
  if (auto t = enclose_triple(a, b, c)) consider(*t);
  if (best) return *best;
  // Numerically marginal: grow the best pair circle to cover the third.
  Circle fallback = enclose_pair(a, b);
  fallback.r = std::max(fallback.r, std::hypot(c.x - fallback.x, c.y - fallback.y) + c.r);
  return fallback;
}

}  // namespace

bool encloses(const Circle& outer, const Circle& inner, double rel_tol) {
  const double d = std::hypot(inner.x - outer.x, inner.y - outer.y);
  return d + inner.r <= outer.r + rel_tol * outer.r;
}

Circle enclose_pair(const Circle& a, const Circle& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double l = std::hypot(dx, dy);
  if (l + b.r <= a.r) return a;
  if (l + a.r <= b.r) return b;
  const double dr = b.r - a.r;
  return {(a.x + b.x + dx / l * dr) / 2.0, (a.y + b.y + dy / l * dr) / 2.0, (l + a.r + b.r) / 2.0};
}

std::optional<Circle> enclose_triple(const Circle& a, const Circle& b, const Circle& c) {
  // Tangency |p - p_i| = R - r_i. Differencing the squared equations gives p
  // as an affine function of R; substituting back leaves a quadratic in R.
  const double x1 = a.x, y1 = a.y, r1 = a.r;
  const double a2 = x1 - b.x, a3 = x1 - c.x;
  const double b2 = y1 - b.y, b3 = y1 - c.y;
  const double c2 = b.r - r1, c3 = c.r - r1;
  const double d1 = x1 * x1 + y1 * y1 - r1 * r1;
  const double d2 = d1 - b.x * b.x - b.y * b.y + b.r * b.r;
  const double d3 = d1 - c.x * c.x - c.y * c.y + c.r * c.r;
  const double ab = a3 * b2 - a2 * b3;
  if (ab == 0.0) return std::nullopt;
  const double xa = (b2 * d3 - b3 * d2) / (ab * 2) - x1;
  const double xb = (b3 * c2 - b2 * c3) / ab;
  const double ya = (a3 * d2 - a2 * d3) / (ab * 2) - y1;
  const double yb = (a2 * c3 - a3 * c2) / ab;
  const double A = xb * xb + yb * yb - 1;
  const double B = 2 * (r1 + xa * xb + ya * yb);
  const double C = xa * xa + ya * ya - r1 * r1;

  std::vector<double> roots;
  if (std::abs(A) > 1e-12) {
    const double disc = B * B - 4 * A * C;
    if (disc < 0) return std::nullopt;
    const double s = std::sqrt(disc);
    roots = {(-B - s) / (2 * A), (-B + s) / (2 * A)};
  } else if (B != 0.0) {
    roots = {-C / B};
  }
  const double min_r = std::max({a.r, b.r, c.r});
  std::optional<Circle> best;
  for (double R : roots) {
    if (!std::isfinite(R) || R < min_r * (1 - 1e-12)) continue;
    if (!best || R < best->r) best = Circle{x1 + xa + xb * R, y1 + ya + yb * R, R};
  }
  return best;
}

Circle smallest_enclosing_circle(std::span<const Circle> circles) {
  if (circles.empty()) return {};
  std::vector<Circle> c(circles.begin(), circles.end());
  std::uint64_t state = 0x5EC5EC5EC5EC5EC5ULL;
  for (std::size_t i = c.size(); i > 1; --i) {
    std::swap(c[i - 1], c[splitmix(state) % i]);
  }

  Circle disk = c[0];
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (contains(disk, c[i])) continue;
    disk = c[i];
    for (std::size_t j = 0; j < i; ++j) {
      if (contains(disk, c[j])) continue;
      disk = enclose_pair(c[i], c[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (contains(disk, c[k])) continue;
        disk = enclose_three(c[i], c[j], c[k]);
      }
    }
  }
  // Round-off in the basis formulas can leave a circle marginally outside.
  for (const auto& ci : c) {
    const double need = std::hypot(ci.x - disk.x, ci.y - disk.y) + ci.r;
    disk.r = std::max(disk.r, need);
  }
  return disk;
}

std::vector<Point> circle_hull_outline(std::span<const Circle> circles, double offset,
                                       int arc_points) {
  std::vector<Point> out;
  if (circles.empty() || arc_points < 2) return out;
  std::vector<Circle> grown(circles.begin(), circles.end());
  for (auto& g : grown) g.r += offset;

  // The hull boundary in direction theta belongs to the circle maximizing
  // the support function c . u(theta) + r.
  auto support_owner = [&](double theta) {
    const double ux = std::cos(theta), uy = std::sin(theta);
    int best = 0;
    double best_h = grown[0].x * ux + grown[0].y * uy + grown[0].r;
    for (std::size_t i = 1; i < grown.size(); ++i) {
      const double h = grown[i].x * ux + grown[i].y * uy + grown[i].r;
      if (h > best_h) {
        best_h = h;
        best = static_cast<int>(i);
      }
    }
    return best;
  };
  auto emit_arc = [&](const Circle& g, double from, double to, bool closed) {
    const int n = arc_points;
    for (int s = 0; s < n; ++s) {
      const double t = closed ? from + (to - from) * s / n : from + (to - from) * s / (n - 1);
      out.push_back({g.x + g.r * std::cos(t), g.y + g.r * std::sin(t)});
    }
  };

  constexpr int kSamples = 2048;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  std::vector<int> owner(kSamples);
  for (int s = 0; s < kSamples; ++s) owner[s] = support_owner(kTwoPi * s / kSamples);
  int start = -1;
  for (int s = 0; s < kSamples; ++s) {
    if (owner[s] != owner[(s + kSamples - 1) % kSamples]) {
      start = s;
      break;
    }
  }
  if (start < 0) {
    emit_arc(grown[owner[0]], 0.0, kTwoPi, true);
    return out;
  }

  // Switch angle between consecutive samples with different owners.
  auto refine = [&](int s) {
    double lo = kTwoPi * (s - 1) / kSamples, hi = kTwoPi * s / kSamples;
    const int lo_owner = owner[(s + kSamples - 1) % kSamples];
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      (support_owner(mid) == lo_owner ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  std::vector<std::pair<int, double>> switches;  // (owner after switch, angle)
  for (int step = 0; step < kSamples; ++step) {
    const int s = (start + step) % kSamples;
    if (owner[s] != owner[(s + kSamples - 1) % kSamples]) {
      switches.emplace_back(owner[s], refine(s));
    }
  }
  for (std::size_t a = 0; a < switches.size(); ++a) {
    const auto [who, from] = switches[a];
    double to = switches[(a + 1) % switches.size()].second;
    while (to <= from) to += kTwoPi;
    emit_arc(grown[who], from, to, false);
  }
  return out;
}

}  // namespace atlas
