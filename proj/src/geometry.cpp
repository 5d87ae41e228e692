#include "sixlayer/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sixlayer::geometry {

namespace {

double cross(Point2 a, Point2 b, Point2 c) noexcept {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool within_box(Point2 p, Point2 a, Point2 b) noexcept {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Parameter t of p along a->b, assuming p lies on the line.
double param_along(Point2 a, Point2 b, Point2 p) noexcept {
  double dx = b.x - a.x;
  double dy = b.y - a.y;
  return std::abs(dx) >= std::abs(dy) ? (p.x - a.x) / dx : (p.y - a.y) / dy;
}

}  // namespace

int orientation(Point2 a, Point2 b, Point2 c) noexcept {
  double v = cross(a, b, c);
  return (v > 0) - (v < 0);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) noexcept {
  int o1 = orientation(p1, p2, q1);
  int o2 = orientation(p1, p2, q2);
  int o3 = orientation(q1, q2, p1);
  int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && within_box(q1, p1, p2)) return true;
  if (o2 == 0 && within_box(q2, p1, p2)) return true;
  if (o3 == 0 && within_box(p1, q1, q2)) return true;
  if (o4 == 0 && within_box(p2, q1, q2)) return true;
  return false;
}

bool on_boundary(Point2 p, std::span<const Point2> polygon) noexcept {
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    Point2 a = polygon[i];
    Point2 b = polygon[(i + 1) % n];
    if (orientation(a, b, p) == 0 && within_box(p, a, b)) return true;
  }
  return false;
}

bool strictly_inside(Point2 p, std::span<const Point2> polygon) noexcept {
  if (polygon.size() < 3 || on_boundary(p, polygon)) return false;
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    Point2 a = polygon[i];
    Point2 b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool is_simple_polygon(std::span<const Point2> polygon) noexcept {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = polygon[i];
    const Point2& b = polygon[(i + 1) % n];
    if (a == b) return false;
    area2 += a.x * b.y - b.x * a.y;
  }
  if (area2 == 0.0) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      Point2 a1 = polygon[i], a2 = polygon[(i + 1) % n];
      Point2 b1 = polygon[j], b2 = polygon[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges share one vertex; they must not fold back onto each other.
        Point2 shared = (j == i + 1) ? a2 : a1;
        Point2 other_a = (j == i + 1) ? a1 : a2;
        Point2 other_b = (j == i + 1) ? b2 : b1;
        if (orientation(other_a, shared, other_b) == 0 &&
            (within_box(other_b, other_a, shared) || within_box(other_a, shared, other_b)))
          return false;
        continue;
      }
      if (segments_intersect(a1, a2, b1, b2)) return false;
    }
  }
  return true;
}

bool segment_crosses_interior(Point2 a, Point2 b, std::span<const Point2> polygon) {
  if (a == b) return strictly_inside(a, polygon);
  std::vector<double> cuts = {0.0, 1.0};
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    Point2 p = polygon[i];
    Point2 q = polygon[(i + 1) % n];
    double d1 = cross(a, b, p);
    double d2 = cross(a, b, q);
    if (d1 == 0.0) {
      if (within_box(p, a, b)) cuts.push_back(param_along(a, b, p));
    }
    if (d2 == 0.0) {
      if (within_box(q, a, b)) cuts.push_back(param_along(a, b, q));
    }
    if ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) {
      // Edge straddles the supporting line; find where on ab it crosses.
      double e1 = cross(p, q, a);
      double e2 = cross(p, q, b);
      if (e1 == e2) continue;
      double t = e1 / (e1 - e2);
      if (t > 0.0 && t < 1.0) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = std::clamp(cuts[i], 0.0, 1.0);
    double hi = std::clamp(cuts[i + 1], 0.0, 1.0);
    if (hi - lo <= 1e-12) continue;
    double mid = 0.5 * (lo + hi);
    Point2 m{a.x + mid * (b.x - a.x), a.y + mid * (b.y - a.y)};
    if (strictly_inside(m, polygon)) return true;
  }
  return false;
}

}  // namespace sixlayer::geometry
