#pragma once

#include <span>

namespace sixlayer {

/// Planar point in meters.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

namespace geometry {

/// Sign of the cross product (b - a) x (c - a): +1 left turn, -1 right, 0 collinear.
int orientation(Point2 a, Point2 b, Point2 c) noexcept;

/// Closed-segment intersection, collinear overlap included.
bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) noexcept;

bool on_boundary(Point2 p, std::span<const Point2> polygon) noexcept;

/// Strict interior test (boundary points are outside).
bool strictly_inside(Point2 p, std::span<const Point2> polygon) noexcept;

/// At least 3 vertices, non-zero area, and no two non-adjacent edges touch.
bool is_simple_polygon(std::span<const Point2> polygon) noexcept;

/// True iff some open stretch of segment ab lies in the polygon's interior.
/// Grazing a vertex or running along an edge does not count.
bool segment_crosses_interior(Point2 a, Point2 b, std::span<const Point2> polygon);

}  // namespace geometry
}  // namespace sixlayer
