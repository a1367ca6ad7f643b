#pragma once

// Small convex-polygon toolkit. Points are (x, y) = (tau, xi) in the
// counterexample geometry; polygons are vertex lists in counter-clockwise order.

#include <vector>

namespace bq::geom {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double k) const { return {k * x, k * y}; }
    Point2 operator-() const { return {-x, -y}; }
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }

using Polygon = std::vector<Point2>;

/// Signed area (positive for counter-clockwise order).
double signed_area(const Polygon& p);
double area(const Polygon& p);

bool is_convex(const Polygon& p, double tol = 1e-12);

/// Counter-clockwise convex hull (Andrew's monotone chain), collinear points dropped.
Polygon convex_hull(std::vector<Point2> pts);

/// Sutherland-Hodgman clip of `subject` by the convex polygon `clip`.
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

/// Area of P intersect Q for convex P, Q with at most 8 vertices each.
/// Throws std::invalid_argument for non-convex, oversized or zero-area input.
double polygon_overlap_area(const Polygon& P, const Polygon& Q);

/// {p + q : p in P, q in Q} for convex P, Q.
Polygon minkowski_sum(const Polygon& P, const Polygon& Q);

Polygon translate(const Polygon& p, const Point2& by);
Polygon negate(const Polygon& p);

/// Point in (or on, within tol) a convex counter-clockwise polygon.
bool contains(const Polygon& p, const Point2& q, double tol = 1e-12);

} // namespace bq::geom
