#pragma once

#include "freeset/rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace freeset {

struct QPoint {
    Q x, y;
    bool operator==(const QPoint& o) const { return x == o.x && y == o.y; }
    bool operator!=(const QPoint& o) const { return !(*this == o); }
};

inline QPoint operator+(const QPoint& a, const QPoint& b) { return {a.x + b.x, a.y + b.y}; }
inline QPoint operator-(const QPoint& a, const QPoint& b) { return {a.x - b.x, a.y - b.y}; }

inline Q cross(const QPoint& a, const QPoint& b) { return a.x * b.y - a.y * b.x; }
inline Q dot(const QPoint& a, const QPoint& b) { return a.x * b.x + a.y * b.y; }

/// Sign of the signed area of (a, b, c): +1 = left turn (CCW).
inline int orientation(const QPoint& a, const QPoint& b, const QPoint& c) {
    return sign(cross(b - a, c - a));
}

/// Strict point-on-open-segment test (p strictly between a and b, collinear).
bool on_open_segment(const QPoint& a, const QPoint& b, const QPoint& p);

/// True iff closed segments ab and cd share at least one point.
bool segments_intersect(const QPoint& a, const QPoint& b, const QPoint& c, const QPoint& d);

/// Two segments sharing endpoint s overlap along a ray iff the others are
/// collinear with s on the same side.
bool share_overlap(const QPoint& s, const QPoint& a, const QPoint& b);

/// Sides of the y-axis, matching the paper's L / Y / R split.
enum class Axis : int { L = -1, Y = 0, R = 1 };

inline Axis axis_side(const QPoint& p) {
    int s = sign(p.x);
    return s < 0 ? Axis::L : (s > 0 ? Axis::R : Axis::Y);
}

/// y-coordinate of segment (a,b) intersected with the axis x=0.
/// Requires sign(a.x) != sign(b.x) or one endpoint on the axis.
Q axis_crossing_y(const QPoint& a, const QPoint& b);

/// Slope dy/dx of a non-vertical segment.
Q slope_of(const QPoint& a, const QPoint& b);

/// Closed half-plane a*x + b*y <= c.
struct HalfPlane {
    Q a, b, c;
    bool contains(const QPoint& p) const { return a * p.x + b * p.y <= c; }
};

/// Half-plane of points p with orient(u, v, p) >= 0 (left of u->v).
HalfPlane left_of(const QPoint& u, const QPoint& v);
/// Half-plane of points p with orient(u, v, p) <= 0.
HalfPlane right_of(const QPoint& u, const QPoint& v);

/// Intersection of half-planes, clipped to a large bounding box.
/// Returns the convex polygon (CCW) or empty vector if infeasible.
std::vector<QPoint> halfplane_intersection(const std::vector<HalfPlane>& planes, const Q& bound);

/// Vertex centroid of a non-empty polygon.
QPoint polygon_centroid(const std::vector<QPoint>& poly);

/// Center of (approximately) the largest axis-aligned square inside the
/// half-plane intersection; returns nullopt when infeasible.
std::optional<QPoint> inscribed_square_center(const std::vector<HalfPlane>& planes, const Q& bound);

/// Signed area * 2 of a polygon.
Q polygon_signed_area2(const std::vector<QPoint>& poly);

/// True iff p is strictly inside the CCW convex polygon.
bool strictly_inside_convex(const std::vector<QPoint>& poly, const QPoint& p);

/// Simple-polygon test: no two non-adjacent edges meet, adjacent edges meet
/// only at the shared vertex.
bool polygon_simple(const std::vector<QPoint>& poly);

/// Rational rotation (c, s) with c^2 + s^2 = 1, from tangent half-angle t.
struct Rotation {
    Q c, s;
    QPoint apply(const QPoint& p) const { return {c * p.x - s * p.y, s * p.x + c * p.y}; }
    QPoint inverse(const QPoint& p) const { return {c * p.x + s * p.y, -s * p.x + c * p.y}; }
};

inline Rotation rotation_from_tangent(const Q& t) {
    Q t2 = t * t;
    Q den = 1 + t2;
    return Rotation{(1 - t2) / den, 2 * t / den};
}

/// Compare direction vectors by CCW angle from (0,-1); exact.
/// Returns true when a comes strictly before b.
bool ccw_from_down_less(const QPoint& a, const QPoint& b);

}  // namespace freeset
