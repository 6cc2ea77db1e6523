#include "freeset/geometry.hpp"

namespace freeset {

bool on_open_segment(const QPoint& a, const QPoint& b, const QPoint& p) {
    if (orientation(a, b, p) != 0) return false;
    return dot(p - a, b - a) > 0 && dot(p - b, a - b) > 0;
}

bool segments_intersect(const QPoint& a, const QPoint& b, const QPoint& c, const QPoint& d) {
    int d1 = orientation(c, d, a);
    int d2 = orientation(c, d, b);
    int d3 = orientation(a, b, c);
    int d4 = orientation(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    auto between = [](const QPoint& u, const QPoint& v, const QPoint& p) {
        return q_min(u.x, v.x) <= p.x && p.x <= q_max(u.x, v.x) &&
               q_min(u.y, v.y) <= p.y && p.y <= q_max(u.y, v.y);
    };
    if (d1 == 0 && between(c, d, a)) return true;
    if (d2 == 0 && between(c, d, b)) return true;
    if (d3 == 0 && between(a, b, c)) return true;
    if (d4 == 0 && between(a, b, d)) return true;
    return false;
}

bool share_overlap(const QPoint& s, const QPoint& a, const QPoint& b) {
    return orientation(s, a, b) == 0 && dot(a - s, b - s) > 0;
}

Q axis_crossing_y(const QPoint& a, const QPoint& b) {
    if (a.x == 0) return a.y;
    if (b.x == 0) return b.y;
    require(sign(a.x) != sign(b.x), "NO_AXIS_CROSSING", "segment does not cross the axis");
    // intersection of the segment with x = 0
    return (a.x * b.y - b.x * a.y) / (a.x - b.x);
}

Q slope_of(const QPoint& a, const QPoint& b) {
    require(a.x != b.x, "VERTICAL_EDGE", "vertical segment has no slope");
    return (b.y - a.y) / (b.x - a.x);
}

HalfPlane left_of(const QPoint& u, const QPoint& v) {
    // orient(u,v,p) >= 0  <=>  (v.y-u.y) p.x - (v.x-u.x) p.y <= v.y*u.x - v.x*u.y ... derive:
    // cross(v-u, p-u) >= 0  <=>  (v.x-u.x)(p.y-u.y) - (v.y-u.y)(p.x-u.x) >= 0
    Q a = v.y - u.y;
    Q b = u.x - v.x;
    Q c = a * u.x + b * u.y;
    return HalfPlane{a, b, c};
}

HalfPlane right_of(const QPoint& u, const QPoint& v) {
    HalfPlane h = left_of(u, v);
    return HalfPlane{-h.a, -h.b, -h.c};
}

Q polygon_signed_area2(const std::vector<QPoint>& poly) {
    Q s = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const QPoint& p = poly[i];
        const QPoint& q = poly[(i + 1) % poly.size()];
        s += cross(p, q);
    }
    return s;
}

static std::vector<QPoint> clip(const std::vector<QPoint>& poly, const HalfPlane& h) {
    std::vector<QPoint> out;
    size_t k = poly.size();
    for (size_t i = 0; i < k; ++i) {
        const QPoint& p = poly[i];
        const QPoint& q = poly[(i + 1) % k];
        Q fp = h.a * p.x + h.b * p.y - h.c;
        Q fq = h.a * q.x + h.b * q.y - h.c;
        bool inp = fp <= 0, inq = fq <= 0;
        if (inp) out.push_back(p);
        if (inp != inq) {
            Q t = fp / (fp - fq);
            out.push_back(QPoint{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
        }
    }
    // drop consecutive duplicates
    std::vector<QPoint> dedup;
    for (const auto& p : out) {
        if (dedup.empty() || !(dedup.back() == p)) dedup.push_back(p);
    }
    if (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
    return dedup;
}

std::vector<QPoint> halfplane_intersection(const std::vector<HalfPlane>& planes, const Q& bound) {
    std::vector<QPoint> poly = {
        {-bound, -bound}, {bound, -bound}, {bound, bound}, {-bound, bound}};
    for (const auto& h : planes) {
        poly = clip(poly, h);
        if (poly.size() < 3) return {};
    }
    if (polygon_signed_area2(poly) <= 0) return {};
    return poly;
}

QPoint polygon_centroid(const std::vector<QPoint>& poly) {
    Q sx = 0, sy = 0;
    for (const auto& p : poly) {
        sx += p.x;
        sy += p.y;
    }
    Q k(static_cast<unsigned long>(poly.size()));
    return {sx / k, sy / k};
}

std::optional<QPoint> inscribed_square_center(const std::vector<HalfPlane>& planes,
                                              const Q& bound) {
    auto eroded = [&](const Q& r) {
        std::vector<HalfPlane> shifted;
        shifted.reserve(planes.size());
        for (const auto& h : planes)
            shifted.push_back(HalfPlane{h.a, h.b, h.c - r * (q_abs(h.a) + q_abs(h.b))});
        return halfplane_intersection(shifted, bound);
    };
    if (halfplane_intersection(planes, bound).empty()) return std::nullopt;
    Q lo = 0, hi = bound;
    if (!eroded(hi).empty()) {
        return polygon_centroid(eroded(hi));
    }
    for (int i = 0; i < 40; ++i) {
        Q mid = (lo + hi) / 2;
        if (!eroded(mid).empty())
            lo = mid;
        else
            hi = mid;
    }
    auto poly = eroded(lo);
    if (poly.empty()) poly = halfplane_intersection(planes, bound);
    if (poly.empty()) return std::nullopt;
    return polygon_centroid(poly);
}

bool strictly_inside_convex(const std::vector<QPoint>& poly, const QPoint& p) {
    for (size_t i = 0; i < poly.size(); ++i) {
        if (orientation(poly[i], poly[(i + 1) % poly.size()], p) <= 0) return false;
    }
    return true;
}

bool polygon_simple(const std::vector<QPoint>& poly) {
    size_t k = poly.size();
    if (k < 3) return false;
    for (size_t i = 0; i < k; ++i) {
        if (poly[i] == poly[(i + 1) % k]) return false;
    }
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i + 1; j < k; ++j) {
            const QPoint &a = poly[i], &b = poly[(i + 1) % k];
            const QPoint &c = poly[j], &d = poly[(j + 1) % k];
            bool adj = (j == i + 1) || (i == 0 && j == k - 1);
            if (adj) {
                const QPoint& s = (j == i + 1) ? b : a;
                const QPoint& u = (j == i + 1) ? a : b;
                const QPoint& w = (j == i + 1) ? d : c;
                if (share_overlap(s, u, w)) return false;
            } else if (segments_intersect(a, b, c, d)) {
                return false;
            }
        }
    }
    return true;
}

bool ccw_from_down_less(const QPoint& a, const QPoint& b) {
    auto cls = [](const QPoint& d) -> int {
        require(d.x != 0 || d.y != 0, "ZERO_DIRECTION", "zero direction vector");
        if (d.x == 0) return d.y < 0 ? 0 : 2;
        return d.x > 0 ? 1 : 3;
    };
    int ca = cls(a), cb = cls(b);
    if (ca != cb) return ca < cb;
    if (ca == 0 || ca == 2) return false;
    return cross(a, b) > 0;
}

}  // namespace freeset
