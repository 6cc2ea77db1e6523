#include "freeset/drawing.hpp"

#include <algorithm>

namespace freeset {

CrossingReport is_plane(const StraightLineDrawing& d) {
    CrossingReport rep;
    const auto& emb = d.emb;
    for (int e = 0; e < emb.m(); ++e) {
        auto [u, v] = emb.edges[e];
        if (d.at(u) == d.at(v)) {
            ++rep.count;
            rep.pairs.push_back({e, e});
        }
    }
    for (int e = 0; e < emb.m(); ++e) {
        for (int f = e + 1; f < emb.m(); ++f) {
            auto [a, b] = emb.edges[e];
            auto [c, g] = emb.edges[f];
            int shared = -1, pa = -1, pb = -1;
            if (a == c) shared = a, pa = b, pb = g;
            else if (a == g) shared = a, pa = b, pb = c;
            else if (b == c) shared = b, pa = a, pb = g;
            else if (b == g) shared = b, pa = a, pb = c;
            bool bad;
            if (shared >= 0) {
                bad = share_overlap(d.at(shared), d.at(pa), d.at(pb));
            } else {
                bad = segments_intersect(d.at(a), d.at(b), d.at(c), d.at(g));
            }
            if (bad) {
                ++rep.count;
                rep.pairs.push_back({e, f});
            }
        }
    }
    return rep;
}

int CrossingSequence::position_of_vertex(int v) const {
    for (size_t i = 0; i < items.size(); ++i)
        if (items[i].is_vertex && items[i].id == v) return static_cast<int>(i);
    return -1;
}

int CrossingSequence::position_of_edge(int e) const {
    for (size_t i = 0; i < items.size(); ++i)
        if (!items[i].is_vertex && items[i].id == e) return static_cast<int>(i);
    return -1;
}

CrossingSequence crossing_sequence_of(const StraightLineDrawing& d) {
    std::vector<std::pair<Q, CrossItem>> hits;
    for (int v = 0; v < d.emb.n; ++v) {
        if (d.at(v).x == 0) hits.push_back({d.at(v).y, CrossItem{true, v}});
    }
    for (int e = 0; e < d.emb.m(); ++e) {
        auto [u, v] = d.emb.edges[e];
        int su = sign(d.at(u).x), sv = sign(d.at(v).x);
        if (su == 0 || sv == 0) continue;  // touches at a vertex or misses
        if (su == sv) continue;
        hits.push_back({axis_crossing_y(d.at(u), d.at(v)), CrossItem{false, e}});
    }
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        if (a.second.is_vertex != b.second.is_vertex) return a.second.is_vertex;
        return a.second.id < b.second.id;
    });
    CrossingSequence seq;
    for (size_t i = 0; i < hits.size(); ++i) {
        if (i > 0 && hits[i].first == hits[i - 1].first)
            fail("DegenerateCrossing", "two axis intersections coincide");
        seq.items.push_back(hits[i].second);
        seq.targets.push_back(hits[i].first);
    }
    Q min_gap = 3;
    for (size_t i = 1; i < seq.targets.size(); ++i)
        min_gap = q_min(min_gap, seq.targets[i] - seq.targets[i - 1]);
    seq.epsilon = min_gap / 3;
    return seq;
}

std::vector<QPoint> face_polygon(const StraightLineDrawing& d, const std::vector<int>& cycle) {
    std::vector<QPoint> poly;
    poly.reserve(cycle.size());
    for (int h : cycle) poly.push_back(d.at(d.emb.origin(h)));
    return poly;
}

bool check_devillers(const StraightLineDrawing& d, const CombinatorialEmbedding& ref) {
    require(d.emb.n == ref.n && d.emb.edges.size() == ref.edges.size(), "GraphMismatch",
            "drawing and reference describe different graphs");
    for (int e = 0; e < ref.m(); ++e)
        require(std::minmax(d.emb.edges[e].first, d.emb.edges[e].second) ==
                    std::minmax(ref.edges[e].first, ref.edges[e].second),
                "GraphMismatch", "edge lists differ");
    // (i) rotation orders agree (as cyclic sequences of neighbor vertices)
    for (int v = 0; v < ref.n; ++v) {
        std::vector<int> want;
        for (int h : ref.rotation[v]) want.push_back(ref.head(h));
        if (want.size() <= 2u) continue;  // any cyclic order matches
        std::vector<int> got_halves;
        for (int h : ref.rotation[v]) got_halves.push_back(h);
        // geometric CCW order at v
        std::vector<int> geo = got_halves;
        auto dir = [&](int h) { return d.at(ref.head(h)) - d.at(v); };
        for (int h : geo)
            if (dir(h).x == 0 && dir(h).y == 0) return false;
        std::sort(geo.begin(), geo.end(),
                  [&](int a, int b) { return ccw_from_down_less(dir(a), dir(b)); });
        std::vector<int> got;
        for (int h : geo) got.push_back(ref.head(h));
        // cyclic equality
        size_t k = want.size();
        auto it = std::find(got.begin(), got.end(), want[0]);
        if (it == got.end()) return false;
        size_t off = static_cast<size_t>(it - got.begin());
        bool ok = true;
        for (size_t i = 0; i < k && ok; ++i) ok = got[(off + i) % k] == want[i];
        if (!ok) return false;
    }
    // (ii) every reference face drawn without self-intersection
    for (const auto& cyc : faces(ref).cycles) {
        std::vector<QPoint> poly;
        for (int h : cyc) poly.push_back(d.at(ref.origin(h)));
        if (!polygon_simple(poly)) return false;
    }
    return true;
}

StraightLineDrawing reflect(const StraightLineDrawing& d) {
    StraightLineDrawing out;
    out.coords = d.coords;
    for (auto& p : out.coords) p.x = -p.x;
    out.emb = d.emb;
    for (auto& rot : out.emb.rotation) std::reverse(rot.begin(), rot.end());
    // outer face: recompute geometrically
    FaceSet fs = faces(out.emb);
    out.emb.outer_face = -1;
    for (size_t f = 0; f < fs.cycles.size(); ++f) {
        std::vector<QPoint> poly;
        for (int h : fs.cycles[f]) poly.push_back(out.coords[out.emb.origin(h)]);
        if (polygon_signed_area2(poly) < 0) {
            out.emb.outer_face = static_cast<int>(f);
            break;
        }
    }
    require(out.emb.outer_face >= 0, "MalformedEmbedding", "reflection lost the outer face");
    return out;
}

StraightLineDrawing drawing_from_coords(int n, const std::vector<std::pair<int, int>>& edges,
                                        const std::vector<QPoint>& coords, bool must_be_plane) {
    StraightLineDrawing d;
    d.emb = embedding_from_coords(n, edges, coords);
    d.coords = coords;
    if (must_be_plane) {
        auto rep = is_plane(d);
        require(rep.count == 0, "NotPlaneWitness", "drawing has " + std::to_string(rep.count) +
                                                       " crossing edge pairs");
    }
    return d;
}

}  // namespace freeset
