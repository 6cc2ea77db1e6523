#include "freeset/reduction.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace freeset {

namespace {

// ---------------------------------------------------------------- helpers

std::vector<int> outer_cycle_vertices(const CombinatorialEmbedding& emb) {
    FaceSet fs = faces(emb);
    std::vector<int> out;
    for (int h : fs.cycles[emb.outer_face]) out.push_back(emb.origin(h));
    return out;
}

// Outer shape corners listed in the child's own outer cycle enumeration.
// parent_to_child maps parent vertex ids into the child (identity allowed).
std::vector<QPoint> align_delta(const CombinatorialEmbedding& parent_emb,
                                const std::vector<QPoint>& parent_delta,
                                const CombinatorialEmbedding& child_emb,
                                const std::vector<int>& parent_to_child) {
    std::map<int, QPoint> corner;  // child vertex id -> corner
    std::vector<int> pouter = outer_cycle_vertices(parent_emb);
    require(pouter.size() == parent_delta.size(), "IncompatibleOuterShape",
            "outer shape misaligned with the outer face");
    for (size_t i = 0; i < pouter.size(); ++i) {
        int cv = parent_to_child[pouter[i]];
        require(cv >= 0, "IncompatibleOuterShape", "outer vertex lost in reduction");
        corner[cv] = parent_delta[i];
    }
    std::vector<QPoint> out;
    for (int v : outer_cycle_vertices(child_emb)) {
        auto it = corner.find(v);
        require(it != corner.end(), "IncompatibleOuterShape", "outer face changed unexpectedly");
        out.push_back(it->second);
    }
    return out;
}

Q witness_bound(const StraightLineDrawing& d) {
    Q b = 1;
    for (const auto& p : d.coords) b = q_max(b, q_max(q_abs(p.x), q_abs(p.y)));
    return 4 * b;
}

// Half-planes keeping point p's axis crossing with fixed far endpoint a
// inside (lo, hi); s = +1 when p stays strictly right, -1 when left.
void window_halfplanes(const QPoint& a, int s, const Q& lo, const Q& hi,
                       std::vector<HalfPlane>& planes) {
    Q qs(s);
    planes.push_back(HalfPlane{-qs * (a.y - lo), qs * a.x, qs * a.x * lo});
    planes.push_back(HalfPlane{qs * (a.y - hi), -qs * a.x, -qs * a.x * hi});
}

void kernel_halfplanes(const std::vector<QPoint>& ccw_polygon, std::vector<HalfPlane>& planes) {
    size_t k = ccw_polygon.size();
    for (size_t i = 0; i < k; ++i)
        planes.push_back(left_of(ccw_polygon[i], ccw_polygon[(i + 1) % k]));
}

std::vector<QPoint> placement_candidates(const std::vector<HalfPlane>& planes, const Q& bound) {
    std::vector<QPoint> cands;
    if (auto c = inscribed_square_center(planes, bound)) cands.push_back(*c);
    auto poly = halfplane_intersection(planes, bound);
    if (!poly.empty()) {
        QPoint centroid = polygon_centroid(poly);
        if (cands.empty() || !(cands.front() == centroid)) cands.push_back(centroid);
        for (const auto& v : poly) {
            QPoint mid{(v.x + centroid.x) / 2, (v.y + centroid.y) / 2};
            cands.push_back(mid);
        }
    }
    return cands;
}

// Planarity of all edges incident to v against the rest of the drawing.
bool vertex_edges_clean(const StraightLineDrawing& d, int v) {
    const auto& emb = d.emb;
    for (int h : emb.rotation[v]) {
        int e = emb.edge_of(h);
        auto [a, b] = emb.edges[e];
        if (d.at(a) == d.at(b)) return false;
        for (int f = 0; f < emb.m(); ++f) {
            if (f == e) continue;
            auto [c, g] = emb.edges[f];
            int shared = -1, pa = -1, pb = -1;
            if (a == c) shared = a, pa = b, pb = g;
            else if (a == g) shared = a, pa = b, pb = c;
            else if (b == c) shared = b, pa = a, pb = g;
            else if (b == g) shared = b, pa = a, pb = c;
            if (shared >= 0) {
                if (share_overlap(d.at(shared), d.at(pa), d.at(pb))) return false;
            } else if (segments_intersect(d.at(a), d.at(b), d.at(c), d.at(g))) {
                return false;
            }
        }
    }
    return true;
}

bool rotations_match_at(const StraightLineDrawing& d, int v) {
    const auto& emb = d.emb;
    if (emb.degree(v) <= 2) return true;
    std::vector<int> geo = emb.rotation[v];
    auto dir = [&](int h) { return d.at(emb.head(h)) - d.at(v); };
    for (int h : geo)
        if (dir(h).x == 0 && dir(h).y == 0) return false;
    std::sort(geo.begin(), geo.end(), [&](int x, int y) {
        return ccw_from_down_less(dir(x), dir(y));
    });
    size_t k = geo.size();
    auto it = std::find(geo.begin(), geo.end(), emb.rotation[v][0]);
    size_t off = static_cast<size_t>(it - geo.begin());
    for (size_t i = 0; i < k; ++i)
        if (geo[(off + i) % k] != emb.rotation[v][i]) return false;
    return true;
}

// Full local verification after a vertex placement / edge surgery: the
// touched vertices' stars are clean, rotations agree, and the crossing
// sequence matches the expected item list.
bool surgery_ok(const StraightLineDrawing& d, const std::vector<int>& touched,
                const std::vector<CrossItem>& expected_items) {
    std::set<int> check(touched.begin(), touched.end());
    for (int v : touched) {
        for (int h : d.emb.rotation[v]) check.insert(d.emb.head(h));
    }
    for (int v : touched)
        if (!vertex_edges_clean(d, v)) return false;
    for (int v : check)
        if (!rotations_match_at(d, v)) return false;
    try {
        CrossingSequence got = crossing_sequence_of(d);
        if (got.items.size() != expected_items.size()) return false;
        for (size_t i = 0; i < got.items.size(); ++i)
            if (!(got.items[i] == expected_items[i])) return false;
    } catch (const Error&) {
        return false;
    }
    return true;
}

// ------------------------------------------------------------ restriction

struct Restriction {
    StraightLineDrawing drawing;
    std::vector<int> vmap, emap;  // parent -> child, -1 when dropped
    std::vector<int> vback, eback;
};

Restriction restrict_to(const StraightLineDrawing& d, const std::vector<char>& keep_vertex) {
    Restriction r;
    r.vmap.assign(d.emb.n, -1);
    for (int v = 0; v < d.emb.n; ++v) {
        if (keep_vertex[v]) {
            r.vmap[v] = static_cast<int>(r.vback.size());
            r.vback.push_back(v);
        }
    }
    std::vector<std::pair<int, int>> edges;
    std::vector<QPoint> coords;
    for (int v : r.vback) coords.push_back(d.at(v));
    r.emap.assign(d.emb.m(), -1);
    for (int e = 0; e < d.emb.m(); ++e) {
        auto [u, v] = d.emb.edges[e];
        if (keep_vertex[u] && keep_vertex[v]) {
            r.emap[e] = static_cast<int>(edges.size());
            r.eback.push_back(e);
            edges.push_back({r.vmap[u], r.vmap[v]});
        }
    }
    r.drawing = drawing_from_coords(static_cast<int>(r.vback.size()), edges, coords, true);
    return r;
}

CrossItem remap_item(const CrossItem& it, const std::vector<int>& vmap,
                     const std::vector<int>& emap) {
    CrossItem out = it;
    out.id = it.is_vertex ? vmap[it.id] : emap[it.id];
    require(out.id >= 0, "InconsistentSides", "sequence item lost in restriction");
    return out;
}

// ------------------------------------------------------------- instance

}  // namespace

int ReductionInstance::noncrossing_edges() const {
    int c = 0;
    for (const auto& k : edge_class) c += k != EdgeClass::Crossing;
    return c;
}

std::vector<EdgeClass> classify_edges(const CombinatorialEmbedding& emb,
                                      const std::vector<CurveSide>& side) {
    std::vector<EdgeClass> out(emb.m());
    for (int e = 0; e < emb.m(); ++e) {
        auto [u, v] = emb.edges[e];
        CurveSide su = side[u], sv = side[v];
        if (su == CurveSide::On && sv == CurveSide::On)
            out[e] = EdgeClass::OnCurve;
        else if (su == CurveSide::On || sv == CurveSide::On)
            out[e] = EdgeClass::Marked;
        else if (su != sv)
            out[e] = EdgeClass::Crossing;
        else
            out[e] = EdgeClass::Unmarked;
    }
    return out;
}

ReductionInstance make_instance(StraightLineDrawing witness, CrossingSequence seq,
                                std::vector<QPoint> delta, bool strict_gaps) {
    ReductionInstance inst;
    inst.witness = std::move(witness);
    inst.seq = std::move(seq);
    inst.delta = std::move(delta);
    const auto& emb = inst.witness.emb;
    emb.validate();
    require(is_triangulation(emb), "InconsistentSides", "instance graph is not a triangulation");
    require(is_plane(inst.witness).count == 0, "NotPlaneWitness", "witness is not plane");

    CrossingSequence observed = crossing_sequence_of(inst.witness);
    require(observed.items.size() == inst.seq.items.size(), "InconsistentSides",
            "witness curve items differ from the requested sequence");
    for (size_t i = 0; i < observed.items.size(); ++i)
        require(observed.items[i] == inst.seq.items[i], "InconsistentSides",
                "witness realizes a different crossing order");

    require(inst.seq.epsilon > 0, "InconsistentSides", "epsilon must be positive");
    for (size_t i = 0; i + 1 < inst.seq.targets.size(); ++i) {
        require(inst.seq.targets[i] < inst.seq.targets[i + 1], "TARGETS_NOT_INCREASING",
                "sequence targets must increase strictly");
        if (strict_gaps)
            require(inst.seq.targets[i + 1] - inst.seq.targets[i] > 2 * inst.seq.epsilon,
                    "InconsistentSides", "epsilon must stay below half of the smallest gap");
    }

    inst.side.resize(emb.n);
    for (int v = 0; v < emb.n; ++v) {
        Axis ax = axis_side(inst.witness.at(v));
        inst.side[v] = ax == Axis::Y ? CurveSide::On
                                     : (ax == Axis::L ? CurveSide::Minus : CurveSide::Plus);
    }
    inst.edge_class = classify_edges(emb, inst.side);
    for (int e = 0; e < emb.m(); ++e) {
        if (inst.edge_class[e] != EdgeClass::OnCurve) continue;
        auto [u, v] = emb.edges[e];
        int pu = inst.seq.position_of_vertex(u);
        int pv = inst.seq.position_of_vertex(v);
        require(pu >= 0 && pv >= 0 && std::abs(pu - pv) == 1, "InconsistentSides",
                "edge on the curve joins non-consecutive curve vertices");
    }
    FaceSet fs = faces(emb);
    inst.face_crossing.assign(fs.cycles.size(), 0);
    for (size_t f = 0; f < fs.cycles.size(); ++f) {
        int crossing = 0;
        for (int h : fs.cycles[f]) crossing += inst.edge_class[emb.edge_of(h)] == EdgeClass::Crossing;
        inst.face_crossing[f] = crossing >= 2;
    }

    // outer shape compatibility
    std::vector<int> outer_vs = outer_cycle_vertices(emb);
    require(inst.delta.size() == 3 && outer_vs.size() == 3, "IncompatibleOuterShape",
            "outer shape must be a triangle aligned with the outer face");
    require(orientation(inst.delta[0], inst.delta[1], inst.delta[2]) != 0,
            "IncompatibleOuterShape", "outer shape corners are collinear");
    int on_axis_corners = 0;
    for (size_t i = 0; i < 3; ++i) {
        int v = outer_vs[i];
        Axis got = axis_side(inst.delta[i]);
        if (inst.side[v] == CurveSide::On) {
            require(got == Axis::Y, "IncompatibleOuterShape", "curve corner must sit on the axis");
            int p = inst.seq.position_of_vertex(v);
            require(p >= 0 && inst.delta[i].y == inst.seq.targets[p], "IncompatibleOuterShape",
                    "axis corner must sit exactly at its target");
            ++on_axis_corners;
        } else {
            require(got == (inst.side[v] == CurveSide::Minus ? Axis::L : Axis::R),
                    "IncompatibleOuterShape", "outer corner placed on the wrong side");
        }
    }
    require(on_axis_corners <= 1, "IncompatibleOuterShape",
            "outer face edges lying on the curve are not supported");
    // extreme edge items must be realized exactly by the prescribed shape
    if (!inst.seq.items.empty()) {
        for (int which : {0, static_cast<int>(inst.seq.items.size()) - 1}) {
            const CrossItem& it = inst.seq.items[which];
            if (it.is_vertex) continue;
            bool found = false;
            for (size_t i = 0; i < 3; ++i) {
                int e = emb.edge_between(outer_vs[i], outer_vs[(i + 1) % 3]);
                if (e == it.id) {
                    found = true;
                    require(axis_crossing_y(inst.delta[i], inst.delta[(i + 1) % 3]) ==
                                inst.seq.targets[which],
                            "IncompatibleOuterShape",
                            "extreme crossing edge pinned off its target by the shape");
                }
            }
            require(found, "IncompatibleOuterShape",
                    "extreme crossing item is not an outer face edge");
        }
    }
    return inst;
}

// ----------------------------------------------------------------- trace

StepCounts count_steps(const TraceNode& node) {
    StepCounts c;
    std::function<void(const TraceNode&)> walk = [&](const TraceNode& n) {
        switch (n.kind) {
            case TraceNode::Small: ++c.small; break;
            case TraceNode::Split: ++c.split; break;
            case TraceNode::SplitTutte: ++c.split_tutte; break;
            case TraceNode::Contract: ++c.contract; break;
            case TraceNode::Flip: ++c.flip; break;
            case TraceNode::OnCurve: ++c.oncurve; break;
            case TraceNode::Base: ++c.base; break;
        }
        for (const auto& ch : n.children) walk(ch);
    };
    walk(node);
    return c;
}

std::string trace_to_json(const TraceNode& node) {
    static const char* names[] = {"small", "split", "split_tutte", "contract", "flip",
                                  "on_curve", "base"};
    std::ostringstream os;
    os << "{\"step\":\"" << names[node.kind] << "\"";
    if (!node.detail.empty()) os << ",\"detail\":\"" << node.detail << "\"";
    if (!node.children.empty()) {
        os << ",\"children\":[";
        for (size_t i = 0; i < node.children.size(); ++i) {
            if (i) os << ",";
            os << trace_to_json(node.children[i]);
        }
        os << "]";
    }
    os << "}";
    return os.str();
}

// ------------------------------------------------------------- searches

std::optional<int> find_contractible_edge(const ReductionInstance& inst) {
    const auto& emb = inst.witness.emb;
    FaceSet fs = faces(emb);
    for (int e = 0; e < emb.m(); ++e) {
        if (inst.edge_class[e] != EdgeClass::Unmarked) continue;
        int f1 = fs.face_of_half[2 * e];
        int f2 = fs.face_of_half[2 * e + 1];
        if (inst.face_crossing[f1] || inst.face_crossing[f2]) continue;
        // contraction safety: the endpoints may share only the two apexes
        auto [x, y] = emb.edges[e];
        std::set<int> nx;
        for (int h : emb.rotation[x]) nx.insert(emb.head(h));
        int common = 0;
        for (int h : emb.rotation[y]) common += nx.count(emb.head(h)) > 0;
        if (common != 2) continue;  // separating triangle, deferred to split
        return e;
    }
    return std::nullopt;
}

std::optional<FlipMatch> find_flippable_edge(const ReductionInstance& inst) {
    const auto& emb = inst.witness.emb;
    FaceSet fs = faces(emb);
    auto apex = [&](int face, int u, int v) {
        for (int h : fs.cycles[face]) {
            int w = emb.origin(h);
            if (w != u && w != v) return w;
        }
        return -1;
    };
    auto pos_of_edge = [&](int e) { return inst.seq.position_of_edge(e); };
    for (size_t f = 0; f < fs.cycles.size(); ++f) {
        if (inst.face_crossing[f]) continue;
        std::vector<int> vs;
        for (int h : fs.cycles[f]) vs.push_back(emb.origin(h));
        for (int pick = 0; pick < 3; ++pick) {
            for (int orient = 0; orient < 2; ++orient) {
                int x = vs[(pick + (orient ? 1 : 0)) % 3];
                int y = vs[(pick + (orient ? 0 : 1)) % 3];
                int z = vs[(pick + 2) % 3];
                int exy = emb.edge_between(x, y);
                if (inst.edge_class[exy] != EdgeClass::Unmarked) continue;
                int hxy = emb.half_edge(x, y);
                int fxy = fs.face_of_half[hxy] == static_cast<int>(f)
                              ? fs.face_of_half[CombinatorialEmbedding::twin(hxy)]
                              : fs.face_of_half[hxy];
                int fzy = fs.face_of_half[emb.half_edge(z, y)];
                if (fzy == static_cast<int>(f))
                    fzy = fs.face_of_half[CombinatorialEmbedding::twin(emb.half_edge(z, y))];
                int fxz = fs.face_of_half[emb.half_edge(x, z)];
                if (fxz == static_cast<int>(f))
                    fxz = fs.face_of_half[CombinatorialEmbedding::twin(emb.half_edge(x, z))];
                if (!inst.face_crossing[fxy] || !inst.face_crossing[fzy] ||
                    !inst.face_crossing[fxz])
                    continue;
                int b = apex(fxy, x, y);
                int c = apex(fzy, z, y);
                int a = apex(fxz, x, z);
                std::set<int> all = {x, y, z, a, b, c};
                if (all.size() != 6) continue;
                int pza = pos_of_edge(emb.edge_between(z, a));
                int pxa = pos_of_edge(emb.edge_between(x, a));
                int pxb = pos_of_edge(emb.edge_between(x, b));
                int pyb = pos_of_edge(emb.edge_between(y, b));
                int pyc = pos_of_edge(emb.edge_between(y, c));
                int pzc = pos_of_edge(emb.edge_between(z, c));
                if (pxa < 0 || pxb < 0 || pyb < 0 || pyc < 0 || pzc < 0 || pza < 0) continue;
                FlipMatch match;
                match.xy = exy;
                match.x = x;
                match.y = y;
                match.z = z;
                match.a = a;
                match.b = b;
                match.c = c;
                if (pza < pxa && pxa < pxb && pxb < pyb && pyb < pyc && pyc < pzc) {
                    match.case_b = false;
                    require(emb.edge_between(z, b) < 0, "EdgeExists",
                            "flip edge already present (separating triangle missed)");
                    return match;
                }
                if (pxa < pxb && pxb < pyb && pyb < pyc && pyc < pzc && pzc < pza) {
                    // only valid when xza is the outer face
                    if (fxz != emb.outer_face) continue;
                    match.case_b = true;
                    require(emb.edge_between(z, b) < 0, "EdgeExists",
                            "flip edge already present (separating triangle missed)");
                    return match;
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<int> find_edge_on_curve(const ReductionInstance& inst) {
    for (int e = 0; e < inst.witness.emb.m(); ++e)
        if (inst.edge_class[e] == EdgeClass::OnCurve) return e;
    return std::nullopt;
}

// ---------------------------------------------------------------- tutte

StraightLineDrawing tutte_draw(const CombinatorialEmbedding& emb,
                               const std::vector<QPoint>& outer_coords,
                               const SolveOptions& opts) {
    require(is_triangulation(emb), "MalformedEmbedding", "tutte fill expects a triangulation");
    std::vector<int> outer_vs = outer_cycle_vertices(emb);
    require(outer_vs.size() == outer_coords.size() && outer_vs.size() == 3,
            "IncompatibleOuterShape", "tutte fill expects a triangular outer face");
    require(orientation(outer_coords[0], outer_coords[1], outer_coords[2]) != 0,
            "IncompatibleOuterShape", "degenerate outer triangle");

    std::vector<QPoint> coords(emb.n, QPoint{Q(0), Q(0)});
    std::vector<char> fixed(emb.n, 0);
    for (size_t i = 0; i < outer_vs.size(); ++i) {
        coords[outer_vs[i]] = outer_coords[i];
        fixed[outer_vs[i]] = 1;
    }
    std::vector<int> interior;
    std::vector<int> index(emb.n, -1);
    for (int v = 0; v < emb.n; ++v) {
        if (!fixed[v]) {
            index[v] = static_cast<int>(interior.size());
            interior.push_back(v);
        }
    }
    if (!interior.empty()) {
        int k = static_cast<int>(interior.size());
        SlopeSystem sysx, sysy;
        sysx.m = sysy.m = k;
        for (int i = 0; i < k; ++i) {
            int v = interior[i];
            std::vector<std::pair<int, Q>> row = {{i, Q(emb.degree(v))}};
            Q bx = 0, by = 0;
            for (int h : emb.rotation[v]) {
                int w = emb.head(h);
                if (fixed[w]) {
                    bx += coords[w].x;
                    by += coords[w].y;
                } else {
                    row.push_back({index[w], Q(-1)});
                }
            }
            sysx.add_row(RowTag{RowTag::Concurrency, v, -1}, row, bx);
            sysy.add_row(RowTag{RowTag::Concurrency, v, -1}, row, by);
        }
        SolveOutcome sx = solve_system(sysx, opts);
        SolveOutcome sy = solve_system(sysy, opts);
        for (int i = 0; i < k; ++i) coords[interior[i]] = {sx.slopes[i], sy.slopes[i]};
    }
    StraightLineDrawing out;
    out.emb = emb;
    out.coords = std::move(coords);
    auto rep = is_plane(out);
    if (rep.count != 0) {
        if (opts.arithmetic == Arithmetic::Float) {
            SolveOptions exact = opts;
            exact.arithmetic = Arithmetic::Rational;
            return tutte_draw(emb, outer_coords, exact);
        }
        fail("SingularSystem", "barycentric fill produced crossings");
    }
    return out;
}

// -------------------------------------------------------- uncontraction

namespace {

std::optional<QPoint> place_in_region(const StraightLineDrawing& d,
                                      const std::vector<HalfPlane>& planes,
                                      const std::vector<QPoint>& extra,
                                      const std::function<bool(const QPoint&)>& accept) {
    std::vector<QPoint> cands = placement_candidates(planes, witness_bound(d));
    cands.insert(cands.end(), extra.begin(), extra.end());
    for (const auto& c : cands) {
        bool inside = true;
        for (const auto& h : planes)
            if (!h.contains(c)) {
                inside = false;
                break;
            }
        if (!inside) continue;
        if (accept(c)) return c;
    }
    return std::nullopt;
}

}  // namespace

std::pair<QPoint, QPoint> uncontract_placement(const StraightLineDrawing& solved,
                                               const UncontractTask& task) {
    QPoint v = solved.at(task.merged_vertex);
    int s = task.side == CurveSide::Plus ? 1 : -1;
    for (Q radius = task.epsilon / 3; ; radius /= 2) {
        auto region = [&](const std::vector<int>& link, const std::vector<std::pair<int, Q>>& win,
                          const QPoint& partner) {
            std::vector<HalfPlane> planes;
            std::vector<QPoint> poly;
            for (int w : link) poly.push_back(w < 0 ? partner : solved.at(w));
            kernel_halfplanes(poly, planes);
            planes.push_back(HalfPlane{Q(1), Q(0), v.x + radius});
            planes.push_back(HalfPlane{Q(-1), Q(0), -(v.x - radius)});
            planes.push_back(HalfPlane{Q(0), Q(1), v.y + radius});
            planes.push_back(HalfPlane{Q(0), Q(-1), -(v.y - radius)});
            planes.push_back(s > 0 ? HalfPlane{Q(-1), Q(0), Q(0)} : HalfPlane{Q(1), Q(0), Q(0)});
            for (const auto& [far_v, target] : win)
                window_halfplanes(solved.at(far_v), s, target - task.epsilon,
                                  target + task.epsilon, planes);
            return halfplane_intersection(planes, witness_bound(solved));
        };
        // one endpoint may be pinned to the merged position (outer corner)
        if (task.pinned == 1 || task.pinned == 2) {
            const auto& free_link = task.pinned == 1 ? task.y_link : task.x_link;
            const auto& free_win = task.pinned == 1 ? task.y_windows : task.x_windows;
            auto rf = region(free_link, free_win, v);
            if (!rf.empty()) {
                QPoint pf = polygon_centroid(rf);
                if (pf != v && axis_side(pf) != Axis::Y)
                    return task.pinned == 1 ? std::make_pair(v, pf) : std::make_pair(pf, v);
            }
        } else {
            auto rx = region(task.x_link, task.x_windows, v);
            if (!rx.empty()) {
                QPoint px = polygon_centroid(rx);
                auto ry = region(task.y_link, task.y_windows, px);
                if (!ry.empty()) {
                    QPoint py = polygon_centroid(ry);
                    if (px != py && axis_side(px) != Axis::Y && axis_side(py) != Axis::Y)
                        return {px, py};
                }
            }
        }
        if (radius < task.epsilon / 1024) break;
    }
    fail("EmptyKernel", "no valid uncontraction placement inside the epsilon ball");
}

// --------------------------------------------------------- the recursion

namespace {

struct Reducer {
    SolveOptions opts;

    StraightLineDrawing run(const ReductionInstance& inst, TraceNode* trace) {
        const auto& emb = inst.witness.emb;
        if (emb.n <= 4) return small_case(inst, trace);
        auto tri = find_separating_triangle(emb);
        if (!tri.empty()) return split(inst, tri, trace);
        if (auto e = find_contractible_edge(inst)) return contract(inst, *e, trace);
        if (auto match = find_flippable_edge(inst)) return flip(inst, *match, trace);
        if (auto e = find_edge_on_curve(inst)) return replace_on_curve(inst, *e, trace);
        if (trace) trace->kind = TraceNode::Base;
        return base_case_solve(inst, opts);
    }

    StraightLineDrawing small_case(const ReductionInstance& inst, TraceNode* trace) {
        if (trace) trace->kind = TraceNode::Small;
        const auto& emb = inst.witness.emb;
        std::vector<int> outer_vs = outer_cycle_vertices(emb);
        StraightLineDrawing d;
        d.emb = emb;
        d.coords.assign(emb.n, QPoint{Q(0), Q(0)});
        std::vector<char> placed(emb.n, 0);
        for (size_t i = 0; i < outer_vs.size(); ++i) {
            d.coords[outer_vs[i]] = inst.delta[i];
            placed[outer_vs[i]] = 1;
        }
        for (int v = 0; v < emb.n; ++v) {
            if (placed[v]) continue;
            if (inst.side[v] == CurveSide::On) {
                int p = inst.seq.position_of_vertex(v);
                require(p >= 0, "InconsistentSides", "interior axis vertex missing from sequence");
                d.coords[v] = {Q(0), inst.seq.targets[p]};
                continue;
            }
            // interior off-curve vertex: inside the outer triangle, on its
            // side, crossing edges inside their windows
            std::vector<HalfPlane> planes;
            std::vector<QPoint> tri = inst.delta;
            if (polygon_signed_area2(tri) < 0) std::reverse(tri.begin(), tri.end());
            kernel_halfplanes(tri, planes);
            int s = inst.side[v] == CurveSide::Plus ? 1 : -1;
            planes.push_back(s > 0 ? HalfPlane{Q(-1), Q(0), Q(0)} : HalfPlane{Q(1), Q(0), Q(0)});
            for (int h : emb.rotation[v]) {
                int e = emb.edge_of(h);
                if (inst.edge_class[e] != EdgeClass::Crossing) continue;
                int w = emb.head(h);
                require(placed[w], "InconsistentSides", "small case expects outer far endpoints");
                int p = inst.seq.position_of_edge(e);
                window_halfplanes(d.at(w), s, inst.seq.targets[p] - inst.seq.epsilon,
                                  inst.seq.targets[p] + inst.seq.epsilon, planes);
            }
            auto accept = [&](const QPoint& cand) {
                StraightLineDrawing probe = d;
                probe.coords[v] = cand;
                return surgery_ok(probe, {v}, inst.seq.items);
            };
            auto spot = place_in_region(d, planes, {}, accept);
            require(spot.has_value(), "EmptyKernel", "no placement for the interior vertex");
            d.coords[v] = *spot;
            placed[v] = 1;
        }
        require(surgery_ok(d, outer_vs, inst.seq.items), "InconsistentSides",
                "small case produced an invalid drawing");
        require(is_plane(d).count == 0, "InconsistentSides", "small case drawing not plane");
        verify_targets_met(inst, d);
        return d;
    }

    // positions of sequence items realized by a drawing of the same graph
    static Q realized_value(const StraightLineDrawing& d, const CrossItem& item) {
        if (item.is_vertex) return d.at(item.id).y;
        auto [u, v] = d.emb.edges[item.id];
        return axis_crossing_y(d.at(u), d.at(v));
    }

    void verify_targets_met(const ReductionInstance& inst, const StraightLineDrawing& d) const {
        for (size_t i = 0; i < inst.seq.items.size(); ++i) {
            const CrossItem& it = inst.seq.items[i];
            Q got = realized_value(d, it);
            if (it.is_vertex)
                require(got == inst.seq.targets[i] && d.at(it.id).x == 0, "InconsistentSides",
                        "curve vertex drawn off its target");
            else
                require(q_abs(got - inst.seq.targets[i]) <= inst.seq.epsilon, "InconsistentSides",
                        "crossing edge drawn outside its tolerance window");
        }
    }

    StraightLineDrawing split(const ReductionInstance& inst, const std::vector<int>& tri,
                              TraceNode* trace) {
        const auto& emb = inst.witness.emb;
        int x = tri[0], y = tri[1], z = tri[2];
        std::vector<char> interior(emb.n, 0);
        {
            const QPoint &px = inst.witness.at(x), &py = inst.witness.at(y),
                         &pz = inst.witness.at(z);
            std::vector<QPoint> t = {px, py, pz};
            if (polygon_signed_area2(t) < 0) std::swap(t[1], t[2]);
            for (int v = 0; v < emb.n; ++v)
                interior[v] = v != x && v != y && v != z && strictly_inside_convex(t, inst.witness.at(v));
        }
        int interior_count = 0;
        for (char c : interior) interior_count += c;
        require(interior_count > 0 && interior_count < emb.n - 3, "NotSeparating",
                "triangle does not separate the graph");

        auto item_interior = [&](const CrossItem& it) {
            if (it.is_vertex) return interior[it.id] != 0;
            auto [u, v] = emb.edges[it.id];
            return interior[u] || interior[v];
        };
        int first = -1, last = -1;
        for (size_t i = 0; i < inst.seq.items.size(); ++i) {
            if (item_interior(inst.seq.items[i])) {
                if (first < 0) first = static_cast<int>(i);
                last = static_cast<int>(i);
            }
        }
        for (int i = first; first >= 0 && i <= last; ++i)
            require(item_interior(inst.seq.items[i]), "NotSeparating",
                    "interior curve items are not contiguous");

        std::vector<char> keep_plus(emb.n, 1);
        for (int v = 0; v < emb.n; ++v)
            if (interior[v]) keep_plus[v] = 0;
        Restriction plus = restrict_to(inst.witness, keep_plus);

        std::vector<char> keep_minus(emb.n, 0);
        for (int v = 0; v < emb.n; ++v)
            if (interior[v]) keep_minus[v] = 1;
        keep_minus[x] = keep_minus[y] = keep_minus[z] = 1;
        Restriction minus = restrict_to(inst.witness, keep_minus);

        if (first < 0) {
            // curve misses the interior: solve the outside, fill by Tutte
            if (trace) trace->kind = TraceNode::SplitTutte;
            CrossingSequence seq_plus;
            seq_plus.epsilon = inst.seq.epsilon;
            for (size_t i = 0; i < inst.seq.items.size(); ++i) {
                seq_plus.items.push_back(remap_item(inst.seq.items[i], plus.vmap, plus.emap));
                seq_plus.targets.push_back(inst.seq.targets[i]);
            }
            std::vector<QPoint> delta_plus =
                align_delta(inst.witness.emb, inst.delta, plus.drawing.emb, plus.vmap);
            ReductionInstance child =
                make_instance(plus.drawing, seq_plus, delta_plus, false);
            TraceNode* child_trace = nullptr;
            if (trace) {
                trace->children.emplace_back();
                child_trace = &trace->children.back();
            }
            StraightLineDrawing d_plus = run(child, child_trace);

            // the solved triangle must avoid the axis strictly
            std::vector<int> mouter = outer_cycle_vertices(minus.drawing.emb);
            std::vector<QPoint> corners;
            for (int mv : mouter) corners.push_back(d_plus.at(plus.vmap[minus.vback[mv]]));
            {
                bool pos = false, neg = false;
                for (const auto& p : corners) {
                    pos |= sign(p.x) > 0;
                    neg |= sign(p.x) < 0;
                }
                require(!(pos && neg), "InconsistentSides",
                        "separating triangle interior touches the axis");
            }
            StraightLineDrawing d_minus = tutte_draw(minus.drawing.emb, corners, opts);
            return merge(inst, plus, d_plus, minus, d_minus);
        }

        if (trace) trace->kind = TraceNode::Split;
        require(first > 0 && last + 1 < static_cast<int>(inst.seq.items.size()), "NotSeparating",
                "interior run touches the sequence boundary");
        auto is_tri_element = [&](const CrossItem& it) {
            if (it.is_vertex) return it.id == x || it.id == y || it.id == z;
            auto [u, v] = emb.edges[it.id];
            std::set<int> t = {x, y, z};
            return t.count(u) && t.count(v);
        };
        require(is_tri_element(inst.seq.items[first - 1]) &&
                    is_tri_element(inst.seq.items[last + 1]),
                "NotSeparating", "interior run is not bracketed by the triangle");

        CrossingSequence seq_plus;
        seq_plus.epsilon = inst.seq.epsilon / 2;
        for (size_t i = 0; i < inst.seq.items.size(); ++i) {
            if (static_cast<int>(i) >= first && static_cast<int>(i) <= last) continue;
            seq_plus.items.push_back(remap_item(inst.seq.items[i], plus.vmap, plus.emap));
            seq_plus.targets.push_back(inst.seq.targets[i]);
        }
        ReductionInstance child_plus = make_instance(
            plus.drawing, seq_plus,
            align_delta(inst.witness.emb, inst.delta, plus.drawing.emb, plus.vmap), false);
        TraceNode* plus_trace = nullptr;
        if (trace) {
            trace->children.emplace_back();
            plus_trace = &trace->children.back();
        }
        StraightLineDrawing d_plus = run(child_plus, plus_trace);

        Q lo = realized_value(d_plus,
                              remap_item(inst.seq.items[first - 1], plus.vmap, plus.emap));
        Q hi = realized_value(d_plus,
                              remap_item(inst.seq.items[last + 1], plus.vmap, plus.emap));
        require(lo < inst.seq.targets[first] && inst.seq.targets[last] < hi, "NotSeparating",
                "realized brackets do not enclose the carved run");

        CrossingSequence seq_minus;
        seq_minus.epsilon = inst.seq.epsilon;
        seq_minus.items.push_back(remap_item(inst.seq.items[first - 1], minus.vmap, minus.emap));
        seq_minus.targets.push_back(lo);
        for (int i = first; i <= last; ++i) {
            seq_minus.items.push_back(remap_item(inst.seq.items[i], minus.vmap, minus.emap));
            seq_minus.targets.push_back(inst.seq.targets[i]);
        }
        seq_minus.items.push_back(remap_item(inst.seq.items[last + 1], minus.vmap, minus.emap));
        seq_minus.targets.push_back(hi);

        std::vector<int> mouter = outer_cycle_vertices(minus.drawing.emb);
        std::vector<QPoint> delta_minus;
        for (int mv : mouter) delta_minus.push_back(d_plus.at(plus.vmap[minus.vback[mv]]));

        ReductionInstance child_minus =
            make_instance(minus.drawing, seq_minus, delta_minus, false);
        TraceNode* minus_trace = nullptr;
        if (trace) {
            trace->children.emplace_back();
            minus_trace = &trace->children.back();
        }
        StraightLineDrawing d_minus = run(child_minus, minus_trace);
        return merge(inst, plus, d_plus, minus, d_minus);
    }

    StraightLineDrawing merge(const ReductionInstance& inst, const Restriction& plus,
                              const StraightLineDrawing& d_plus, const Restriction& minus,
                              const StraightLineDrawing& d_minus) {
        StraightLineDrawing out;
        out.emb = inst.witness.emb;
        out.coords.assign(out.emb.n, QPoint{Q(0), Q(0)});
        for (int v = 0; v < out.emb.n; ++v) {
            if (plus.vmap[v] >= 0)
                out.coords[v] = d_plus.at(plus.vmap[v]);
            else
                out.coords[v] = d_minus.at(minus.vmap[v]);
        }
        for (int v = 0; v < out.emb.n; ++v) {
            if (plus.vmap[v] >= 0 && minus.vmap[v] >= 0)
                require(d_plus.at(plus.vmap[v]) == d_minus.at(minus.vmap[v]), "NotSeparating",
                        "shared triangle drawn differently in the two parts");
        }
        verify_targets_met(inst, out);
        return out;
    }

    StraightLineDrawing contract(const ReductionInstance& inst, int e, TraceNode* trace) {
        if (trace) trace->kind = TraceNode::Contract;
        const auto& emb = inst.witness.emb;
        ContractionResult cr = contract_edge(emb, e);

        // child witness: merged vertex placed by the shared region machinery
        StraightLineDrawing child_witness;
        child_witness.emb = cr.emb;
        child_witness.coords.assign(cr.emb.n, QPoint{Q(0), Q(0)});
        for (int v = 0; v < emb.n; ++v)
            if (v != cr.y) child_witness.coords[cr.vertex_map[v]] = inst.witness.at(v);

        CrossingSequence child_seq;
        child_seq.epsilon = inst.seq.epsilon / 2;
        for (size_t i = 0; i < inst.seq.items.size(); ++i) {
            child_seq.items.push_back(
                remap_item(inst.seq.items[i], cr.vertex_map, cr.edge_map));
            child_seq.targets.push_back(inst.seq.targets[i]);
        }
        std::vector<QPoint> child_delta =
            align_delta(emb, inst.delta, cr.emb, cr.vertex_map);

        int v_new = cr.merged_vertex;
        CurveSide vside = inst.side[cr.x];
        require(vside != CurveSide::On && vside == inst.side[cr.y], "InconsistentSides",
                "contractible edge endpoints must share a strict side");
        {
            // feasibility region for the merged vertex in the child witness
            std::vector<HalfPlane> planes;
            std::vector<QPoint> link;
            for (int h : cr.emb.rotation[v_new]) link.push_back(child_witness.at(cr.emb.head(h)));
            kernel_halfplanes(link, planes);
            int s = vside == CurveSide::Plus ? 1 : -1;
            planes.push_back(s > 0 ? HalfPlane{Q(-1), Q(0), Q(0)} : HalfPlane{Q(1), Q(0), Q(0)});
            // crossing windows in witness coordinates: each crossing edge of
            // the merged vertex must stay between the nearest fixed items
            CrossingSequence wit_seq = crossing_sequence_of(inst.witness);
            auto is_v_edge = [&](const CrossItem& it) {
                if (it.is_vertex) return false;
                auto [pu, pw] = emb.edges[it.id];
                return pu == cr.x || pu == cr.y || pw == cr.x || pw == cr.y;
            };
            Q bound = witness_bound(inst.witness);
            for (size_t i = 0; i < wit_seq.items.size(); ++i) {
                const CrossItem& it = wit_seq.items[i];
                if (!is_v_edge(it)) continue;
                auto [pu, pw] = emb.edges[it.id];
                int far_parent = (pu == cr.x || pu == cr.y) ? pw : pu;
                Q lo = -bound, hi = bound;
                for (int q = static_cast<int>(i) - 1; q >= 0; --q) {
                    if (!is_v_edge(wit_seq.items[q])) {
                        lo = wit_seq.targets[q];
                        break;
                    }
                }
                for (size_t q = i + 1; q < wit_seq.items.size(); ++q) {
                    if (!is_v_edge(wit_seq.items[q])) {
                        hi = wit_seq.targets[q];
                        break;
                    }
                }
                window_halfplanes(inst.witness.at(far_parent), s, lo, hi, planes);
            }
            auto accept = [&](const QPoint& cand) {
                StraightLineDrawing probe = child_witness;
                probe.coords[v_new] = cand;
                return surgery_ok(probe, {v_new}, child_seq.items);
            };
            std::vector<QPoint> extras = {inst.witness.at(cr.x), inst.witness.at(cr.y)};
            auto spot = place_in_region(child_witness, planes, extras, accept);
            require(spot.has_value(), "WITNESS_SURGERY_FAILED",
                    "cannot place the contracted vertex in the child witness");
            child_witness.coords[v_new] = *spot;
        }

        ReductionInstance child = make_instance(child_witness, child_seq, child_delta, false);
        TraceNode* child_trace = nullptr;
        if (trace) {
            trace->children.emplace_back();
            child_trace = &trace->children.back();
        }
        StraightLineDrawing solved = run(child, child_trace);

        // undo: split the merged vertex inside the epsilon/2 ball
        UncontractTask task;
        task.merged_vertex = cr.merged_vertex;
        task.side = vside;
        task.epsilon = inst.seq.epsilon;
        {
            std::vector<int> pouter = outer_cycle_vertices(emb);
            for (int ov : pouter) {
                if (ov == cr.x) task.pinned = 1;
                if (ov == cr.y) task.pinned = 2;
            }
        }
        auto link_of = [&](int parent_vertex, int partner) {
            std::vector<int> link;
            for (int h : emb.rotation[parent_vertex]) {
                int w = emb.head(h);
                link.push_back(w == partner ? -1 : cr.vertex_map[w]);
            }
            return link;
        };
        task.x_link = link_of(cr.x, cr.y);
        task.y_link = link_of(cr.y, cr.x);
        auto windows_of = [&](int parent_vertex) {
            std::vector<std::pair<int, Q>> win;
            for (int h : emb.rotation[parent_vertex]) {
                int pe = emb.edge_of(h);
                if (inst.edge_class[pe] != EdgeClass::Crossing) continue;
                int pos = inst.seq.position_of_edge(pe);
                require(pos >= 0, "InconsistentSides", "crossing edge missing from sequence");
                int far = emb.head(h);
                win.push_back({cr.vertex_map[far], inst.seq.targets[pos]});
            }
            return win;
        };
        task.x_windows = windows_of(cr.x);
        task.y_windows = windows_of(cr.y);
        auto [px, py] = uncontract_placement(solved, task);

        StraightLineDrawing out;
        out.emb = emb;
        out.coords.assign(emb.n, QPoint{Q(0), Q(0)});
        for (int v = 0; v < emb.n; ++v) {
            if (v == cr.x)
                out.coords[v] = px;
            else if (v == cr.y)
                out.coords[v] = py;
            else
                out.coords[v] = solved.at(cr.vertex_map[v]);
        }
        require(surgery_ok(out, {cr.x, cr.y}, inst.seq.items), "EmptyKernel",
                "uncontraction placement is not locally plane");
        verify_targets_met(inst, out);
        return out;
    }

    // shared by flip and on-curve replacement: swap edge exy for zb
    struct Swap {
        CombinatorialEmbedding child_emb;
        std::vector<int> edge_map;  // parent -> child
        int zb_edge = -1;
    };

    Swap swap_edge(const CombinatorialEmbedding& emb, int exy, int x, int y, int z, int b) const {
        Swap sw;
        require(emb.edge_between(z, b) < 0, "EdgeExists", "replacement edge already present");
        CombinatorialEmbedding child;
        child.n = emb.n;
        sw.edge_map.assign(emb.m(), -1);
        for (int e = 0; e < emb.m(); ++e) {
            if (e == exy) continue;
            sw.edge_map[e] = static_cast<int>(child.edges.size());
            child.edges.push_back(emb.edges[e]);
        }
        sw.zb_edge = static_cast<int>(child.edges.size());
        child.edges.push_back({z, b});
        auto child_half = [&](int old_h) {
            int ne = sw.edge_map[emb.edge_of(old_h)];
            if (ne < 0) return -1;
            int no = emb.origin(old_h);
            return child.edges[ne].first == no ? 2 * ne : 2 * ne + 1;
        };
        child.rotation.assign(child.n, {});
        for (int v = 0; v < emb.n; ++v) {
            for (int h : emb.rotation[v]) {
                int nh = child_half(h);
                if (nh >= 0) child.rotation[v].push_back(nh);
            }
            // insert the new half-edge: at z between x and y, at b between y and x
            auto insert_between = [&](int at, int let, int ri, int nh) {
                auto& rot = child.rotation[at];
                for (size_t i = 0; i < rot.size(); ++i) {
                    int u = child.edges[rot[i] >> 1].first == at
                                ? child.edges[rot[i] >> 1].second
                                : child.edges[rot[i] >> 1].first;
                    size_t j = (i + 1) % rot.size();
                    int w = child.edges[rot[j] >> 1].first == at
                                ? child.edges[rot[j] >> 1].second
                                : child.edges[rot[j] >> 1].first;
                    if ((u == let && w == ri) || (u == ri && w == let)) {
                        rot.insert(rot.begin() + static_cast<long>(j), nh);
                        return true;
                    }
                }
                return false;
            };
            if (v == z)
                require(insert_between(z, x, y, 2 * sw.zb_edge), "MalformedEmbedding",
                        "cannot splice the flip edge at z");
            if (v == b)
                require(insert_between(b, x, y, 2 * sw.zb_edge + 1), "MalformedEmbedding",
                        "cannot splice the flip edge at b");
        }
        child.validate();
        require(is_triangulation(child), "MalformedEmbedding", "edge swap broke the triangulation");
        // outer face: track via a surviving half-edge
        FaceSet old_fs = faces(emb);
        int marker = -1;
        for (int h : old_fs.cycles[emb.outer_face]) {
            int nh = child_half(h);
            if (nh >= 0) {
                marker = nh;
                break;
            }
        }
        require(marker >= 0, "MalformedEmbedding", "outer face lost in edge swap");
        child.outer_face = faces(child).face_of_half[marker];
        sw.child_emb = std::move(child);
        return sw;
    }

    // Build the child witness for an edge swap; move z or b when needed.
    StraightLineDrawing swap_witness(const ReductionInstance& inst, const Swap& sw, int x, int y,
                                     int z, int b, const std::vector<CrossItem>& child_items,
                                     const Q& lo, const Q& hi) const {
        StraightLineDrawing w;
        w.emb = sw.child_emb;
        w.coords = inst.witness.coords;
        if (surgery_ok(w, {z, b}, child_items)) return w;
        // try re-placing z, then b
        for (int moved : {z, b}) {
            StraightLineDrawing probe = w;
            std::vector<HalfPlane> planes;
            std::vector<QPoint> link;
            for (int h : sw.child_emb.rotation[moved])
                link.push_back(w.at(sw.child_emb.head(h)));
            kernel_halfplanes(link, planes);
            CurveSide side = inst.side[moved];
            int s = side == CurveSide::Plus ? 1 : -1;
            planes.push_back(s > 0 ? HalfPlane{Q(-1), Q(0), Q(0)} : HalfPlane{Q(1), Q(0), Q(0)});
            int far = moved == z ? b : z;
            window_halfplanes(w.at(far), s, lo, hi, planes);
            // keep the moved vertex's other crossings inside their brackets
            CrossingSequence wit = crossing_sequence_of(inst.witness);
            for (size_t i = 0; i < wit.items.size(); ++i) {
                const CrossItem& it = wit.items[i];
                if (it.is_vertex) continue;
                auto [pu, pv] = inst.witness.emb.edges[it.id];
                if (pu != moved && pv != moved) continue;
                if (sw.edge_map[it.id] < 0) continue;
                int other = pu == moved ? pv : pu;
                Q wlo, whi;
                bool has_lo = false, has_hi = false;
                for (int q = static_cast<int>(i) - 1; q >= 0; --q) {
                    auto [qu, qv] = wit.items[q].is_vertex
                                        ? std::pair<int, int>{-1, -1}
                                        : inst.witness.emb.edges[wit.items[q].id];
                    if (wit.items[q].is_vertex || (qu != moved && qv != moved)) {
                        wlo = wit.targets[q];
                        has_lo = true;
                        break;
                    }
                }
                for (size_t q = i + 1; q < wit.items.size(); ++q) {
                    auto [qu, qv] = wit.items[q].is_vertex
                                        ? std::pair<int, int>{-1, -1}
                                        : inst.witness.emb.edges[wit.items[q].id];
                    if (wit.items[q].is_vertex || (qu != moved && qv != moved)) {
                        whi = wit.targets[q];
                        has_hi = true;
                        break;
                    }
                }
                Q bound = witness_bound(inst.witness);
                window_halfplanes(w.at(other), s, has_lo ? wlo : Q(-bound),
                                  has_hi ? whi : bound, planes);
            }
            auto accept = [&](const QPoint& cand) {
                probe.coords[moved] = cand;
                return surgery_ok(probe, {moved, moved == z ? b : z}, child_items);
            };
            auto spot = place_in_region(w, planes, {}, accept);
            if (spot.has_value()) {
                w.coords[moved] = *spot;
                return w;
            }
        }
        fail("WITNESS_SURGERY_FAILED", "cannot realize the swapped edge in the witness");
    }

    StraightLineDrawing flip(const ReductionInstance& inst, const FlipMatch& match,
                             TraceNode* trace) {
        if (trace) trace->kind = TraceNode::Flip;
        const auto& emb = inst.witness.emb;
        Swap sw = swap_edge(emb, match.xy, match.x, match.y, match.z, match.b);

        int exb = emb.edge_between(match.x, match.b);
        int eyb = emb.edge_between(match.y, match.b);
        int pxb = inst.seq.position_of_edge(exb);
        int pyb = inst.seq.position_of_edge(eyb);
        require(pxb >= 0 && pyb == pxb + 1, "InconsistentSides",
                "flip region crossings are not adjacent in the sequence");

        CrossingSequence child_seq;
        child_seq.epsilon = inst.seq.epsilon;
        for (size_t i = 0; i < inst.seq.items.size(); ++i) {
            child_seq.items.push_back(remap_item(inst.seq.items[i], identity_vmap(emb.n),
                                                 sw.edge_map));
            child_seq.targets.push_back(inst.seq.targets[i]);
            if (static_cast<int>(i) == pxb) {
                child_seq.items.push_back(CrossItem{false, sw.zb_edge});
                child_seq.targets.push_back((inst.seq.targets[pxb] + inst.seq.targets[pyb]) / 2);
            }
        }
        CrossingSequence wit = crossing_sequence_of(inst.witness);
        StraightLineDrawing child_witness =
            swap_witness(inst, sw, match.x, match.y, match.z, match.b, child_seq.items,
                         wit.targets[pxb], wit.targets[pyb]);

        ReductionInstance child = make_instance(
            child_witness, child_seq,
            align_delta(emb, inst.delta, sw.child_emb, identity_vmap(emb.n)), false);
        TraceNode* child_trace = nullptr;
        if (trace) {
            trace->children.emplace_back();
            child_trace = &trace->children.back();
        }
        StraightLineDrawing solved = run(child, child_trace);

        // undo: replace zb by xy in the solved drawing
        StraightLineDrawing out;
        out.emb = emb;
        out.coords = solved.coords;
        require(surgery_ok(out, {match.x, match.y}, inst.seq.items), "InconsistentSides",
                "flip undo produced a crossing");
        verify_targets_met(inst, out);
        return out;
    }

    StraightLineDrawing replace_on_curve(const ReductionInstance& inst, int exy,
                                         TraceNode* trace) {
        if (trace) trace->kind = TraceNode::OnCurve;
        const auto& emb = inst.witness.emb;
        auto [x, y] = emb.edges[exy];
        FaceSet fs = faces(emb);
        auto apex_of = [&](int h) {
            int f = fs.face_of_half[h];
            for (int hh : fs.cycles[f]) {
                int w = emb.origin(hh);
                if (w != x && w != y) return w;
            }
            return -1;
        };
        int z = apex_of(2 * exy);
        int b = apex_of(2 * exy + 1);
        require(z >= 0 && b >= 0, "InconsistentSides", "curve edge without two apexes");
        require(inst.side[z] != CurveSide::On && inst.side[b] != CurveSide::On &&
                    inst.side[z] != inst.side[b],
                "InconsistentSides", "curve edge apexes must straddle the curve");
        if (inst.side[z] == CurveSide::Minus) std::swap(z, b);

        Swap sw = swap_edge(emb, exy, x, y, z, b);
        int px = inst.seq.position_of_vertex(x);
        int py = inst.seq.position_of_vertex(y);
        require(px >= 0 && py >= 0 && std::abs(px - py) == 1, "InconsistentSides",
                "on-curve edge endpoints are not consecutive");
        int lo_pos = std::min(px, py);

        CrossingSequence child_seq;
        child_seq.epsilon = inst.seq.epsilon;
        for (size_t i = 0; i < inst.seq.items.size(); ++i) {
            child_seq.items.push_back(remap_item(inst.seq.items[i], identity_vmap(emb.n),
                                                 sw.edge_map));
            child_seq.targets.push_back(inst.seq.targets[i]);
            if (static_cast<int>(i) == lo_pos) {
                child_seq.items.push_back(CrossItem{false, sw.zb_edge});
                child_seq.targets.push_back(
                    (inst.seq.targets[lo_pos] + inst.seq.targets[lo_pos + 1]) / 2);
            }
        }
        CrossingSequence wit = crossing_sequence_of(inst.witness);
        StraightLineDrawing child_witness =
            swap_witness(inst, sw, x, y, z, b, child_seq.items, wit.targets[lo_pos],
                         wit.targets[lo_pos + 1]);

        ReductionInstance child = make_instance(
            child_witness, child_seq,
            align_delta(emb, inst.delta, sw.child_emb, identity_vmap(emb.n)), false);
        TraceNode* child_trace = nullptr;
        if (trace) {
            trace->children.emplace_back();
            child_trace = &trace->children.back();
        }
        StraightLineDrawing solved = run(child, child_trace);

        StraightLineDrawing out;
        out.emb = emb;
        out.coords = solved.coords;
        require(surgery_ok(out, {x, y}, inst.seq.items), "InconsistentSides",
                "on-curve undo produced a crossing");
        verify_targets_met(inst, out);
        return out;
    }

    static std::vector<int> identity_vmap(int n) {
        std::vector<int> v(n);
        for (int i = 0; i < n; ++i) v[i] = i;
        return v;
    }
};

}  // namespace

StraightLineDrawing base_case_solve(const ReductionInstance& inst, const SolveOptions& opts) {
    const auto& emb = inst.witness.emb;
    require(find_edge_on_curve(inst) == std::nullopt, "BaseCaseNotAGraph",
            "base case cannot contain edges on the curve");

    // remove unmarked edges; remember each removed diagonal's quad
    struct RemovedEdge {
        int parent_edge;
        std::array<int, 4> quad;  // cycle u, p, v, q with the diagonal uv removed
        bool outer;
    };
    FaceSet fs = faces(emb);
    std::vector<RemovedEdge> removed;
    std::vector<char> keep_edge(emb.m(), 1);
    for (int e = 0; e < emb.m(); ++e) {
        if (inst.edge_class[e] != EdgeClass::Unmarked) continue;
        keep_edge[e] = 0;
        auto [u, v] = emb.edges[e];
        int a1 = emb.head(emb.face_next(2 * e));
        int a2 = emb.head(emb.face_next(2 * e + 1));
        bool outer = fs.face_of_half[2 * e] == emb.outer_face ||
                     fs.face_of_half[2 * e + 1] == emb.outer_face;
        removed.push_back({e, {u, a1, v, a2}, outer});
    }

    std::vector<std::pair<int, int>> kept_edges;
    std::vector<int> emap(emb.m(), -1), eback;
    for (int e = 0; e < emb.m(); ++e) {
        if (!keep_edge[e]) continue;
        emap[e] = static_cast<int>(kept_edges.size());
        eback.push_back(e);
        kept_edges.push_back(emb.edges[e]);
    }
    StraightLineDrawing stripped;
    try {
        stripped = drawing_from_coords(emb.n, kept_edges, inst.witness.coords, true);
    } catch (const Error& err) {
        fail("BaseCaseNotAGraph", std::string("stripped witness invalid: ") + err.what());
    }
    AGraph ag;
    try {
        ag = validate_a_graph(stripped);
    } catch (const Error& err) {
        fail("BaseCaseNotAGraph", std::string("stripped graph: ") + err.what());
    }

    // per-edge targets from the sequence
    std::vector<Q> target_by_child_edge(kept_edges.size());
    for (size_t ce = 0; ce < eback.size(); ++ce) {
        int pe = eback[ce];
        auto [u, v] = emb.edges[pe];
        if (inst.edge_class[pe] == EdgeClass::Crossing) {
            int p = inst.seq.position_of_edge(pe);
            require(p >= 0, "BaseCaseNotAGraph", "crossing edge missing from the sequence");
            target_by_child_edge[ce] = inst.seq.targets[p];
        } else {
            int on = inst.side[u] == CurveSide::On ? u : v;
            int p = inst.seq.position_of_vertex(on);
            require(p >= 0, "BaseCaseNotAGraph", "curve vertex missing from the sequence");
            target_by_child_edge[ce] = inst.seq.targets[p];
        }
    }
    std::vector<Q> targets_by_rank(kept_edges.size());
    for (size_t ce = 0; ce < kept_edges.size(); ++ce)
        targets_by_rank[ag.rank_of_edge[ce]] = target_by_child_edge[ce];

    // outer shape for the A-graph
    std::vector<int> parent_outer = outer_cycle_vertices(emb);
    std::map<int, QPoint> corner_of;
    for (size_t i = 0; i < parent_outer.size(); ++i) corner_of[parent_outer[i]] = inst.delta[i];
    std::vector<int> child_outer = outer_cycle_vertices(stripped.emb);
    BoundarySpec spec;
    for (int v : child_outer) {
        auto it = corner_of.find(v);
        if (it != corner_of.end()) {
            spec.shape.push_back(it->second);
            continue;
        }
        // fourth vertex of the opened outer quad
        if (inst.side[v] == CurveSide::On) {
            int p = inst.seq.position_of_vertex(v);
            require(p >= 0, "BaseCaseNotAGraph", "outer curve vertex missing from sequence");
            spec.shape.push_back(QPoint{Q(0), inst.seq.targets[p]});
            continue;
        }
        // intersection of the two boundary crossing edge lines
        std::vector<std::pair<QPoint, Q>> lines;  // (anchor corner, crossing target)
        for (int h : stripped.emb.rotation[v]) {
            int w = stripped.emb.head(h);
            if (!corner_of.count(w)) continue;
            int ce = stripped.emb.edge_of(h);
            int pe = eback[ce];
            if (inst.edge_class[pe] != EdgeClass::Crossing) continue;
            int p = inst.seq.position_of_edge(pe);
            require(p >= 0, "BaseCaseNotAGraph", "outer crossing edge missing from sequence");
            lines.push_back({corner_of.at(w), inst.seq.targets[p]});
        }
        require(lines.size() == 2, "BaseCaseNotAGraph",
                "outer quad vertex needs exactly two boundary crossing edges");
        const QPoint& A = lines[0].first;
        QPoint P1{Q(0), lines[0].second};
        const QPoint& B = lines[1].first;
        QPoint P2{Q(0), lines[1].second};
        QPoint d1 = P1 - A, d2 = P2 - B;
        Q den = cross(d1, d2);
        require(den != 0, "BaseCaseNotAGraph", "outer quad corner lines are parallel");
        Q t = cross(B - A, d2) / den;
        spec.shape.push_back(QPoint{A.x + t * d1.x, A.y + t * d1.y});
    }

    DrawResult res = draw_a_graph(ag, targets_by_rank, spec, opts);

    // reinsert the removed diagonals
    StraightLineDrawing out;
    out.emb = emb;
    out.coords = res.drawing.coords;
    for (const auto& rem : removed) {
        const auto& quad = rem.quad;
        std::vector<QPoint> poly = {out.at(quad[0]), out.at(quad[1]), out.at(quad[2]),
                                    out.at(quad[3])};
        require(polygon_simple(poly), "BaseCaseNotAGraph", "reinsertion quad degenerate");
        if (!rem.outer) {
            bool crossing_diag =
                segments_intersect(out.at(quad[0]), out.at(quad[2]), out.at(quad[1]),
                                   out.at(quad[3]));
            require(crossing_diag, "BaseCaseNotAGraph",
                    "removed diagonal does not fit inside its quad");
        }
    }
    std::vector<int> touched;
    for (const auto& rem : removed) {
        touched.push_back(emb.edges[rem.parent_edge].first);
        touched.push_back(emb.edges[rem.parent_edge].second);
    }
    CrossingSequence got = crossing_sequence_of(out);
    require(got.items.size() == inst.seq.items.size(), "BaseCaseNotAGraph",
            "reinserted drawing changes the crossing sequence");
    for (size_t i = 0; i < got.items.size(); ++i)
        require(got.items[i] == inst.seq.items[i], "BaseCaseNotAGraph",
                "reinserted drawing reorders the crossing sequence");
    require(is_plane(out).count == 0, "BaseCaseNotAGraph",
            "reinserted diagonals cross the drawing");
    require(check_devillers(out, emb), "BaseCaseNotAGraph",
            "reinserted drawing changes the embedding");
    return out;
}

StraightLineDrawing draw_triangulation(const ReductionInstance& inst, const SolveOptions& opts,
                                       TraceNode* trace) {
    Reducer red{opts};
    TraceNode local;
    StraightLineDrawing d = red.run(inst, trace ? trace : &local);
    // top-level postconditions
    require(is_plane(d).count == 0, "InconsistentSides", "output drawing is not plane");
    require(check_devillers(d, inst.witness.emb), "InconsistentSides",
            "output drawing changes the embedding");
    red.verify_targets_met(inst, d);
    return d;
}

}  // namespace freeset
