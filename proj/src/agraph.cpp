#include "freeset/agraph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace freeset {

namespace {

[[noreturn]] void not_a_graph(int property, const std::string& what) {
    fail("NotAGraph", "property " + std::to_string(property) + ": " + what);
}

// Incident edges of an axis vertex in CCW order starting from straight
// down: right bundle bottom-to-top, then left bundle top-to-bottom.
std::vector<int> ccw_from_down_edges(const StraightLineDrawing& d, int v) {
    std::vector<int> hs = d.emb.rotation[v];
    auto dir = [&](int h) { return d.at(d.emb.head(h)) - d.at(v); };
    std::sort(hs.begin(), hs.end(), [&](int a, int b) {
        return ccw_from_down_less(dir(a), dir(b));
    });
    std::vector<int> out;
    for (int h : hs) out.push_back(d.emb.edge_of(h));
    return out;
}

}  // namespace

AGraph validate_a_graph(const StraightLineDrawing& d) {
    require(d.emb.n >= 3, "NotAGraph", "fewer than 3 vertices");
    {
        auto rep = is_plane(d);
        require(rep.count == 0, "NotPlaneWitness",
                "input drawing has " + std::to_string(rep.count) + " crossings");
    }
    require(check_devillers(d, d.emb), "MalformedEmbedding",
            "stored rotation system disagrees with the coordinates");

    AGraph a;
    a.witness = d;
    const auto& emb = a.witness.emb;
    a.side.resize(emb.n);
    for (int v = 0; v < emb.n; ++v) a.side[v] = axis_side(d.at(v));

    // Property 1: every edge meets the axis in exactly one point.
    a.witness_cross.resize(emb.m());
    for (int e = 0; e < emb.m(); ++e) {
        auto [u, v] = emb.edges[e];
        Axis su = a.side[u], sv = a.side[v];
        if (su == Axis::Y && sv == Axis::Y)
            not_a_graph(1, "edge " + std::to_string(e) + " lies on the axis");
        if (su != Axis::Y && su == sv)
            not_a_graph(1, "edge " + std::to_string(e) + " misses the axis");
        a.witness_cross[e] = axis_crossing_y(d.at(u), d.at(v));
    }

    // Property 2: faces are simple 3- or 4-cycles.
    FaceSet fs = faces(emb);
    require(emb.outer_face >= 0, "MalformedEmbedding", "no outer face designated");
    for (const auto& cyc : fs.cycles) {
        if (cyc.size() != 3 && cyc.size() != 4)
            not_a_graph(2, "face with " + std::to_string(cyc.size()) + " sides");
        std::set<int> distinct;
        for (int h : cyc) distinct.insert(emb.origin(h));
        if (distinct.size() != cyc.size()) not_a_graph(2, "face cycle repeats a vertex");
    }

    // Properties 3 and 4 per face; count triangles and quads.
    for (size_t f = 0; f < fs.cycles.size(); ++f) {
        const auto& cyc = fs.cycles[f];
        auto poly = face_polygon(d, cyc);
        if (cyc.size() == 3) {
            ++a.f3;
            int on = 0, left = 0, right = 0;
            for (int h : cyc) {
                Axis s = a.side[emb.origin(h)];
                on += s == Axis::Y;
                left += s == Axis::L;
                right += s == Axis::R;
            }
            if (on != 1 || left != 1 || right != 1)
                not_a_graph(4, "triangular face without one vertex per region");
        } else {
            ++a.f4;
            bool pos = false, neg = false;
            for (size_t i = 0; i < 4; ++i) {
                int o = orientation(poly[i], poly[(i + 1) % 4], poly[(i + 2) % 4]);
                if (o == 0) not_a_graph(3, "degenerate quadrilateral corner");
                (o > 0 ? pos : neg) = true;
            }
            if (!(pos && neg)) not_a_graph(3, "convex quadrilateral face");
        }
    }

    // Property 5 plus bundle extraction at axis vertices.
    for (int v = 0; v < emb.n; ++v) {
        if (a.side[v] != Axis::Y) continue;
        ++a.n0;
        std::vector<int> order = ccw_from_down_edges(d, v);
        AGraph::Bundle bundle;
        for (int e : order) {
            int other = emb.edges[e].first == v ? emb.edges[e].second : emb.edges[e].first;
            if (a.side[other] == Axis::R)
                bundle.right.push_back(e);
            else
                bundle.left.push_back(e);  // arrives top-to-bottom
        }
        std::reverse(bundle.left.begin(), bundle.left.end());  // a_1..a_k bottom-to-top
        if (bundle.left.empty() || bundle.right.empty())
            not_a_graph(5, "axis vertex with a one-sided star");
        auto other_end = [&](int e) {
            return emb.edges[e].first == v ? emb.edges[e].second : emb.edges[e].first;
        };
        auto face_left_of = [&](int u, int w) {
            int h = emb.half_edge(u, w);
            require(h >= 0, "MalformedEmbedding", "missing half-edge");
            return fs.face_of_half[h];
        };
        int below = face_left_of(v, other_end(bundle.left.front()));
        int above = face_left_of(v, other_end(bundle.right.back()));
        int tri_count = 0;
        std::set<int> incident;
        for (int h : emb.rotation[v]) incident.insert(fs.face_of_half[h]);
        for (int f : incident) tri_count += fs.cycles[f].size() == 3;
        if (tri_count != 2 || fs.cycles[below].size() != 3 || fs.cycles[above].size() != 3)
            not_a_graph(5, "axis vertex " + std::to_string(v) +
                               " not flanked by exactly two triangles");
        a.bundles[v] = std::move(bundle);
    }

    // Derived properties 6-8 and the counting identities.
    {
        std::vector<int> comp(emb.n);
        std::iota(comp.begin(), comp.end(), 0);
        std::function<int(int)> find = [&](int x) {
            return comp[x] == x ? x : comp[x] = find(comp[x]);
        };
        for (const auto& [u, v] : emb.edges) comp[find(u)] = find(v);
        for (int v = 1; v < emb.n; ++v)
            if (find(v) != find(0)) not_a_graph(6, "graph is disconnected");
    }
    for (int v = 0; v < emb.n; ++v) {
        if (emb.degree(v) < 2) not_a_graph(7, "vertex of degree < 2");
        if (emb.n >= 4 && a.side[v] == Axis::Y && emb.degree(v) < 3)
            not_a_graph(8, "axis vertex of degree < 3");
    }
    require(a.f3 == 2 * a.n0, "NotAGraph", "triangle count != 2 * axis vertex count");
    require(emb.n + a.f3 + a.f4 == emb.m() + 2, "NotAGraph", "Euler count mismatch");
    require(3 * a.f3 + 4 * a.f4 == 2 * emb.m(), "NotAGraph", "edge-face incidence mismatch");

    // Edge order by witness crossing; ties only inside axis vertex stars,
    // broken by CCW-from-down position there.
    std::vector<int> tie_rank(emb.m(), 0);
    std::vector<int> tie_vertex(emb.m(), -1);
    for (const auto& [v, bundle] : a.bundles) {
        int r = 0;
        for (int e : bundle.right) {
            tie_rank[e] = r++;
            tie_vertex[e] = v;
        }
        for (auto it = bundle.left.rbegin(); it != bundle.left.rend(); ++it) {
            tie_rank[*it] = r++;
            tie_vertex[*it] = v;
        }
    }
    a.edge_order.resize(emb.m());
    std::iota(a.edge_order.begin(), a.edge_order.end(), 0);
    std::sort(a.edge_order.begin(), a.edge_order.end(), [&](int e, int f) {
        if (a.witness_cross[e] != a.witness_cross[f])
            return a.witness_cross[e] < a.witness_cross[f];
        return tie_rank[e] < tie_rank[f];
    });
    for (size_t i = 1; i < a.edge_order.size(); ++i) {
        int e = a.edge_order[i - 1], f = a.edge_order[i];
        if (a.witness_cross[e] == a.witness_cross[f])
            require(tie_vertex[e] >= 0 && tie_vertex[e] == tie_vertex[f], "NotAGraph",
                    "equal crossings without a shared axis vertex");
    }
    a.rank_of_edge.assign(emb.m(), -1);
    for (size_t i = 0; i < a.edge_order.size(); ++i)
        a.rank_of_edge[a.edge_order[i]] = static_cast<int>(i);

    // Outer face classification.
    const auto& outer_cyc = fs.cycles[emb.outer_face];
    std::vector<int> outer_edge_ids;
    for (int h : outer_cyc) outer_edge_ids.push_back(emb.edge_of(h));
    std::sort(outer_edge_ids.begin(), outer_edge_ids.end(),
              [&](int e, int f) { return a.rank_of_edge[e] < a.rank_of_edge[f]; });
    a.outer_edges = outer_edge_ids;
    if (outer_cyc.size() == 3) {
        int gamma = -1;
        for (int h : outer_cyc)
            if (a.side[emb.origin(h)] == Axis::Y) gamma = emb.origin(h);
        require(gamma >= 0, "NotAGraph", "triangle outer face without an axis vertex");
        a.outer_axis_vertex = gamma;
        Q top = a.witness_cross[a.edge_order.back()];
        Q bottom = a.witness_cross[a.edge_order.front()];
        if (d.at(gamma).y == bottom)
            a.outer_case = OuterCase::TriangleBottom;
        else if (d.at(gamma).y == top)
            a.outer_case = OuterCase::TriangleTop;
        else
            not_a_graph(5, "outer triangle axis vertex is not extremal");
    } else {
        a.outer_case = OuterCase::Quad;
        for (int h : outer_cyc)
            require(a.side[emb.origin(h)] != Axis::Y, "NotAGraph",
                    "axis vertex on a quadrilateral outer face");
    }
    require(std::count(outer_edge_ids.begin(), outer_edge_ids.end(), a.edge_order.front()) == 1,
            "NotAGraph", "lowest crossing edge is not on the outer face");
    require(std::count(outer_edge_ids.begin(), outer_edge_ids.end(), a.edge_order.back()) == 1,
            "NotAGraph", "highest crossing edge is not on the outer face");
    return a;
}

PrecedenceRelation precedence_relation(const AGraph& a) {
    PrecedenceRelation rel;
    const auto& emb = a.witness.emb;
    for (int v = 0; v < emb.n; ++v) {
        if (a.side[v] == Axis::Y) continue;
        std::vector<int> inc;
        for (int h : emb.rotation[v]) inc.push_back(emb.edge_of(h));
        for (size_t i = 0; i < inc.size(); ++i) {
            for (size_t j = i + 1; j < inc.size(); ++j) {
                int e = inc[i], f = inc[j];
                int re = a.rank_of_edge[e], rf = a.rank_of_edge[f];
                require(re != rf, "NotAGraph", "two edges at one vertex with equal crossing");
                bool e_lower = re < rf;
                int lo, hi;
                if (a.side[v] == Axis::L) {
                    lo = e_lower ? e : f;
                    hi = e_lower ? f : e;
                } else {
                    lo = e_lower ? f : e;
                    hi = e_lower ? e : f;
                }
                rel.pairs.push_back({lo, hi, v, a.side[v]});
            }
        }
    }
    int m = emb.m();
    std::vector<std::vector<int>> adj(m);
    std::vector<int> indeg(m, 0);
    for (const auto& p : rel.pairs) {
        adj[p.lo_edge].push_back(p.hi_edge);
        ++indeg[p.hi_edge];
    }
    std::vector<int> queue;
    for (int e = 0; e < m; ++e)
        if (indeg[e] == 0) queue.push_back(e);
    size_t seen = 0;
    while (seen < queue.size()) {
        int e = queue[seen++];
        for (int f : adj[e])
            if (--indeg[f] == 0) queue.push_back(f);
    }
    require(seen == static_cast<size_t>(m), "CyclicPrecedence",
            "precedence relation contains a cycle");
    return rel;
}

ProportionalityCoefficients derive_coefficients_from_witness(const AGraph& a) {
    ProportionalityCoefficients out;
    auto slope_of_edge = [&](int e) {
        auto [u, v] = a.witness.emb.edges[e];
        return slope_of(a.witness.at(u), a.witness.at(v));
    };
    for (const auto& [v, bundle] : a.bundles) {
        VertexCoefficients vc;
        size_t l = bundle.right.size(), k = bundle.left.size();
        std::vector<Q> sr, sl;
        for (int e : bundle.right) sr.push_back(slope_of_edge(e));
        for (int e : bundle.left) sl.push_back(slope_of_edge(e));
        for (size_t i = 1; i + 1 < l; ++i) {
            Q den = sr.back() - sr.front();
            require(den != 0, "DegenerateBundle", "right bundle has zero slope range");
            vc.right_lambda.push_back((sr[i] - sr.front()) / den);
        }
        for (size_t i = 1; i + 1 < k; ++i) {
            Q den = sl.back() - sl.front();
            require(den != 0, "DegenerateBundle", "left bundle has zero slope range");
            vc.left_lambda.push_back((sl[i] - sl.front()) / den);
        }
        if (k >= 2 && l >= 2) {
            Q den = sr.back() - sr.front();
            require(den != 0, "DegenerateBundle", "right bundle has zero slope range");
            vc.mu = (sl.front() - sl.back()) / den;
            require(*vc.mu > 0, "DegenerateBundle", "non-positive slope range ratio");
        }
        out.per_vertex[v] = std::move(vc);
    }
    return out;
}

ProportionalityCoefficients default_coefficients(const AGraph& a) {
    ProportionalityCoefficients out;
    for (const auto& [v, bundle] : a.bundles) {
        VertexCoefficients vc;
        long l = static_cast<long>(bundle.right.size());
        long k = static_cast<long>(bundle.left.size());
        for (long i = 2; i <= l - 1; ++i) vc.right_lambda.push_back(Q(i - 1, l - 1));
        for (long i = 2; i <= k - 1; ++i) vc.left_lambda.push_back(Q(i - 1, k - 1));
        if (k >= 2 && l >= 2) vc.mu = 1;
        out.per_vertex[v] = std::move(vc);
    }
    return out;
}

ProportionalityCoefficients random_coefficients(const AGraph& a, Rng& rng) {
    ProportionalityCoefficients out;
    auto sorted_uniforms = [&](size_t count) {
        std::set<Q> vals;
        while (vals.size() < count) vals.insert(rng.unit());
        return std::vector<Q>(vals.begin(), vals.end());
    };
    for (const auto& [v, bundle] : a.bundles) {
        VertexCoefficients vc;
        size_t l = bundle.right.size(), k = bundle.left.size();
        if (l >= 3) vc.right_lambda = sorted_uniforms(l - 2);
        if (k >= 3) vc.left_lambda = sorted_uniforms(k - 2);
        if (k >= 2 && l >= 2) {
            // roughly log-uniform over [1/8, 8]
            long exp2 = static_cast<long>(rng.below(6)) - 3;
            Q mu = 1 + rng.unit();
            for (long i = 0; i < exp2; ++i) mu *= 2;
            for (long i = 0; i > exp2; --i) mu /= 2;
            vc.mu = mu;
        }
        out.per_vertex[v] = std::move(vc);
    }
    return out;
}

void validate_targets(const AGraph& a, const std::vector<Q>& targets) {
    require(static_cast<int>(targets.size()) == a.m(), "TARGETS_NOT_INCREASING",
            "need one target per edge");
    const auto& emb = a.witness.emb;
    auto shared_axis_vertex = [&](int e, int f) {
        auto [a1, b1] = emb.edges[e];
        auto [a2, b2] = emb.edges[f];
        for (int v : {a1, b1})
            for (int w : {a2, b2})
                if (v == w && a.side[v] == Axis::Y) return true;
        return false;
    };
    for (int i = 0; i + 1 < a.m(); ++i) {
        int e = a.edge_order[i], f = a.edge_order[i + 1];
        const Q& y0 = targets[i];
        const Q& y1 = targets[i + 1];
        require(y0 <= y1, "TARGETS_NOT_INCREASING", "targets must be non-decreasing");
        require((y0 == y1) == shared_axis_vertex(e, f), "TARGET_TIE_MISMATCH",
                "targets must coincide exactly for edges sharing an axis vertex");
    }
}

std::vector<BoundaryRow> boundary_equations(const AGraph& a, const BoundarySpec& spec,
                                            const std::vector<Q>& targets) {
    const auto& emb = a.witness.emb;
    FaceSet fs = faces(emb);
    const auto& outer_cyc = fs.cycles[emb.outer_face];
    require(spec.shape.size() == outer_cyc.size(), "IncompatibleOuterShape",
            "shape corner count differs from the outer face");
    require(polygon_simple(spec.shape), "IncompatibleOuterShape", "outer shape is not simple");

    for (size_t i = 0; i < outer_cyc.size(); ++i) {
        int v = emb.origin(outer_cyc[i]);
        Axis want = a.side[v];
        Axis got = axis_side(spec.shape[i]);
        require(want == got, "IncompatibleOuterShape",
                "corner " + std::to_string(i) + " lies in the wrong region");
        if (want == Axis::Y) {
            Q target = targets[a.rank_of_edge[a.bundles.at(v).right.front()]];
            require(spec.shape[i].y == target, "IncompatibleOuterShape",
                    "axis corner placed off its target");
        }
    }
    std::vector<BoundaryRow> rows;
    for (size_t i = 0; i < outer_cyc.size(); ++i) {
        int e = emb.edge_of(outer_cyc[i]);
        const QPoint& p = spec.shape[i];
        const QPoint& q = spec.shape[(i + 1) % spec.shape.size()];
        require(p.x != q.x, "IncompatibleOuterShape", "vertical outer shape edge");
        if (sign(p.x) * sign(q.x) < 0) {
            require(axis_crossing_y(p, q) == targets[a.rank_of_edge[e]],
                    "IncompatibleOuterShape", "outer shape edge crosses the axis off its target");
        }
        rows.push_back({e, slope_of(p, q)});
    }
    if (a.outer_case == OuterCase::Quad) {
        require(rows.size() == 4, "IncompatibleOuterShape", "expected a quadrilateral shape");
        return rows;
    }
    require(rows.size() == 3, "IncompatibleOuterShape", "expected a triangular shape");
    int gamma = a.outer_axis_vertex;
    const auto& bundle = a.bundles.at(gamma);
    std::set<int> boundary_ids;
    for (const auto& r : rows) boundary_ids.insert(r.edge);
    int extra = -1;
    bool extra_right = true;
    for (size_t i = 1; i < bundle.right.size() && extra < 0; ++i)
        if (!boundary_ids.count(bundle.right[i])) extra = bundle.right[i];
    if (extra < 0) {
        extra_right = false;
        for (size_t i = 1; i < bundle.left.size() && extra < 0; ++i)
            if (!boundary_ids.count(bundle.left[i])) extra = bundle.left[i];
    }
    require(extra >= 0, "IncompatibleOuterShape",
            "no interior edge available at the outer axis vertex");
    Q lo = rows[0].h, hi = rows[0].h;
    for (const auto& r : rows) {
        lo = q_min(lo, r.h);
        hi = q_max(hi, r.h);
    }
    bool bottom = a.outer_case == OuterCase::TriangleBottom;
    // (bottom, R) and (top, L) force a slope above every outer slope; the
    // mirrored cases force one below.
    Q hb = (bottom == extra_right) ? Q(hi + 1) : Q(lo - 1);
    rows.push_back({extra, hb});
    return rows;
}

SlopeSystem assemble_system(const AGraph& a, const ProportionalityCoefficients& coeffs,
                            const std::vector<Q>& targets,
                            const std::vector<BoundaryRow>& boundary) {
    const auto& emb = a.witness.emb;
    const int m = emb.m();
    require(static_cast<int>(targets.size()) == m, "CountMismatch", "one target per edge required");
    SlopeSystem sys;
    sys.m = m;
    auto col = [&](int e) { return a.rank_of_edge[e]; };
    auto y_of = [&](int e) -> const Q& { return targets[a.rank_of_edge[e]]; };

    for (int v = 0; v < emb.n; ++v) {
        if (a.side[v] == Axis::Y) continue;
        std::vector<int> inc;
        for (int h : emb.rotation[v]) inc.push_back(emb.edge_of(h));
        std::sort(inc.begin(), inc.end(), [&](int e, int f) {
            return a.side[v] == Axis::L ? col(e) < col(f) : col(e) > col(f);
        });
        int ei = inc[0], ej = inc[1];
        for (size_t t = 2; t < inc.size(); ++t) {
            int ek = inc[t];
            sys.add_row(RowTag{RowTag::Concurrency, v, ek},
                        {{col(ei), y_of(ej) - y_of(ek)},
                         {col(ej), y_of(ek) - y_of(ei)},
                         {col(ek), y_of(ei) - y_of(ej)}},
                        Q(0));
        }
    }
    for (const auto& [v, bundle] : a.bundles) {
        const auto& vc = coeffs.per_vertex.at(v);
        size_t l = bundle.right.size(), k = bundle.left.size();
        require(vc.right_lambda.size() == (l >= 2 ? l - 2 : 0) &&
                    vc.left_lambda.size() == (k >= 2 ? k - 2 : 0) &&
                    vc.mu.has_value() == (k >= 2 && l >= 2),
                "CountMismatch", "coefficient shape mismatch at an axis vertex");
        for (size_t i = 1; i + 1 < l; ++i) {
            const Q& lam = vc.right_lambda[i - 1];
            sys.add_row(RowTag{RowTag::PropLambda, v, bundle.right[i]},
                        {{col(bundle.right[i]), Q(1)},
                         {col(bundle.right.front()), lam - 1},
                         {col(bundle.right.back()), -lam}},
                        Q(0));
        }
        for (size_t i = 1; i + 1 < k; ++i) {
            const Q& lam = vc.left_lambda[i - 1];
            sys.add_row(RowTag{RowTag::PropLambda, v, bundle.left[i]},
                        {{col(bundle.left[i]), Q(1)},
                         {col(bundle.left.front()), lam - 1},
                         {col(bundle.left.back()), -lam}},
                        Q(0));
        }
        if (k >= 2 && l >= 2) {
            const Q& mu = *vc.mu;
            sys.add_row(RowTag{RowTag::PropMu, v, -1},
                        {{col(bundle.left.front()), Q(1)},
                         {col(bundle.left.back()), Q(-1)},
                         {col(bundle.right.back()), -mu},
                         {col(bundle.right.front()), mu}},
                        Q(0));
        }
    }
    require(static_cast<int>(sys.rows.size()) == m - 4, "CountMismatch",
            "expected m - 4 structural rows, got " + std::to_string(sys.rows.size()));
    require(boundary.size() == 4, "CountMismatch", "expected exactly 4 boundary rows");
    for (const auto& r : boundary)
        sys.add_row(RowTag{RowTag::Boundary, -1, r.edge}, {{col(r.edge), Q(1)}}, r.h);
    return sys;
}

Q default_epsilon(const PrecedenceRelation& rel, const std::vector<Q>& targets,
                  const std::vector<int>& rank_of_edge) {
    Q eps = -1;
    for (const auto& p : rel.pairs) {
        Q gap = q_abs(targets[rank_of_edge[p.hi_edge]] - targets[rank_of_edge[p.lo_edge]]);
        if (eps < 0 || gap < eps) eps = gap;
    }
    return eps < 0 ? Q(0) : eps;
}

OrderingReport check_ordering(const std::vector<Q>& slopes, const PrecedenceRelation& rel,
                              const Q& epsilon) {
    OrderingReport rep;
    rep.level = OrderingLevel::EpsilonStrong;
    bool first = true;
    for (const auto& p : rel.pairs) {
        Q gap = slopes[p.hi_edge] - slopes[p.lo_edge];
        if (first || gap < rep.min_gap) {
            rep.min_gap = gap;
            rep.worst = p;
            first = false;
        }
    }
    if (first) return rep;  // no pairs at all
    if (rep.min_gap <= 0)
        rep.level = OrderingLevel::Violated;
    else if (rep.min_gap < epsilon)
        rep.level = OrderingLevel::Ordered;
    return rep;
}

}  // namespace freeset
