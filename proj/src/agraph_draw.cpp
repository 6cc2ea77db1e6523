#include "freeset/agraph.hpp"

#include <algorithm>
#include <map>

namespace freeset {

namespace {

Q edge_slope(const StraightLineDrawing& d, int e) {
    auto [u, v] = d.emb.edges[e];
    return slope_of(d.at(u), d.at(v));
}

struct Prepared {
    AGraph g;                              // possibly reflected working copy
    std::vector<Q> targets;                // y^1 by rank of g
    BoundarySpec shape;                    // normalized, aligned with g's outer cycle
    Q sigma = 1;                           // shape x-scale factor
    std::vector<BoundaryRow> boundary1;    // rows at t = 1
    std::vector<Q> y0;                     // witness crossings by rank of g
    std::vector<Q> h0;                     // witness slopes of the boundary edges, normalized
    PrecedenceRelation rel;
    ProportionalityCoefficients witness_coeffs;
    Q epsilon_star = 0;
};

std::vector<QPoint> aligned_outer_shape(const CombinatorialEmbedding& emb,
                                        const BoundarySpec& spec,
                                        std::map<int, QPoint>* corner_of_vertex = nullptr) {
    FaceSet fs = faces(emb);
    const auto& cyc = fs.cycles[emb.outer_face];
    require(spec.shape.size() == cyc.size(), "IncompatibleOuterShape",
            "outer shape corner count mismatch");
    if (corner_of_vertex) {
        for (size_t i = 0; i < cyc.size(); ++i)
            (*corner_of_vertex)[emb.origin(cyc[i])] = spec.shape[i];
    }
    return spec.shape;
}

Prepared prepare(const AGraph& a, const std::vector<Q>& targets_in, const BoundarySpec& spec) {
    validate_targets(a, targets_in);
    const auto& emb = a.witness.emb;
    std::map<int, QPoint> corner_of_vertex;
    aligned_outer_shape(emb, spec, &corner_of_vertex);

    bool all_match = true, all_mirror = true;
    for (const auto& [v, corner] : corner_of_vertex) {
        Axis want = a.side[v];
        Axis got = axis_side(corner);
        if (want != got) all_match = false;
        if (want == Axis::Y ? got != Axis::Y
                            : got != (want == Axis::L ? Axis::R : Axis::L))
            all_mirror = false;
    }
    require(all_match || all_mirror, "IncompatibleOuterShape",
            "outer shape sides match neither the drawing nor its mirror image");

    Prepared prep;
    std::vector<Q> target_by_edge(emb.m());
    for (int e = 0; e < emb.m(); ++e) target_by_edge[e] = targets_in[a.rank_of_edge[e]];
    if (all_match) {
        prep.g = a;
    } else {
        prep.g = validate_a_graph(reflect(a.witness));
    }
    prep.targets.resize(emb.m());
    for (int e = 0; e < emb.m(); ++e) prep.targets[prep.g.rank_of_edge[e]] = target_by_edge[e];
    validate_targets(prep.g, prep.targets);

    // re-align shape corners with the working embedding's outer cycle
    FaceSet fs = faces(prep.g.witness.emb);
    const auto& cyc = fs.cycles[prep.g.witness.emb.outer_face];
    prep.shape.shape.clear();
    for (int h : cyc) prep.shape.shape.push_back(corner_of_vertex.at(prep.g.witness.emb.origin(h)));

    // normalize the prescribed shape into the strip [-1,1] x R
    Q sigma = 0;
    for (const auto& p : prep.shape.shape) sigma = q_max(sigma, q_abs(p.x));
    require(sigma > 0, "IncompatibleOuterShape", "degenerate outer shape");
    prep.sigma = sigma;
    for (auto& p : prep.shape.shape) p.x /= sigma;

    prep.boundary1 = boundary_equations(prep.g, prep.shape, prep.targets);

    // witness data, normalized into the strip as well
    Q sigma0 = 0;
    for (const auto& p : prep.g.witness.coords) sigma0 = q_max(sigma0, q_abs(p.x));
    require(sigma0 > 0, "NotAGraph", "witness without off-axis vertices");
    prep.y0.resize(emb.m());
    for (int e = 0; e < emb.m(); ++e)
        prep.y0[prep.g.rank_of_edge[e]] = prep.g.witness_cross[e];
    for (const auto& row : prep.boundary1)
        prep.h0.push_back(sigma0 * edge_slope(prep.g.witness, row.edge));

    prep.rel = precedence_relation(prep.g);
    prep.witness_coeffs = derive_coefficients_from_witness(prep.g);

    Q eps = -1;
    for (const auto& p : prep.rel.pairs) {
        int ri = prep.g.rank_of_edge[p.lo_edge], rj = prep.g.rank_of_edge[p.hi_edge];
        Q g0 = q_abs(prep.y0[rj] - prep.y0[ri]);
        Q g1 = q_abs(prep.targets[rj] - prep.targets[ri]);
        Q g = q_min(g0, g1);
        if (eps < 0 || g < eps) eps = g;
    }
    prep.epsilon_star = eps < 0 ? Q(0) : eps;
    return prep;
}

SlopeSystem system_at(const Prepared& prep, const Q& t) {
    std::vector<Q> yt(prep.targets.size());
    for (size_t i = 0; i < yt.size(); ++i)
        yt[i] = (1 - t) * prep.y0[i] + t * prep.targets[i];
    std::vector<BoundaryRow> rows;
    for (size_t i = 0; i < prep.boundary1.size(); ++i)
        rows.push_back({prep.boundary1[i].edge, (1 - t) * prep.h0[i] + t * prep.boundary1[i].h});
    return assemble_system(prep.g, prep.witness_coeffs, yt, rows);
}

std::vector<Q> by_edge(const AGraph& g, const std::vector<Q>& by_rank) {
    std::vector<Q> out(by_rank.size());
    for (size_t e = 0; e < out.size(); ++e) out[e] = by_rank[g.rank_of_edge[e]];
    return out;
}

Q ordering_slack(const SolveOptions& opts) {
    return opts.arithmetic == Arithmetic::Rational ? Q(0) : Q(1, 1000000000);
}

ContinuationResult run_continuation(const Prepared& prep, const SolveOptions& opts) {
    ContinuationResult result;
    result.trace.epsilon_star = prep.epsilon_star;
    Q slack = ordering_slack(opts);
    auto attempt = [&](const Q& t, MorphStep* step) -> std::optional<std::vector<Q>> {
        SlopeSystem sys = system_at(prep, t);
        SolveOutcome sol;
        try {
            sol = solve_system(sys, opts);
        } catch (const Error&) {
            return std::nullopt;
        }
        std::vector<Q> slopes = by_edge(prep.g, sol.slopes);
        OrderingReport rep = check_ordering(slopes, prep.rel, prep.epsilon_star);
        if (rep.min_gap < prep.epsilon_star - slack && !prep.rel.pairs.empty())
            return std::nullopt;
        if (step) {
            step->t = t.get_d();
            step->det_sign = sol.det_sign;
            step->min_margin = rep.min_gap;
            step->residual = sol.residual;
        }
        return slopes;
    };

    MorphStep step0;
    auto s0 = attempt(Q(0), &step0);
    require(s0.has_value(), "ContinuationStalled", "witness system failed at t = 0");
    result.trace.steps.push_back(step0);

    Q done = 0;
    Q goal = 1;
    std::vector<Q> current = *s0;
    const Q floor = Q(1, mpz_class(1) << 40);
    while (done < 1) {
        MorphStep step;
        auto s = attempt(goal, &step);
        if (s.has_value()) {
            result.trace.steps.push_back(step);
            current = *s;
            done = goal;
            goal = 1;
        } else {
            goal = (done + goal) / 2;
            require(goal - done >= floor, "ContinuationStalled",
                    "step size underflow in homotopy continuation");
        }
    }
    result.slopes = current;
    return result;
}

StraightLineDrawing reconstruct_prepared(const Prepared& prep, const std::vector<Q>& slopes_by_edge,
                                         const SolveOptions& opts) {
    return reconstruct_drawing(prep.g, slopes_by_edge, prep.targets, opts);
}

void verify_drawing(const Prepared& prep, const StraightLineDrawing& d,
                    const SolveOptions& opts) {
    const auto& emb = prep.g.witness.emb;
    auto rep = is_plane(d);
    require(rep.count == 0, "InconsistentConcurrency",
            "reconstructed drawing has crossings");
    require(check_devillers(d, emb), "InconsistentConcurrency",
            "reconstructed drawing changes the rotation system");
    bool exact = opts.arithmetic == Arithmetic::Rational;
    for (int e = 0; e < emb.m(); ++e) {
        auto [u, v] = emb.edges[e];
        Q c = axis_crossing_y(d.at(u), d.at(v));
        const Q& want = prep.targets[prep.g.rank_of_edge[e]];
        if (exact) {
            require(c == want, "InconsistentConcurrency", "crossing off target in rational mode");
        } else {
            Q tol = Q(1, 1000000) * q_max(Q(1), q_abs(want));
            require(q_abs(c - want) <= tol, "InconsistentConcurrency",
                    "crossing drifted beyond 1e-6 relative");
        }
    }
    for (int v = 0; v < emb.n; ++v)
        require(axis_side(d.at(v)) == prep.g.side[v], "InconsistentConcurrency",
                "vertex changed sides");
}

}  // namespace

StraightLineDrawing reconstruct_drawing(const AGraph& a, const std::vector<Q>& slopes,
                                        const std::vector<Q>& targets, const SolveOptions& opts) {
    require(slopes.size() == static_cast<size_t>(a.m()), "CountMismatch",
            "one slope per edge required");
    PrecedenceRelation rel = precedence_relation(a);
    OrderingReport rep = check_ordering(slopes, rel, Q(0));
    require(rep.level != OrderingLevel::Violated, "OrderingViolated",
            "slopes violate the ordering constraints");
    const auto& emb = a.witness.emb;
    Q scale = 1;
    for (const Q& y : targets) scale = q_max(scale, q_abs(y));
    Q ctol = opts.ctol * scale;
    bool exact = opts.arithmetic == Arithmetic::Rational;

    std::vector<QPoint> coords(emb.n);
    auto y_of = [&](int e) -> const Q& { return targets[a.rank_of_edge[e]]; };
    for (int v = 0; v < emb.n; ++v) {
        if (a.side[v] == Axis::Y) {
            coords[v] = {Q(0), y_of(a.bundles.at(v).right.front())};
            continue;
        }
        std::vector<int> inc;
        for (int h : emb.rotation[v]) inc.push_back(emb.edge_of(h));
        std::sort(inc.begin(), inc.end(), [&](int e, int f) {
            return a.side[v] == Axis::L ? a.rank_of_edge[e] < a.rank_of_edge[f]
                                        : a.rank_of_edge[e] > a.rank_of_edge[f];
        });
        int ei = inc[0], ej = inc[1];
        Q den = slopes[ei] - slopes[ej];
        require(den != 0, "InconsistentConcurrency", "anchor lines are parallel");
        Q x = (y_of(ej) - y_of(ei)) / den;
        Q y = slopes[ei] * x + y_of(ei);
        for (size_t t = 2; t < inc.size(); ++t) {
            int ek = inc[t];
            Q res = q_abs(slopes[ek] * x + y_of(ek) - y);
            if (exact)
                require(res == 0, "InconsistentConcurrency", "incident line misses the vertex");
            else
                require(res <= ctol, "InconsistentConcurrency",
                        "incident line misses the vertex beyond ctol");
        }
        require(axis_side(QPoint{x, y}) == a.side[v], "InconsistentConcurrency",
                "reconstructed vertex changed sides");
        coords[v] = {x, y};
    }
    StraightLineDrawing out;
    out.emb = emb;
    out.coords = std::move(coords);
    return out;
}

ContinuationResult retarget_continuation(const AGraph& a, const std::vector<Q>& targets,
                                         const BoundarySpec& spec, const SolveOptions& opts) {
    Prepared prep = prepare(a, targets, spec);
    ContinuationResult res = run_continuation(prep, opts);
    // report slopes in caller coordinates
    for (auto& s : res.slopes) s /= prep.sigma;
    return res;
}

DrawResult draw_a_graph(const AGraph& a, const std::vector<Q>& targets, const BoundarySpec& spec,
                        const SolveOptions& opts) {
    Prepared prep = prepare(a, targets, spec);
    const auto& emb = prep.g.witness.emb;

    if (prep.g.m() <= 4) {
        // a 3- or 4-cycle is drawn as the prescribed shape itself
        std::map<int, QPoint> corner_of_vertex;
        FaceSet fs = faces(emb);
        const auto& cyc = fs.cycles[emb.outer_face];
        StraightLineDrawing d;
        d.emb = emb;
        d.coords.resize(emb.n);
        for (size_t i = 0; i < cyc.size(); ++i) {
            QPoint p = prep.shape.shape[i];
            p.x *= prep.sigma;
            d.coords[emb.origin(cyc[i])] = p;
        }
        require(is_plane(d).count == 0, "IncompatibleOuterShape",
                "prescribed shape is self-crossing");
        DrawResult out;
        out.drawing = d;
        out.slopes.resize(emb.m());
        for (int e = 0; e < emb.m(); ++e) out.slopes[e] = edge_slope(d, e);
        return out;
    }

    Q eps_default = default_epsilon(prep.rel, prep.targets, prep.g.rank_of_edge);
    Q slack = ordering_slack(opts);
    std::string last_error = "no attempt";

    auto finish = [&](std::vector<Q> slopes, std::optional<MorphTrace> trace) -> DrawResult {
        OrderingReport rep = check_ordering(slopes, prep.rel, eps_default);
        require(rep.level != OrderingLevel::Violated, "OrderingViolated", "ordering violated");
        require(rep.min_gap >= eps_default - slack || prep.rel.pairs.empty(),
                "OrderingViolated", "ordered solution misses the epsilon-strong bound");
        StraightLineDrawing d = reconstruct_prepared(prep, slopes, opts);
        verify_drawing(prep, d, opts);
        for (auto& p : d.coords) p.x *= prep.sigma;
        DrawResult out;
        out.drawing = std::move(d);
        out.slopes = std::move(slopes);
        for (auto& s : out.slopes) s /= prep.sigma;
        out.trace = std::move(trace);
        return out;
    };

    auto direct = [&](const ProportionalityCoefficients& coeffs) {
        SlopeSystem sys = assemble_system(prep.g, coeffs, prep.targets, prep.boundary1);
        SolveOutcome sol = solve_system(sys, opts);
        return by_edge(prep.g, sol.slopes);
    };

    // 1: direct solve with witness coefficients
    try {
        return finish(direct(prep.witness_coeffs), std::nullopt);
    } catch (const Error& e) {
        last_error = e.what();
    }
    // 2: homotopy continuation from the witness data
    try {
        ContinuationResult cont = run_continuation(prep, opts);
        return finish(std::move(cont.slopes), std::move(cont.trace));
    } catch (const Error& e) {
        last_error = e.what();
    }
    // 3: default coefficients
    try {
        return finish(direct(default_coefficients(prep.g)), std::nullopt);
    } catch (const Error& e) {
        last_error = e.what();
    }
    // 4: random restarts
    Rng rng(0x5eedULL);
    for (int attempt = 0; attempt < 32; ++attempt) {
        try {
            return finish(direct(random_coefficients(prep.g, rng)), std::nullopt);
        } catch (const Error& e) {
            last_error = e.what();
        }
    }
    fail("SolverInitializationFailed",
         "all solve strategies failed; last error: " + last_error);
}

BoundarySpec default_boundary_shape(const AGraph& a, const std::vector<Q>& targets) {
    validate_targets(a, targets);
    const auto& emb = a.witness.emb;
    FaceSet fs = faces(emb);
    const auto& cyc = fs.cycles[emb.outer_face];
    BoundarySpec spec;

    if (a.outer_case == OuterCase::Quad) {
        // shared corner of the extreme edges decides the mirror orientation
        int e_first = a.edge_order.front(), e_last = a.edge_order.back();
        auto [u1, v1] = emb.edges[e_first];
        auto [u2, v2] = emb.edges[e_last];
        int shared = -1;
        for (int p : {u1, v1})
            for (int q : {u2, v2})
                if (p == q) shared = p;
        require(shared >= 0, "NotAGraph", "extreme outer edges share no corner");
        Q mirror = a.side[shared] == Axis::L ? Q(1) : Q(-1);
        std::map<int, Q> slope_template;
        std::vector<int> sorted_outer = a.outer_edges;
        slope_template[sorted_outer[0]] = mirror * Q(-1);
        slope_template[sorted_outer[1]] = mirror * Q(-2);
        slope_template[sorted_outer[2]] = mirror * Q(2);
        slope_template[sorted_outer[3]] = mirror * Q(1);
        for (size_t i = 0; i < cyc.size(); ++i) {
            int e_prev = emb.edge_of(cyc[(i + cyc.size() - 1) % cyc.size()]);
            int e_next = emb.edge_of(cyc[i]);
            Q s1 = slope_template.at(e_prev), s2 = slope_template.at(e_next);
            Q y1 = targets[a.rank_of_edge[e_prev]], y2 = targets[a.rank_of_edge[e_next]];
            Q x = (y2 - y1) / (s1 - s2);
            spec.shape.push_back({x, s1 * x + y1});
        }
    } else {
        bool bottom = a.outer_case == OuterCase::TriangleBottom;
        Q y_vertex = bottom ? targets.front() : targets.back();
        Q y_far = bottom ? targets.back() : targets.front();
        for (int h : cyc) {
            int v = emb.origin(h);
            if (a.side[v] == Axis::Y)
                spec.shape.push_back({Q(0), y_vertex});
            else if (a.side[v] == Axis::L)
                spec.shape.push_back({Q(-1), bottom ? Q(y_far + 1) : Q(y_far - 1)});
            else
                spec.shape.push_back({Q(1), bottom ? Q(y_far - 1) : Q(y_far + 1)});
        }
    }
    boundary_equations(a, spec, targets);  // compatibility check
    return spec;
}

}  // namespace freeset
