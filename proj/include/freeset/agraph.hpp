#pragma once

#include "freeset/drawing.hpp"
#include "freeset/solver.hpp"

#include <map>
#include <optional>
#include <vector>

namespace freeset {

enum class OuterCase { TriangleBottom, TriangleTop, Quad };

/// Validated drawing in which every edge meets the axis exactly once, all
/// faces are triangles (one vertex per region) or non-convex quadrilaterals,
/// and every axis vertex is flanked by triangles above and below.
struct AGraph {
    StraightLineDrawing witness;
    std::vector<Axis> side;           // per vertex
    std::vector<int> edge_order;      // edge ids ordered by axis crossing
    std::vector<int> rank_of_edge;    // inverse of edge_order
    std::vector<Q> witness_cross;     // per edge, witness crossing y

    struct Bundle {
        std::vector<int> left;   // a_1..a_k, bottom to top (slopes decreasing)
        std::vector<int> right;  // b_1..b_l, bottom to top (slopes increasing)
    };
    std::map<int, Bundle> bundles;  // per axis vertex

    OuterCase outer_case = OuterCase::Quad;
    std::vector<int> outer_edges;    // boundary edge ids sorted by crossing
    int outer_axis_vertex = -1;      // gamma, triangle cases only
    int n0 = 0, f3 = 0, f4 = 0;

    int m() const { return witness.emb.m(); }
    int n() const { return witness.emb.n; }
};

/// Checks Def.-style properties 1-5 plus the derived ones and classifies
/// the outer face. Throws NotAGraph(property, witness element) on failure.
AGraph validate_a_graph(const StraightLineDrawing& d);

/// e_i < e_j with the shared vertex and its side as witness.
struct PrecedencePair {
    int lo_edge, hi_edge;  // slope(lo) < slope(hi) required
    int vertex;
    Axis side;
};

struct PrecedenceRelation {
    std::vector<PrecedencePair> pairs;
};

/// Shared-endpoint slope order relation; verifies acyclicity.
PrecedenceRelation precedence_relation(const AGraph& a);

/// Per-axis-vertex proportionality data.
struct VertexCoefficients {
    std::vector<Q> left_lambda;   // lambda_2..lambda_{k-1}
    std::vector<Q> right_lambda;  // lambda_2..lambda_{l-1}
    std::optional<Q> mu;          // present iff k >= 2 and l >= 2
};

struct ProportionalityCoefficients {
    std::map<int, VertexCoefficients> per_vertex;
};

ProportionalityCoefficients derive_coefficients_from_witness(const AGraph& a);
ProportionalityCoefficients default_coefficients(const AGraph& a);
ProportionalityCoefficients random_coefficients(const AGraph& a, Rng& rng);

/// Prescribed outer shape: corner coordinates aligned with the outer face
/// cycle of the graph (faces(emb).cycles[outer_face] order).
struct BoundarySpec {
    std::vector<QPoint> shape;
};

struct BoundaryRow {
    int edge;
    Q h;
};

/// The four boundary equations s_i = h_i. For triangle outer faces the
/// fourth row pins an interior edge at gamma one unit beyond the extreme
/// outer slope on the side dictated by the case.
std::vector<BoundaryRow> boundary_equations(const AGraph& a, const BoundarySpec& spec);

/// Builds the m x m system: d_v - 2 concurrency rows per off-axis vertex
/// (anchored at the first two edges in rotation order from straight down),
/// d_v - 3 proportionality rows per axis vertex, 4 boundary rows.
SlopeSystem assemble_system(const AGraph& a, const ProportionalityCoefficients& coeffs,
                            const std::vector<Q>& targets, const std::vector<BoundaryRow>& boundary);

enum class OrderingLevel { Violated, Ordered, EpsilonStrong };

struct OrderingReport {
    OrderingLevel level = OrderingLevel::Violated;
    Q min_gap = 0;
    PrecedencePair worst{-1, -1, -1, Axis::Y};
};

/// min over pairs of |y_i - y_j| (the weak-to-strong threshold).
Q default_epsilon(const PrecedenceRelation& rel, const std::vector<Q>& targets,
                  const std::vector<int>& rank_of_edge);

OrderingReport check_ordering(const std::vector<Q>& slopes, const PrecedenceRelation& rel,
                              const Q& epsilon);

/// Places axis vertices at their targets and every other vertex at the
/// intersection of its two anchor edge lines; verifies the remaining
/// incident lines pass through it within ctol and that sides are kept.
StraightLineDrawing reconstruct_drawing(const AGraph& a, const std::vector<Q>& slopes,
                                        const std::vector<Q>& targets, const SolveOptions& opts);

struct MorphStep {
    double t = 0;
    int det_sign = 0;
    Q min_margin = 0;
    Q residual = 0;
};

struct MorphTrace {
    std::vector<MorphStep> steps;
    Q epsilon_star = 0;
};

struct ContinuationResult {
    std::vector<Q> slopes;
    MorphTrace trace;
};

/// Homotopy from the witness data (y^0, h^0) to the target data (y^1, h^1)
/// with fixed witness coefficients; adaptive bisection accepts only
/// epsilon*-strong steps. Inputs must be normalized (shapes in the strip).
ContinuationResult retarget_continuation(const AGraph& a, const std::vector<Q>& targets,
                                         const BoundarySpec& spec, const SolveOptions& opts);

struct DrawResult {
    StraightLineDrawing drawing;
    std::vector<Q> slopes;
    std::optional<MorphTrace> trace;
};

/// Full pipeline of the prescribed-crossing drawing theorem: normalize,
/// reflect when needed, solve (direct / continuation / default / random
/// restarts), reconstruct, verify, denormalize.
DrawResult draw_a_graph(const AGraph& a, const std::vector<Q>& targets, const BoundarySpec& spec,
                        const SolveOptions& opts);

/// Compatible outer shape for given targets, built from slope templates;
/// used by the CLI when no shape is prescribed.
BoundarySpec default_boundary_shape(const AGraph& a, const std::vector<Q>& targets);

/// Validates targets against the tie structure (equal iff consecutive edges
/// share an axis vertex).
void validate_targets(const AGraph& a, const std::vector<Q>& targets);

}  // namespace freeset
