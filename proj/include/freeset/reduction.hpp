#pragma once

#include "freeset/agraph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace freeset {

enum class CurveSide { Minus, On, Plus };  // Minus <-> L, Plus <-> R

enum class EdgeClass {
    Crossing,  // endpoints strictly straddle the curve
    Marked,    // touches the curve at exactly one endpoint
    OnCurve,   // both endpoints on the curve (edge lies on it)
    Unmarked   // disjoint from the curve
};

/// Triangulation-with-curve instance of the main reduction. The witness
/// drawing realizes the item order of `seq` on the y-axis (with its own
/// coordinates); `seq.targets` carry the requested positions.
struct ReductionInstance {
    StraightLineDrawing witness;
    CrossingSequence seq;
    std::vector<QPoint> delta;  // outer triangle corners, aligned with the outer cycle

    std::vector<CurveSide> side;        // derived per vertex
    std::vector<EdgeClass> edge_class;  // derived per edge
    std::vector<char> face_crossing;    // derived per canonical face

    int noncrossing_edges() const;
};

/// Validates and derives classifications. `strict_gaps` enforces
/// epsilon < min gap / 2; recursive children use the relaxed form.
ReductionInstance make_instance(StraightLineDrawing witness, CrossingSequence seq,
                                std::vector<QPoint> delta, bool strict_gaps);

std::vector<EdgeClass> classify_edges(const CombinatorialEmbedding& emb,
                                      const std::vector<CurveSide>& side);

struct TraceNode {
    enum Kind { Small, Split, SplitTutte, Contract, Flip, OnCurve, Base } kind = Small;
    std::string detail;
    std::vector<TraceNode> children;
};

struct StepCounts {
    int small = 0, split = 0, split_tutte = 0, contract = 0, flip = 0, oncurve = 0, base = 0;
};

StepCounts count_steps(const TraceNode& node);
std::string trace_to_json(const TraceNode& node);

/// Smallest-id unmarked edge on no crossing face and no separating triangle.
std::optional<int> find_contractible_edge(const ReductionInstance& inst);

struct FlipMatch {
    int xy = -1;                      // the flippable edge
    int x = -1, y = -1, z = -1;       // non-crossing face xyz
    int a = -1, b = -1, c = -1;       // apexes of the crossing faces
    bool case_b = false;              // order variant 3b (xza is the outer face)
};

std::optional<FlipMatch> find_flippable_edge(const ReductionInstance& inst);

std::optional<int> find_edge_on_curve(const ReductionInstance& inst);

/// Barycentric fill of a triangulation interior into fixed outer corners
/// (aligned with the outer face cycle).
StraightLineDrawing tutte_draw(const CombinatorialEmbedding& emb,
                               const std::vector<QPoint>& outer_coords,
                               const SolveOptions& opts);

/// Splits the contracted vertex back into x and y inside the epsilon/2 ball
/// around it, keeping every re-attached crossing edge inside its window.
struct UncontractTask {
    int merged_vertex;                      // vertex id in the solved drawing
    std::vector<int> x_link;                // parent-link vertex ids mapped to solved ids,
    std::vector<int> y_link;                // rotation order; -1 marks the partner slot
    std::vector<std::pair<int, Q>> x_windows;  // (solved far endpoint, target) per crossing edge
    std::vector<std::pair<int, Q>> y_windows;
    CurveSide side = CurveSide::Plus;
    Q epsilon;
    int pinned = 0;  // 1: x stays exactly at the merged position, 2: y does
};

std::pair<QPoint, QPoint> uncontract_placement(const StraightLineDrawing& solved,
                                               const UncontractTask& task);

/// Base case: removes unmarked edges, solves the remaining graph as an
/// A-graph with per-edge targets, reinserts the removed diagonals.
StraightLineDrawing base_case_solve(const ReductionInstance& inst, const SolveOptions& opts);

/// Full reduction of the main theorem.
StraightLineDrawing draw_triangulation(const ReductionInstance& inst, const SolveOptions& opts,
                                       TraceNode* trace = nullptr);

}  // namespace freeset
