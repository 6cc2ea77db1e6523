#pragma once

#include "freeset/reduction.hpp"

namespace freeset {

/// Witness triangulated in place: axis edges between consecutive curve
/// vertices, a bounding sky triangle (three auxiliary vertices), and chords
/// until every face is a 3-cycle. Plane-ness is preserved exactly and the
/// crossing sequence extends the witness's.
struct TriangulationResult {
    StraightLineDrawing drawing;
    int original_n = 0;              // vertices >= original_n are auxiliary
    std::vector<int> edge_back;      // result edge id -> original edge id, -1 if added
};

TriangulationResult triangulate_preserving_curve(const StraightLineDrawing& witness);

/// Draws the graph with the collinear set at prescribed axis positions.
/// Targets are assigned to the vertices of S in the order S appears along
/// the axis in the witness.
StraightLineDrawing draw_collinear(const StraightLineDrawing& witness,
                                   const std::vector<int>& collinear_set,
                                   const std::vector<Q>& targets, const SolveOptions& opts,
                                   TraceNode* trace = nullptr);

/// Places the collinear set on an arbitrary point set: rotate targets to
/// distinct heights, draw collinear, spread by a verified horizontal
/// perturbation, rescale and rotate back.
StraightLineDrawing realize_free_set(const StraightLineDrawing& witness,
                                     const std::vector<int>& collinear_set,
                                     const std::vector<QPoint>& points, const SolveOptions& opts,
                                     TraceNode* trace = nullptr);

}  // namespace freeset
