#pragma once

#include "freeset/embedding.hpp"

#include <string>
#include <vector>

namespace freeset {

struct StraightLineDrawing {
    CombinatorialEmbedding emb;
    std::vector<QPoint> coords;  // per vertex

    const QPoint& at(int v) const { return coords[v]; }
};

/// Exhaustive exact segment-pair report. count == 0 iff the drawing is plane.
struct CrossingReport {
    long count = 0;
    std::vector<std::pair<int, int>> pairs;  // offending edge id pairs
};

CrossingReport is_plane(const StraightLineDrawing& d);

/// One element met by the y-axis: a vertex on the axis or an open edge
/// strictly crossing it.
struct CrossItem {
    bool is_vertex = false;
    int id = -1;
    bool operator==(const CrossItem& o) const { return is_vertex == o.is_vertex && id == o.id; }
};

struct CrossingSequence {
    std::vector<CrossItem> items;
    std::vector<Q> targets;  // strictly increasing, one per item
    Q epsilon = 0;

    size_t size() const { return items.size(); }
    int position_of_vertex(int v) const;
    int position_of_edge(int e) const;
};

/// Ordered intersection of the drawing with the y-axis. Edges lying on the
/// axis (both endpoints on it) are omitted; edges touching it at one
/// endpoint are represented by that vertex alone. Targets are the observed
/// coordinates; epsilon defaults to a third of the smallest gap.
CrossingSequence crossing_sequence_of(const StraightLineDrawing& d);

/// Devillers et al. style check: rotation orders match the reference
/// embedding at every vertex and every reference face is drawn simple.
bool check_devillers(const StraightLineDrawing& d, const CombinatorialEmbedding& ref);

/// Geometric face polygon of a canonical face index.
std::vector<QPoint> face_polygon(const StraightLineDrawing& d, const std::vector<int>& cycle);

/// Reflection about the y-axis: negates x, reverses rotations, recomputes
/// the outer face.
StraightLineDrawing reflect(const StraightLineDrawing& d);

/// Builds a drawing from edges + coordinates, deriving rotations and the
/// outer face; rejects non-plane inputs when `must_be_plane`.
StraightLineDrawing drawing_from_coords(int n, const std::vector<std::pair<int, int>>& edges,
                                        const std::vector<QPoint>& coords, bool must_be_plane);

}  // namespace freeset
