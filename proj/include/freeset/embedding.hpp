#pragma once

#include "freeset/geometry.hpp"

#include <utility>
#include <vector>

namespace freeset {

/// Rotation system on dense vertex ids 0..n-1 and edge ids 0..m-1.
/// Edge e owns half-edges 2e (u->v) and 2e+1 (v->u); twin(h) = h^1.
/// rotation[v] lists the out-half-edges at v in counterclockwise order.
struct CombinatorialEmbedding {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> rotation;
    int outer_face = -1;  // index into faces().cycles

    int m() const { return static_cast<int>(edges.size()); }
    int half_count() const { return 2 * m(); }
    int origin(int h) const { return (h & 1) ? edges[h >> 1].second : edges[h >> 1].first; }
    int head(int h) const { return (h & 1) ? edges[h >> 1].first : edges[h >> 1].second; }
    static int twin(int h) { return h ^ 1; }
    int edge_of(int h) const { return h >> 1; }

    /// Half-edge from u to v; -1 if absent.
    int half_edge(int u, int v) const;
    bool has_edge(int u, int v) const { return half_edge(u, v) >= 0; }
    int edge_between(int u, int v) const;

    int degree(int v) const { return static_cast<int>(rotation[v].size()); }

    /// Next boundary half-edge of the face left of h: the rotation
    /// predecessor of twin(h) at head(h). Inner faces run CCW.
    int face_next(int h) const;

    std::vector<int> vertices_of_cycle(const std::vector<int>& half_cycle) const;

    /// Throws MalformedEmbedding when the rotation/twin structure or the
    /// Euler relation is inconsistent, or the graph is not simple.
    void validate() const;
};

struct FaceSet {
    std::vector<std::vector<int>> cycles;  // each a closed half-edge walk
    std::vector<int> face_of_half;         // half-edge id -> face index
};

/// Canonical face enumeration: walk from the smallest unvisited half-edge.
FaceSet faces(const CombinatorialEmbedding& emb);

/// True iff every face is a 3-cycle (simple triangulation, outer included).
bool is_triangulation(const CombinatorialEmbedding& emb);

/// Builds an embedding from explicit face cycles (vertex lists, CCW for
/// inner faces as seen in the target drawing; outer given by index).
CombinatorialEmbedding embedding_from_faces(int n,
                                            const std::vector<std::vector<int>>& face_cycles,
                                            int outer_index);

/// Derives the rotation system and outer face from coordinates.
CombinatorialEmbedding embedding_from_coords(int n,
                                             const std::vector<std::pair<int, int>>& edges,
                                             const std::vector<QPoint>& coords);

struct ContractionResult {
    CombinatorialEmbedding emb;      // vertices of the contracted graph
    std::vector<int> vertex_map;     // old vertex id -> new id (y maps to x's image)
    std::vector<int> edge_map;       // old edge id -> new id, -1 for removed
    int merged_vertex = -1;          // new id of the merged vertex
    int x = -1, y = -1;              // old endpoint ids (y was absorbed into x)
    int apex_a = -1, apex_b = -1;    // old ids of the two shared face apexes
    std::vector<int> x_neighbors;    // old neighbor ids from x, rotation order
    std::vector<int> y_neighbors;    // old neighbor ids from y, rotation order
};

/// Contracts edge e = xy of a triangulation; requires that e lies on no
/// separating triangle (exactly two common neighbors), else the result
/// would have multi-edges.
ContractionResult contract_edge(const CombinatorialEmbedding& emb, int e);

/// Lexicographically smallest non-facial 3-cycle, or empty vector.
std::vector<int> find_separating_triangle(const CombinatorialEmbedding& emb);

}  // namespace freeset
