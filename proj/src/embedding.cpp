#include "freeset/embedding.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace freeset {

int CombinatorialEmbedding::half_edge(int u, int v) const {
    for (int h : rotation[u]) {
        if (head(h) == v) return h;
    }
    return -1;
}

int CombinatorialEmbedding::edge_between(int u, int v) const {
    int h = half_edge(u, v);
    return h < 0 ? -1 : edge_of(h);
}

int CombinatorialEmbedding::face_next(int h) const {
    int t = twin(h);
    int v = origin(t);
    const auto& rot = rotation[v];
    for (size_t i = 0; i < rot.size(); ++i) {
        if (rot[i] == t) return rot[(i + rot.size() - 1) % rot.size()];
    }
    fail("MalformedEmbedding", "half-edge missing from rotation list");
}

std::vector<int> CombinatorialEmbedding::vertices_of_cycle(const std::vector<int>& cyc) const {
    std::vector<int> vs;
    vs.reserve(cyc.size());
    for (int h : cyc) vs.push_back(origin(h));
    return vs;
}

FaceSet faces(const CombinatorialEmbedding& emb) {
    FaceSet fs;
    fs.face_of_half.assign(emb.half_count(), -1);
    for (int h0 = 0; h0 < emb.half_count(); ++h0) {
        if (fs.face_of_half[h0] >= 0) continue;
        std::vector<int> cyc;
        int h = h0;
        do {
            require(fs.face_of_half[h] < 0, "MalformedEmbedding", "face walk re-enters a face");
            fs.face_of_half[h] = static_cast<int>(fs.cycles.size());
            cyc.push_back(h);
            h = emb.face_next(h);
            require(cyc.size() <= static_cast<size_t>(emb.half_count()), "MalformedEmbedding",
                    "face walk does not close");
        } while (h != h0);
        fs.cycles.push_back(std::move(cyc));
    }
    return fs;
}

bool is_triangulation(const CombinatorialEmbedding& emb) {
    for (const auto& cyc : faces(emb).cycles) {
        if (cyc.size() != 3) return false;
    }
    return true;
}

void CombinatorialEmbedding::validate() const {
    require(n >= 1, "MalformedEmbedding", "no vertices");
    require(static_cast<int>(rotation.size()) == n, "MalformedEmbedding",
            "rotation table size mismatch");
    std::vector<int> seen(half_count(), 0);
    for (int v = 0; v < n; ++v) {
        for (int h : rotation[v]) {
            require(h >= 0 && h < half_count(), "MalformedEmbedding", "half-edge id out of range");
            require(origin(h) == v, "MalformedEmbedding", "half-edge listed at wrong vertex");
            ++seen[h];
        }
    }
    for (int h = 0; h < half_count(); ++h)
        require(seen[h] == 1, "MalformedEmbedding", "half-edge not covered exactly once");
    std::set<std::pair<int, int>> undirected;
    for (const auto& [u, v] : edges) {
        require(u != v, "MalformedEmbedding", "loop edge");
        require(u >= 0 && u < n && v >= 0 && v < n, "MalformedEmbedding", "edge endpoint range");
        auto key = std::minmax(u, v);
        require(undirected.insert(key).second, "MalformedEmbedding", "parallel edges");
    }
    // Euler relation, adjusted by the number of connected components.
    std::vector<int> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int a) { return comp[a] == a ? a : comp[a] = find(comp[a]); };
    for (const auto& [u, v] : edges) comp[find(u)] = find(v);
    std::set<int> roots;
    for (int v = 0; v < n; ++v) roots.insert(find(v));
    int c = static_cast<int>(roots.size());
    int f = static_cast<int>(faces(*this).cycles.size());
    require(n - m() + f == 1 + c, "MalformedEmbedding", "Euler relation violated");
    if (outer_face >= 0)
        require(outer_face < f, "MalformedEmbedding", "outer face index out of range");
}

CombinatorialEmbedding embedding_from_faces(int n,
                                            const std::vector<std::vector<int>>& face_cycles,
                                            int outer_index) {
    // Directed edge (u,v) must appear in exactly one face walk.
    std::map<std::pair<int, int>, std::pair<int, int>> succ_at;  // (v,w) -> (v,u): sigma(v->w)=v->u
    std::set<std::pair<int, int>> directed;
    std::set<std::pair<int, int>> undirected;
    for (const auto& cyc : face_cycles) {
        size_t k = cyc.size();
        require(k >= 3, "MalformedEmbedding", "face cycle too short");
        for (size_t i = 0; i < k; ++i) {
            int u = cyc[i], v = cyc[(i + 1) % k], w = cyc[(i + 2) % k];
            require(directed.insert({u, v}).second, "MalformedEmbedding",
                    "directed edge appears in two faces");
            undirected.insert(std::minmax(u, v));
            // face (.., u->v, v->w, ..): sigma(v->w) = v->u
            succ_at[{v, w}] = {v, u};
        }
    }
    for (const auto& [u, v] : directed)
        require(directed.count({v, u}), "MalformedEmbedding", "unmatched directed edge");

    CombinatorialEmbedding emb;
    emb.n = n;
    emb.edges.assign(undirected.begin(), undirected.end());
    std::map<std::pair<int, int>, int> half_of;
    for (int e = 0; e < emb.m(); ++e) {
        half_of[{emb.edges[e].first, emb.edges[e].second}] = 2 * e;
        half_of[{emb.edges[e].second, emb.edges[e].first}] = 2 * e + 1;
    }
    emb.rotation.assign(n, {});
    std::set<std::pair<int, int>> placed;
    for (int v = 0; v < n; ++v) {
        // find any out-edge of v, then follow sigma
        std::pair<int, int> start{-1, -1};
        for (const auto& d : directed) {
            if (d.first == v) {
                start = d;
                break;
            }
        }
        if (start.first < 0) continue;
        auto cur = start;
        do {
            require(placed.insert(cur).second, "MalformedEmbedding", "rotation does not close");
            emb.rotation[v].push_back(half_of.at(cur));
            cur = succ_at.at(cur);  // sigma-orbit = CCW order
        } while (cur != start);
    }
    emb.validate();
    // identify the canonical face index of the requested outer cycle
    require(outer_index >= 0 && outer_index < static_cast<int>(face_cycles.size()),
            "MalformedEmbedding", "outer face index out of range");
    const auto& want = face_cycles[outer_index];
    int h0 = half_of.at({want[0], want[1]});
    emb.outer_face = faces(emb).face_of_half[h0];
    return emb;
}

CombinatorialEmbedding embedding_from_coords(int n,
                                             const std::vector<std::pair<int, int>>& edge_list,
                                             const std::vector<QPoint>& coords) {
    CombinatorialEmbedding emb;
    emb.n = n;
    emb.edges = edge_list;
    emb.rotation.assign(n, {});
    for (int e = 0; e < emb.m(); ++e) {
        emb.rotation[edge_list[e].first].push_back(2 * e);
        emb.rotation[edge_list[e].second].push_back(2 * e + 1);
    }
    for (int v = 0; v < n; ++v) {
        auto dir = [&](int h) { return coords[emb.head(h)] - coords[v]; };
        std::sort(emb.rotation[v].begin(), emb.rotation[v].end(), [&](int a, int b) {
            return ccw_from_down_less(dir(a), dir(b));
        });
        for (size_t i = 0; i + 1 < emb.rotation[v].size(); ++i) {
            QPoint da = dir(emb.rotation[v][i]);
            QPoint db = dir(emb.rotation[v][i + 1]);
            require(!(cross(da, db) == 0 && dot(da, db) > 0), "MalformedEmbedding",
                    "two edges leave a vertex in the same direction");
        }
    }
    emb.validate();
    // outer face = the unique clockwise walk (negative doubled area)
    FaceSet fs = faces(emb);
    int outer = -1;
    for (size_t f = 0; f < fs.cycles.size(); ++f) {
        std::vector<QPoint> poly;
        for (int h : fs.cycles[f]) poly.push_back(coords[emb.origin(h)]);
        if (polygon_signed_area2(poly) < 0) {
            require(outer < 0, "MalformedEmbedding", "several clockwise faces (drawing not plane?)");
            outer = static_cast<int>(f);
        }
    }
    require(outer >= 0, "MalformedEmbedding", "no clockwise face found");
    emb.outer_face = outer;
    return emb;
}

ContractionResult contract_edge(const CombinatorialEmbedding& emb, int e) {
    require(e >= 0 && e < emb.m(), "MalformedEmbedding", "edge id out of range");
    require(is_triangulation(emb), "WouldCreateMultiEdge", "contraction requires a triangulation");
    int x = emb.edges[e].first, y = emb.edges[e].second;
    int hxy = 2 * e;  // x -> y
    int apex1 = emb.head(emb.face_next(hxy));
    int apex2 = emb.head(emb.face_next(CombinatorialEmbedding::twin(hxy)));
    // common neighbors must be exactly the two face apexes
    std::set<int> nx, common;
    for (int h : emb.rotation[x]) nx.insert(emb.head(h));
    for (int h : emb.rotation[y]) {
        if (nx.count(emb.head(h))) common.insert(emb.head(h));
    }
    require(common == std::set<int>({apex1, apex2}), "WouldCreateMultiEdge",
            "edge lies on a separating triangle");

    ContractionResult res;
    res.x = x;
    res.y = y;
    res.apex_a = apex1;
    res.apex_b = apex2;
    for (int h : emb.rotation[x]) res.x_neighbors.push_back(emb.head(h));
    for (int h : emb.rotation[y]) res.y_neighbors.push_back(emb.head(h));

    res.vertex_map.assign(emb.n, -1);
    for (int v = 0; v < emb.n; ++v) {
        if (v == y)
            res.vertex_map[v] = -1;  // set below
        else
            res.vertex_map[v] = v - (v > y ? 1 : 0);
    }
    res.vertex_map[y] = res.vertex_map[x];
    res.merged_vertex = res.vertex_map[x];

    // surviving edges: drop xy, y-apex1, y-apex2; re-root y's edges at x
    res.edge_map.assign(emb.m(), -1);
    std::vector<std::pair<int, int>> new_edges;
    for (int old_e = 0; old_e < emb.m(); ++old_e) {
        auto [u, v] = emb.edges[old_e];
        if (old_e == e) continue;
        bool incident_y = (u == y || v == y);
        int other = (u == y) ? v : u;
        if (incident_y && (other == apex1 || other == apex2)) continue;
        int nu = res.vertex_map[u], nv = res.vertex_map[v];
        res.edge_map[old_e] = static_cast<int>(new_edges.size());
        new_edges.push_back({nu, nv});
    }

    CombinatorialEmbedding out;
    out.n = emb.n - 1;
    out.edges = new_edges;
    out.rotation.assign(out.n, {});

    auto new_half = [&](int old_h) -> int {
        int ne = res.edge_map[emb.edge_of(old_h)];
        if (ne < 0) return -1;
        int no = res.vertex_map[emb.origin(old_h)];
        return new_edges[ne].first == no ? 2 * ne : 2 * ne + 1;
    };

    for (int v = 0; v < emb.n; ++v) {
        if (v == y) continue;
        int nv = res.vertex_map[v];
        if (v == x) {
            // splice: x's rotation with slot x->y replaced by y's exclusive list
            std::vector<int> merged;
            for (int h : emb.rotation[x]) {
                if (emb.head(h) == y) {
                    // y's rotation cyclically after y->x, endpoints (apexes) dropped
                    const auto& ry = emb.rotation[y];
                    size_t pos = 0;
                    while (emb.head(ry[pos]) != x) ++pos;
                    for (size_t i = 1; i < ry.size(); ++i) {
                        int hy = ry[(pos + i) % ry.size()];
                        int hd = emb.head(hy);
                        if (hd == apex1 || hd == apex2) continue;
                        int nh = new_half(hy);
                        require(nh >= 0, "MalformedEmbedding", "lost spliced edge");
                        merged.push_back(nh);
                    }
                } else {
                    int nh = new_half(h);
                    if (nh >= 0) merged.push_back(nh);
                }
            }
            out.rotation[nv] = merged;
        } else {
            for (int h : emb.rotation[v]) {
                int nh = new_half(h);
                if (nh >= 0) out.rotation[nv].push_back(nh);
            }
        }
    }
    out.validate();
    require(is_triangulation(out), "WouldCreateMultiEdge", "contraction broke the triangulation");
    // keep an outer face designation consistent with the old one
    if (emb.outer_face >= 0) {
        FaceSet old_fs = faces(emb);
        int marker = -1;
        for (int h : old_fs.cycles[emb.outer_face]) {
            int nh = new_half(h);
            if (nh >= 0 && emb.origin(h) != y && emb.head(h) != y) {
                marker = nh;
                break;
            }
        }
        require(marker >= 0, "MalformedEmbedding", "outer face vanished in contraction");
        out.outer_face = faces(out).face_of_half[marker];
    }
    res.emb = std::move(out);
    return res;
}

std::vector<int> find_separating_triangle(const CombinatorialEmbedding& emb) {
    std::set<std::vector<int>> found;
    std::vector<std::set<int>> adj(emb.n);
    for (const auto& [u, v] : emb.edges) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    for (int e = 0; e < emb.m(); ++e) {
        auto [u, v] = emb.edges[e];
        int hx = 2 * e;
        int a1 = emb.head(emb.face_next(hx));
        int a2 = emb.head(emb.face_next(CombinatorialEmbedding::twin(hx)));
        const auto& small = adj[u].size() < adj[v].size() ? adj[u] : adj[v];
        const auto& big = adj[u].size() < adj[v].size() ? adj[v] : adj[u];
        for (int w : small) {
            if (w == a1 || w == a2 || !big.count(w)) continue;
            std::vector<int> tri = {u, v, w};
            std::sort(tri.begin(), tri.end());
            found.insert(tri);
        }
    }
    if (found.empty()) return {};
    return *found.begin();
}

}  // namespace freeset
