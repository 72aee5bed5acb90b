#pragma once

// Level graphs: the dual graphs of multi-component degenerations, with an
// integer level per vertex recording the relative speed of degeneration.
// Edges are oriented by the level order: the "plus" half-edge sits at the
// weakly higher end. Self-edges and parallel edges are first-class citizens;
// an edge is horizontal exactly when its endpoints share a level (self-edges
// always are).

#include <kdiff/cyclotomic.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace kdiff {

struct MarkedPoint {
    int order = 0;
    // Residue of the chosen local root at this marked point, when the caller
    // wants the residue theorem enforced at a full-power vertex.
    std::optional<Cyclotomic> residue_root;
};

struct Vertex {
    int id = 0;
    int genus = 0;
    int level = 0;
    std::vector<MarkedPoint> marked;
};

struct Edge {
    int id = 0;
    int v_plus = 0;   // endpoint at the weakly higher level
    int v_minus = 0;  // endpoint at the weakly lower level
    int order_plus = 0;
    int order_minus = 0;
    std::optional<Cyclotomic> root_plus;
    std::optional<Cyclotomic> root_minus;
};

// A vertex-induced subgraph. Edges with exactly one endpoint inside are kept
// as dangling half-edges so degree data survives the cut.
struct DanglingEnd {
    int edge = 0;
    bool inside_is_plus = false;
};

struct Fragment {
    std::vector<int> vertex_ids;       // sorted
    std::vector<int> edge_ids;         // both endpoints inside, sorted
    std::vector<DanglingEnd> dangling; // sorted by edge id
};

class LevelGraph {
public:
    LevelGraph() = default;

    // Structural well-formedness is a constructor contract: duplicate ids,
    // dangling endpoints, negative genus and misoriented edges throw.
    // Connectivity and stability are semantic properties, reported by
    // validate() in the twisted layer instead of thrown here.
    LevelGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
        : vertices_(std::move(vertices)), edges_(std::move(edges)) {
        std::sort(vertices_.begin(), vertices_.end(),
                  [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
        std::sort(edges_.begin(), edges_.end(),
                  [](const Edge& a, const Edge& b) { return a.id < b.id; });
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            const Vertex& v = vertices_[i];
            if (v.genus < 0) throw std::invalid_argument("vertex " + std::to_string(v.id) + ": negative genus");
            if (!vertex_index_.emplace(v.id, i).second)
                throw std::invalid_argument("duplicate vertex id " + std::to_string(v.id));
        }
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const Edge& e = edges_[i];
            if (!edge_index_.emplace(e.id, i).second)
                throw std::invalid_argument("duplicate edge id " + std::to_string(e.id));
            if (!vertex_index_.count(e.v_plus) || !vertex_index_.count(e.v_minus))
                throw std::invalid_argument("edge " + std::to_string(e.id) + ": dangling endpoint");
            if (level_of(e.v_plus) < level_of(e.v_minus))
                throw std::invalid_argument("edge " + std::to_string(e.id) +
                                            ": plus end below minus end");
        }
    }

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }

    const Vertex& vertex(int id) const { return vertices_.at(index_of(vertex_index_, id, "vertex")); }
    const Edge& edge(int id) const { return edges_.at(index_of(edge_index_, id, "edge")); }
    bool has_vertex(int id) const { return vertex_index_.count(id) != 0; }

    int level_of(int vertex_id) const { return vertex(vertex_id).level; }

    bool is_horizontal(const Edge& e) const { return level_of(e.v_plus) == level_of(e.v_minus); }
    bool is_horizontal(int edge_id) const { return is_horizontal(edge(edge_id)); }

    struct EdgeClassification {
        std::vector<int> horizontal;
        std::vector<int> vertical;
    };
    EdgeClassification classify_edges() const {
        EdgeClassification c;
        for (const Edge& e : edges_)
            (is_horizontal(e) ? c.horizontal : c.vertical).push_back(e.id);
        return c;
    }

    // Distinct levels, descending (top first).
    std::vector<int> levels() const {
        std::set<int> s;
        for (const Vertex& v : vertices_) s.insert(v.level);
        return {s.rbegin(), s.rend()};
    }
    int top_level() const {
        if (vertices_.empty()) throw std::logic_error("top_level: empty graph");
        return levels().front();
    }

    // Same graph with the level set compressed to 0, -1, -2, ... preserving order.
    LevelGraph normalized_levels() const {
        std::vector<int> ls = levels();
        std::map<int, int> remap;
        for (std::size_t i = 0; i < ls.size(); ++i) remap[ls[i]] = -static_cast<int>(i);
        std::vector<Vertex> vs = vertices_;
        for (Vertex& v : vs) v.level = remap.at(v.level);
        return LevelGraph(std::move(vs), edges_);
    }

    enum class Cut { above, at, at_or_above };
    Fragment subgraph(Cut cut, int level) const {
        Fragment f;
        auto inside = [&](int vid) {
            int l = level_of(vid);
            switch (cut) {
                case Cut::above: return l > level;
                case Cut::at: return l == level;
                default: return l >= level;
            }
        };
        for (const Vertex& v : vertices_)
            if (inside(v.id)) f.vertex_ids.push_back(v.id);
        for (const Edge& e : edges_) {
            bool p = inside(e.v_plus), m = inside(e.v_minus);
            if (p && m)
                f.edge_ids.push_back(e.id);
            else if (p || m)
                f.dangling.push_back({e.id, p});
        }
        return f;
    }

    // Connected components of the subgraph induced on `vertex_ids`, using
    // only edges accepted by `keep_edge` (and with both endpoints inside).
    // Deterministic: each component sorted ascending, components ordered by
    // least contained vertex id.
    template <typename EdgePred>
    std::vector<std::vector<int>> components(const std::vector<int>& vertex_ids,
                                             EdgePred keep_edge) const {
        std::map<int, int> comp;  // vertex id -> root id (union-find by id)
        for (int v : vertex_ids) comp[v] = v;
        auto find = [&](int v) {
            while (comp[v] != v) {
                comp[v] = comp[comp[v]];
                v = comp[v];
            }
            return v;
        };
        for (const Edge& e : edges_) {
            if (!comp.count(e.v_plus) || !comp.count(e.v_minus)) continue;
            if (!keep_edge(e)) continue;
            int a = find(e.v_plus), b = find(e.v_minus);
            if (a != b) comp[std::max(a, b)] = std::min(a, b);
        }
        std::map<int, std::vector<int>> buckets;
        for (int v : vertex_ids) buckets[find(v)].push_back(v);
        std::vector<std::vector<int>> out;
        for (auto& [root, members] : buckets) {
            std::sort(members.begin(), members.end());
            out.push_back(std::move(members));
        }
        return out;
    }

    std::vector<std::vector<int>> connected_components() const {
        std::vector<int> all;
        for (const Vertex& v : vertices_) all.push_back(v.id);
        return components(all, [](const Edge&) { return true; });
    }
    bool is_connected() const { return connected_components().size() <= 1; }

    // Arithmetic genus of the stable curve: sum of vertex genera plus the
    // first Betti number of the (connected) dual graph.
    int genus_total() const {
        if (!is_connected()) throw std::logic_error("genus_total: graph not connected");
        int g = 0;
        for (const Vertex& v : vertices_) g += v.genus;
        return g + static_cast<int>(edges_.size()) - static_cast<int>(vertices_.size()) + 1;
    }

    // Half-edge degree (self-edges count twice).
    int node_degree(int vertex_id) const {
        int d = 0;
        for (const Edge& e : edges_) {
            if (e.v_plus == vertex_id) ++d;
            if (e.v_minus == vertex_id) ++d;
        }
        return d;
    }

    // No neighbor strictly higher; self-edges never affect maximality.
    bool is_local_maximum(int vertex_id) const {
        int l = level_of(vertex_id);
        for (const Edge& e : edges_) {
            if (e.v_plus == e.v_minus) continue;
            if (e.v_minus == vertex_id && level_of(e.v_plus) > l) return false;
        }
        return true;
    }

private:
    static std::size_t index_of(const std::map<int, std::size_t>& m, int id, const char* what) {
        auto it = m.find(id);
        if (it == m.end()) throw std::out_of_range(std::string(what) + " id " + std::to_string(id) + " not present");
        return it->second;
    }

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::map<int, std::size_t> vertex_index_;
    std::map<int, std::size_t> edge_index_;
};

}  // namespace kdiff
