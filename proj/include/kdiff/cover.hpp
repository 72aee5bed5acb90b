#pragma once

// Canonical cyclic covers. Locally, the degree-k cover on which the k-th
// root of a k-differential becomes abelian is determined by gcd arithmetic:
// a point of order m has r = gcd(k, m) preimages, each with ramification
// index k/r and abelian order (k - r + m)/r. Globally the cover of a graph
// of full-power components is pinned, up to isomorphism, by one Z_k offset
// per edge describing how the k labeled copies glue; horizontal offsets are
// forced by residue matching, vertical offsets are genuinely free and are
// what the boundary-condition search enumerates.

#include <kdiff/budget.hpp>
#include <kdiff/cyclotomic.hpp>
#include <kdiff/twisted.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

namespace kdiff {

struct PointCover {
    enum class Site { marked, edge_plus, edge_minus };
    Site site = Site::marked;
    int source_id = 0;  // marked-point position or edge id
    int order = 0;
    int preimages = 0;    // r = gcd(k, order), under the full degree-k cover
    int ramification = 0; // k / r
    int lifted_order = 0; // (k - r + order) / r
};

inline PointCover local_point_cover(int k, int order, PointCover::Site site = PointCover::Site::marked,
                                    int source_id = 0) {
    int r = std::gcd(k, std::abs(order));
    if (r == 0) r = k;  // order 0 at k
    PointCover p;
    p.site = site;
    p.source_id = source_id;
    p.order = order;
    p.preimages = r;
    p.ramification = k / r;
    p.lifted_order = (k - r + order) / r;
    return p;
}

struct VertexCoverData {
    int vertex = 0;
    int components = 0;           // = d_v
    int genus = 0;                // genus of each cover component
    std::vector<PointCover> points;  // marked points first, then half-edges by edge id
};

// Local cover data at one vertex. The per-point numbers always refer to the
// full degree-k cover; when d_v > 1 that cover splits into d_v components,
// each the canonical cover of the primitive (k/d_v)-th root, and the genus
// formula is applied at that primitive level.
inline VertexCoverData local_cover(const TwistedDifferential& t, int vertex_id) {
    const Vertex& v = t.graph.vertex(vertex_id);
    const int k = t.k;
    const int d = t.d(vertex_id);
    VertexCoverData out;
    out.vertex = vertex_id;
    out.components = d;

    std::vector<int> orders;
    for (std::size_t i = 0; i < v.marked.size(); ++i) {
        out.points.push_back(local_point_cover(k, v.marked[i].order, PointCover::Site::marked,
                                               static_cast<int>(i)));
        orders.push_back(v.marked[i].order);
    }
    for (const Edge& e : t.graph.edges()) {
        if (e.v_plus == vertex_id) {
            out.points.push_back(local_point_cover(k, e.order_plus, PointCover::Site::edge_plus, e.id));
            orders.push_back(e.order_plus);
        }
        if (e.v_minus == vertex_id) {
            out.points.push_back(local_point_cover(k, e.order_minus, PointCover::Site::edge_minus, e.id));
            orders.push_back(e.order_minus);
        }
    }

    // Genus of one component: primitive cover of degree k' = k/d for the
    // (k/d)-differential with orders m/d.
    const int kp = k / d;
    long acc = 0;  // k'*n - sum of gcd(k', m/d)
    for (int m : orders) {
        if (m % d != 0) throw std::logic_error("local_cover: power divisor does not divide an order");
        int rp = std::gcd(kp, std::abs(m / d));
        if (rp == 0) rp = kp;
        acc += kp - rp;
    }
    if (acc % 2 != 0) throw std::logic_error("local_cover: odd ramification total; invalid instance");
    out.genus = 1 + kp * (v.genus - 1) + static_cast<int>(acc / 2);
    return out;
}

// ---- labeled covers over a zone of full-power vertices ---------------------

// The k copies of each zone vertex, glued along the given edges: edge e with
// offset o joins copy j at its plus end to copy j + o at its minus end. Only
// edges with both endpoints in the zone and an entry in `offsets` glue.
class CopyCover {
public:
    CopyCover(const LevelGraph& g, int k, std::vector<int> zone, const std::map<int, int>& offsets)
        : k_(k), zone_(std::move(zone)) {
        std::sort(zone_.begin(), zone_.end());
        for (std::size_t i = 0; i < zone_.size(); ++i) index_[zone_[i]] = static_cast<int>(i);
        parent_.resize(zone_.size() * static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < parent_.size(); ++i) parent_[i] = static_cast<int>(i);
        for (const Edge& e : g.edges()) {
            auto p = index_.find(e.v_plus), m = index_.find(e.v_minus);
            if (p == index_.end() || m == index_.end()) continue;
            auto o = offsets.find(e.id);
            if (o == offsets.end()) continue;
            for (int j = 0; j < k; ++j) unite(node(p->second, j), node(m->second, mod(j + o->second)));
        }
    }

    int component_count() const {
        int c = 0;
        for (std::size_t i = 0; i < parent_.size(); ++i)
            if (find(static_cast<int>(i)) == static_cast<int>(i)) ++c;
        return c;
    }

    // Canonical component index of (vertex, copy); components numbered by
    // first appearance in (vertex, copy) order.
    int component_of(int vertex_id, int copy) const {
        ensure_labels();
        return labels_[static_cast<std::size_t>(node(index_.at(vertex_id), copy))];
    }

    int k() const { return k_; }
    const std::vector<int>& zone() const { return zone_; }

private:
    int mod(int j) const { return ((j % k_) + k_) % k_; }
    int node(int vidx, int copy) const { return vidx * k_ + copy; }
    int find(int x) const {
        while (parent_[static_cast<std::size_t>(x)] != x) x = parent_[static_cast<std::size_t>(x)];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
    void ensure_labels() const {
        if (!labels_.empty()) return;
        labels_.assign(parent_.size(), -1);
        int next = 0;
        for (std::size_t i = 0; i < parent_.size(); ++i) {
            int r = find(static_cast<int>(i));
            if (labels_[static_cast<std::size_t>(r)] < 0) labels_[static_cast<std::size_t>(r)] = next++;
            labels_[i] = labels_[static_cast<std::size_t>(r)];
        }
    }

    int k_;
    std::vector<int> zone_;
    std::map<int, int> index_;
    std::vector<int> parent_;
    mutable std::vector<int> labels_;
};

// Offset forced at a horizontal edge: the unique o with
// zeta^o * root_minus = -root_plus. Pre: the instance validates, so the two
// k-residues match and the solution exists.
inline int forced_horizontal_offset(const TwistedDifferential& t, const Edge& e) {
    Cyclotomic target = -*e.root_plus;
    for (int o = 0; o < t.k; ++o)
        if (Cyclotomic::root_of_unity(static_cast<unsigned>(t.k), o) * *e.root_minus == target) return o;
    throw std::logic_error("forced_horizontal_offset: residues do not match; validate first");
}

inline std::map<int, int> forced_horizontal_offsets(const TwistedDifferential& t) {
    std::map<int, int> out;
    for (const Edge& e : t.graph.edges())
        if (t.graph.is_horizontal(e)) out.emplace(e.id, forced_horizontal_offset(t, e));
    return out;
}

// ---- boundary pairs ---------------------------------------------------------

// One (level, component) instance of the boundary condition: Y is a connected
// component of the part of the graph strictly above L. `pure` marks the pairs
// the residue conditions actually constrain: every vertex a full k-th power
// and no marked pole inside. Pairs are listed by level descending, then by
// least vertex id.
struct BoundaryPair {
    int level = 0;
    std::vector<int> component;
    bool pure = false;
};

inline std::vector<BoundaryPair> boundary_pairs(const TwistedDifferential& t) {
    std::vector<BoundaryPair> out;
    std::vector<int> ls = t.graph.levels();
    for (std::size_t i = 1; i < ls.size(); ++i) {
        int L = ls[i];
        Fragment above = t.graph.subgraph(LevelGraph::Cut::above, L);
        for (auto& comp : t.graph.components(above.vertex_ids, [&](const Edge& e) {
                 return t.graph.level_of(e.v_plus) > L && t.graph.level_of(e.v_minus) > L;
             })) {
            BoundaryPair p;
            p.level = L;
            p.component = comp;
            p.pure = true;
            for (int v : comp)
                if (!t.full_power(v) || t.has_marked_pole(v)) p.pure = false;
            out.push_back(std::move(p));
        }
    }
    return out;
}

// ---- enumeration of normalized covers ---------------------------------------

// Which vertical offsets can influence a verdict: those whose plus end is a
// full-power vertex lying in at least one pure pair. Everything else is
// pinned (horizontal) or irrelevant for every cover (components containing a
// partial-power vertex or a marked pole satisfy their conditions for any
// gluing, so their offsets are fixed to 0 and skipped).
struct CoverEnumeration {
    std::vector<int> enumerated_edges;  // sorted edge ids
    std::map<int, int> forced;          // horizontal offsets
    mpz_class total;                    // k^(#enumerated)
};

inline CoverEnumeration cover_enumeration(const TwistedDifferential& t) {
    CoverEnumeration ce;
    ce.forced = forced_horizontal_offsets(t);
    std::set<int> relevant;  // vertex ids inside some pure pair
    for (const BoundaryPair& p : boundary_pairs(t))
        if (p.pure) relevant.insert(p.component.begin(), p.component.end());
    for (const Edge& e : t.graph.edges()) {
        if (t.graph.is_horizontal(e)) continue;
        if (t.full_power(e.v_plus) && relevant.count(e.v_plus)) ce.enumerated_edges.push_back(e.id);
    }
    mpz_ui_pow_ui(ce.total.get_mpz_t(), static_cast<unsigned long>(t.k),
                  static_cast<unsigned long>(ce.enumerated_edges.size()));
    return ce;
}

// Odometer over the enumerated edges; every edge of the graph gets a defined
// offset (forced, enumerated, or 0). The first assignment is all-zero digits;
// the digit of the largest edge id advances fastest.
class OffsetAssignments {
public:
    OffsetAssignments(const TwistedDifferential& t, CoverEnumeration ce)
        : k_(t.k), ce_(std::move(ce)), digits_(ce_.enumerated_edges.size(), 0), done_(false) {
        for (const Edge& e : t.graph.edges()) current_[e.id] = 0;
        for (auto& [id, o] : ce_.forced) current_[id] = o;
    }

    bool done() const { return done_; }
    const std::map<int, int>& offsets() const { return current_; }
    const CoverEnumeration& enumeration() const { return ce_; }

    void next() {
        for (std::size_t i = digits_.size(); i-- > 0;) {
            if (++digits_[i] < k_) {
                current_[ce_.enumerated_edges[i]] = digits_[i];
                return;
            }
            digits_[i] = 0;
            current_[ce_.enumerated_edges[i]] = 0;
        }
        done_ = true;  // odometer wrapped
    }

private:
    int k_;
    CoverEnumeration ce_;
    std::vector<int> digits_;
    std::map<int, int> current_;
    bool done_;
};

// ---- the lifted dual graph ---------------------------------------------------

// Dual graph of the canonical cover under a complete offset assignment.
// Vertices are (base vertex, component of its local cover); levels pull back.
// At full-power vertices the components are the k labeled copies and an edge
// preimage i at the plus end glues to copy i + o(e) at the minus end, exactly
// the convention the verdict search uses. At partial-power vertices the
// attachment below is a fixed convention (preimage i sits on component
// i mod d); the true monodromy there is extra data that no verdict consumes.
struct LiftedVertex {
    int base = 0;
    int copy = 0;  // 0..d_v-1
    int genus = 0;
    int level = 0;
    std::vector<int> marked_orders;
};

struct LiftedEdge {
    int base = 0;
    int preimage = 0;  // 0..gcd(k, order)-1, indexed on the plus side
    int v_plus = 0;    // indices into LiftedLevelGraph::vertices
    int v_minus = 0;
    int order_plus = 0;
    int order_minus = 0;
};

struct LiftedLevelGraph {
    std::vector<LiftedVertex> vertices;
    std::vector<LiftedEdge> edges;

    int index_of(int base, int copy) const {
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i].base == base && vertices[i].copy == copy) return static_cast<int>(i);
        throw std::out_of_range("lifted vertex not present");
    }

    // Forget the cover structure; ids are synthesized in vertex order.
    LevelGraph to_level_graph() const {
        std::vector<Vertex> vs;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            Vertex v;
            v.id = static_cast<int>(i);
            v.genus = vertices[i].genus;
            v.level = vertices[i].level;
            for (int m : vertices[i].marked_orders) v.marked.push_back({m, std::nullopt});
            vs.push_back(std::move(v));
        }
        std::vector<Edge> es;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            Edge e;
            e.id = static_cast<int>(i);
            e.v_plus = edges[i].v_plus;
            e.v_minus = edges[i].v_minus;
            e.order_plus = edges[i].order_plus;
            e.order_minus = edges[i].order_minus;
            es.push_back(std::move(e));
        }
        return LevelGraph(std::move(vs), std::move(es));
    }
};

inline LiftedLevelGraph lifted_level_graph(const TwistedDifferential& t,
                                           const std::map<int, int>& offsets) {
    const int k = t.k;
    LiftedLevelGraph out;
    std::map<std::pair<int, int>, int> vidx;
    for (const Vertex& v : t.graph.vertices()) {
        VertexCoverData data = local_cover(t, v.id);
        for (int c = 0; c < data.components; ++c) {
            LiftedVertex lv;
            lv.base = v.id;
            lv.copy = c;
            lv.genus = data.genus;
            lv.level = v.level;
            vidx[{v.id, c}] = static_cast<int>(out.vertices.size());
            out.vertices.push_back(std::move(lv));
        }
        for (std::size_t i = 0; i < v.marked.size(); ++i) {
            PointCover pc = local_point_cover(k, v.marked[i].order);
            for (int pre = 0; pre < pc.preimages; ++pre)
                out.vertices[static_cast<std::size_t>(vidx.at({v.id, pre % data.components}))]
                    .marked_orders.push_back(pc.lifted_order);
        }
    }
    for (const Edge& e : t.graph.edges()) {
        int o = 0;
        if (auto it = offsets.find(e.id); it != offsets.end()) o = it->second;
        PointCover plus = local_point_cover(k, e.order_plus);
        PointCover minus = local_point_cover(k, e.order_minus);
        if (plus.preimages != minus.preimages)
            throw std::logic_error("lifted_level_graph: order pairing violated; validate first");
        int r = plus.preimages;
        int dp = t.d(e.v_plus), dm = t.d(e.v_minus);
        for (int i = 0; i < r; ++i) {
            LiftedEdge le;
            le.base = e.id;
            le.preimage = i;
            le.v_plus = vidx.at({e.v_plus, i % dp});
            le.v_minus = vidx.at({e.v_minus, ((i + o) % r + r) % r % dm});
            le.order_plus = plus.lifted_order;
            le.order_minus = minus.lifted_order;
            out.edges.push_back(std::move(le));
        }
    }
    return out;
}

}  // namespace kdiff
