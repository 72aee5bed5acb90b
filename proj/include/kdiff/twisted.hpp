#pragma once

// Twisted k-differentials on level graphs: the combinatorial data of a
// boundary point. Per vertex it stores the power divisor d_v (the largest d
// such that the component's differential is a d-th power of a primitive
// (k/d)-differential; d_v = k means a full k-th power of an abelian
// differential). Per half-edge it stores residue *roots*: a k-residue R is
// recovered as root^k, and roots rather than k-residues are the stored data
// because every matching and cancellation condition below is linear in the
// roots, not in their k-th powers.
//
// Root bookkeeping convention: a root is required at both halves of every
// horizontal edge (nonzero there) and at every vertical minus half-edge whose
// order is divisible by k; everywhere else the k-residue vanishes identically
// and the slot must be absent or zero.

#include <kdiff/cyclotomic.hpp>
#include <kdiff/levelgraph.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kdiff {

struct TwistedDifferential {
    int k = 1;
    LevelGraph graph;
    std::map<int, int> power_divisor;  // vertex id -> d_v

    TwistedDifferential() = default;
    TwistedDifferential(int k_, LevelGraph g, std::map<int, int> d)
        : k(k_), graph(std::move(g)), power_divisor(std::move(d)) {
        if (k < 1) throw std::invalid_argument("k must be positive");
        for (const Vertex& v : graph.vertices()) {
            auto it = power_divisor.find(v.id);
            if (it == power_divisor.end())
                throw std::invalid_argument("vertex " + std::to_string(v.id) + ": missing power divisor");
            if (it->second < 1 || k % it->second != 0)
                throw std::invalid_argument("vertex " + std::to_string(v.id) +
                                            ": power divisor must divide k");
        }
        if (power_divisor.size() != graph.vertices().size())
            throw std::invalid_argument("power divisor given for unknown vertex");
    }

    int d(int vertex_id) const { return power_divisor.at(vertex_id); }
    bool full_power(int vertex_id) const { return d(vertex_id) == k; }

    bool has_marked_pole(int vertex_id) const {
        for (const MarkedPoint& m : graph.vertex(vertex_id).marked)
            if (m.order < 0) return true;
        return false;
    }

    // Stored root with the vanishing convention: slots that cannot carry a
    // k-residue read as exact zero.
    Cyclotomic minus_root(const Edge& e) const {
        if (e.root_minus && (graph.is_horizontal(e) || e.order_minus % k == 0)) return *e.root_minus;
        return Cyclotomic();
    }
    Cyclotomic plus_root(const Edge& e) const {
        if (e.root_plus && graph.is_horizontal(e)) return *e.root_plus;
        return Cyclotomic();
    }
};

struct Violation {
    std::string code;     // stable machine-readable tag
    std::string message;  // human-readable detail
    std::vector<int> vertex_ids;
    std::vector<int> edge_ids;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<std::string> warnings;
    bool ok() const { return violations.empty(); }
    bool has(const std::string& code) const {
        for (const Violation& v : violations)
            if (v.code == code) return true;
        return false;
    }
};

namespace detail {
inline void add_violation(ValidationReport& r, std::string code, std::string msg,
                          std::vector<int> vids = {}, std::vector<int> eids = {}) {
    r.violations.push_back({std::move(code), std::move(msg), std::move(vids), std::move(eids)});
}
}  // namespace detail

// Semantic validation. Everything here is reported rather than thrown: an
// invalid instance is data to be diagnosed, not a programming error.
inline ValidationReport validate(const TwistedDifferential& t) {
    ValidationReport report;
    const LevelGraph& g = t.graph;
    const int k = t.k;

    if (g.vertices().empty()) {
        detail::add_violation(report, "empty", "graph has no vertices");
        return report;
    }
    if (!g.is_connected())
        detail::add_violation(report, "disconnected", "underlying graph is not connected");

    for (const Vertex& v : g.vertices()) {
        int degree = g.node_degree(v.id);
        if (2 * v.genus - 2 + degree + static_cast<int>(v.marked.size()) <= 0)
            detail::add_violation(report, "unstable",
                                  "vertex " + std::to_string(v.id) + " is not stable", {v.id});

        // Degree condition: marked orders and half-edge orders at v add up to
        // k(2g_v - 2).
        long sum = 0;
        for (const MarkedPoint& m : v.marked) sum += m.order;
        for (const Edge& e : g.edges()) {
            if (e.v_plus == v.id) sum += e.order_plus;
            if (e.v_minus == v.id) sum += e.order_minus;
        }
        if (sum != static_cast<long>(k) * (2 * v.genus - 2))
            detail::add_violation(report, "degree",
                                  "vertex " + std::to_string(v.id) + ": orders sum to " +
                                      std::to_string(sum) + ", expected " +
                                      std::to_string(static_cast<long>(k) * (2 * v.genus - 2)),
                                  {v.id});

        // d_v divides every order at the vertex (it already divides k).
        int dv = t.d(v.id);
        bool divides = true;
        for (const MarkedPoint& m : v.marked)
            if (m.order % dv != 0) divides = false;
        for (const Edge& e : g.edges()) {
            if (e.v_plus == v.id && e.order_plus % dv != 0) divides = false;
            if (e.v_minus == v.id && e.order_minus % dv != 0) divides = false;
        }
        if (!divides)
            detail::add_violation(report, "power-divisor",
                                  "vertex " + std::to_string(v.id) +
                                      ": power divisor does not divide all local orders",
                                  {v.id});
    }

    for (const Edge& e : g.edges()) {
        const bool horizontal = g.is_horizontal(e);
        if (e.order_plus + e.order_minus != -2 * k)
            detail::add_violation(report, "order-sum",
                                  "edge " + std::to_string(e.id) + ": half-edge orders sum to " +
                                      std::to_string(e.order_plus + e.order_minus) + ", expected " +
                                      std::to_string(-2 * k),
                                  {}, {e.id});
        if (e.order_plus < -k)
            detail::add_violation(report, "order-range",
                                  "edge " + std::to_string(e.id) + ": plus order below -k", {}, {e.id});
        if (horizontal != (e.order_plus == -k))
            detail::add_violation(report, "horizontality",
                                  "edge " + std::to_string(e.id) +
                                      ": order -k exactly at horizontal edges",
                                  {}, {e.id});

        if (horizontal) {
            if (!e.root_plus || e.root_plus->is_zero() || !e.root_minus || e.root_minus->is_zero()) {
                detail::add_violation(report, "missing-root",
                                      "edge " + std::to_string(e.id) +
                                          ": horizontal edges need nonzero roots on both halves",
                                      {}, {e.id});
            } else {
                // Matching condition on k-residues across a horizontal node:
                // root_plus^k = (-1)^k root_minus^k, exactly.
                Cyclotomic lhs = e.root_plus->pow(static_cast<unsigned long>(k));
                Cyclotomic rhs = e.root_minus->pow(static_cast<unsigned long>(k));
                if (k % 2 == 1) rhs = -rhs;
                if (lhs != rhs)
                    detail::add_violation(report, "residue-match",
                                          "edge " + std::to_string(e.id) +
                                              ": horizontal k-residues do not match",
                                          {}, {e.id});
            }
        } else {
            if (e.order_minus % k == 0) {
                if (!e.root_minus)
                    detail::add_violation(report, "missing-root",
                                          "edge " + std::to_string(e.id) +
                                              ": minus half-edge with order divisible by k needs a root",
                                          {}, {e.id});
            } else if (e.root_minus && !e.root_minus->is_zero()) {
                detail::add_violation(report, "spurious-root",
                                      "edge " + std::to_string(e.id) +
                                          ": k-residue vanishes identically when k does not divide the order",
                                      {}, {e.id});
            }
            if (e.root_plus && !e.root_plus->is_zero())
                detail::add_violation(report, "spurious-root",
                                      "edge " + std::to_string(e.id) +
                                          ": vertical plus half-edges carry no k-residue",
                                      {}, {e.id});
        }
    }

    // Abelian residue theorem at full-power vertices: the chosen k-th root
    // omega_v has poles only at vertical in-edges, horizontal half-edges and
    // marked poles, and its residues there are exactly the stored roots. The
    // check needs every marked-pole residue to be present; otherwise it is
    // skipped with a warning.
    for (const Vertex& v : g.vertices()) {
        if (!t.full_power(v.id)) {
            for (const MarkedPoint& m : v.marked)
                if (m.residue_root)
                    report.warnings.push_back("vertex " + std::to_string(v.id) +
                                              ": marked-point residue ignored (not a full k-th power)");
            continue;
        }
        bool roots_complete = true;
        bool marked_complete = true;
        Cyclotomic sum;
        for (const Edge& e : g.edges()) {
            bool horizontal = g.is_horizontal(e);
            if (e.v_minus == v.id && (horizontal || e.order_minus % k == 0)) {
                if (!e.root_minus) roots_complete = false;
                else sum += *e.root_minus;
            }
            if (e.v_plus == v.id && horizontal) {
                if (!e.root_plus) roots_complete = false;
                else sum += *e.root_plus;
            }
        }
        for (const MarkedPoint& m : v.marked) {
            if (m.order >= 0) {
                if (m.residue_root && !m.residue_root->is_zero())
                    detail::add_violation(report, "spurious-root",
                                          "vertex " + std::to_string(v.id) +
                                              ": nonzero residue at a non-pole marked point",
                                          {v.id});
                continue;
            }
            if (!m.residue_root) marked_complete = false;
            else sum += *m.residue_root;
        }
        if (!roots_complete) continue;  // missing edge roots are flagged above
        if (!marked_complete) {
            report.warnings.push_back("vertex " + std::to_string(v.id) +
                                      ": residue theorem unchecked (marked-pole residues not given)");
            continue;
        }
        if (!sum.is_zero())
            detail::add_violation(report, "residue-theorem",
                                  "vertex " + std::to_string(v.id) +
                                      ": residues of the abelian root do not sum to zero",
                                  {v.id});
    }

    return report;
}

struct TypeSignature {
    int genus = 0;
    std::vector<int> orders;  // marked orders, by vertex id then position
    int count() const { return static_cast<int>(orders.size()); }
};

// Global type (g, mu) of the smoothing. Pre: validate(t).ok(); the internal
// consistency Sum(mu) = k(2g-2) is rechecked and failure indicates an invalid
// instance rather than a recoverable condition.
inline TypeSignature type_signature(const TwistedDifferential& t) {
    TypeSignature sig;
    sig.genus = t.graph.genus_total();
    long sum = 0;
    for (const Vertex& v : t.graph.vertices())
        for (const MarkedPoint& m : v.marked) {
            sig.orders.push_back(m.order);
            sum += m.order;
        }
    if (sum != static_cast<long>(t.k) * (2 * sig.genus - 2))
        throw std::logic_error("type_signature: orders inconsistent with genus; validate first");
    return sig;
}

// ---- gauge transformations ------------------------------------------------
// These preserve every verdict and power every metamorphic test. A "slot at
// vertex v" is: the minus root of an edge whose minus end is v, the plus root
// of a horizontal edge whose plus end is v, and marked-point residues at v.

inline TwistedDifferential scale_all_roots(const TwistedDifferential& t, const Cyclotomic& c) {
    std::vector<Vertex> vs = t.graph.vertices();
    std::vector<Edge> es = t.graph.edges();
    for (Vertex& v : vs)
        for (MarkedPoint& m : v.marked)
            if (m.residue_root) m.residue_root = c * *m.residue_root;
    for (Edge& e : es) {
        if (e.root_plus) e.root_plus = c * *e.root_plus;
        if (e.root_minus) e.root_minus = c * *e.root_minus;
    }
    return TwistedDifferential(t.k, LevelGraph(std::move(vs), std::move(es)), t.power_divisor);
}

// Multiply every root slot at one vertex by a fixed k-th root of unity: the
// residual freedom in choosing the k-th root at a full-power vertex, or a
// single slot's freedom at a partial-power vertex (use per_slot for those).
inline TwistedDifferential gauge_vertex(const TwistedDifferential& t, int vertex_id, int j) {
    Cyclotomic z = Cyclotomic::root_of_unity(static_cast<unsigned>(t.k), j);
    std::vector<Vertex> vs = t.graph.vertices();
    std::vector<Edge> es = t.graph.edges();
    for (Vertex& v : vs) {
        if (v.id != vertex_id) continue;
        for (MarkedPoint& m : v.marked)
            if (m.residue_root) m.residue_root = z * *m.residue_root;
    }
    for (Edge& e : es) {
        bool horizontal = t.graph.is_horizontal(e);
        if (e.v_minus == vertex_id && e.root_minus) e.root_minus = z * *e.root_minus;
        if (e.v_plus == vertex_id && horizontal && e.root_plus) e.root_plus = z * *e.root_plus;
    }
    return TwistedDifferential(t.k, LevelGraph(std::move(vs), std::move(es)), t.power_divisor);
}

// Multiply a single minus-root slot by a k-th root of unity. Only sound at
// vertices that are not full powers (their slots are independent).
inline TwistedDifferential gauge_minus_slot(const TwistedDifferential& t, int edge_id, int j) {
    Cyclotomic z = Cyclotomic::root_of_unity(static_cast<unsigned>(t.k), j);
    std::vector<Edge> es = t.graph.edges();
    for (Edge& e : es)
        if (e.id == edge_id && e.root_minus) e.root_minus = z * *e.root_minus;
    return TwistedDifferential(t.k, LevelGraph(t.graph.vertices(), std::move(es)), t.power_divisor);
}

// Apply a strictly increasing relabeling to the level set.
template <typename F>
TwistedDifferential relabel_levels(const TwistedDifferential& t, F&& f) {
    std::vector<Vertex> vs = t.graph.vertices();
    for (Vertex& v : vs) v.level = f(v.level);
    return TwistedDifferential(t.k, LevelGraph(std::move(vs), t.graph.edges()), t.power_divisor);
}

}  // namespace kdiff
