#pragma once

// Closed-form dimension formulas and the residue-space counts that measure how
// many genuinely independent conditions the k-residue criterion imposes.
//
// All values here are exact integers computed from the combinatorics alone.
// The twisted dimension is conditional on non-emptiness of the twisted space:
// deciding emptiness is the job of the residue-condition checkers, not of
// these formulas.

#include <vector>

#include "kdiff/twisted.hpp"

namespace kdiff {

// Which component of the stratum the instance is meant to degenerate into.
// At k = 1 this is not a choice: every differential is a first power, and the
// holomorphic locus is exactly the pole-free one. For k >= 2 the k-th powers
// of holomorphic abelian differentials form a separate component whenever the
// signature allows both, and the caller has to say which one is meant.
enum class ComponentKind { ab, non_ab };

inline int stratum_dim(int g, int n, [[maybe_unused]] int k,
                       bool is_holomorphic_abelian_power) {
    return is_holomorphic_abelian_power ? 2 * g - 1 + n : 2 * g - 2 + n;
}

// Counts of the residue-space dimensions. One flavor per instance: at k = 1
// the plain counts apply and delta_p may be 1; for k >= 2 the same fields hold
// the Sigma_k-restricted counts and delta_p is identically 0, so the unified
// formulas below cover both cases.
struct DimensionReport {
    int k = 1;
    int stratum_dim = 0;
    int h = 0;            // horizontal edges
    int twisted_dim = 0;  // stratum_dim - h, conditional on non-emptiness

    int delta_p = 0;  // 1 iff k = 1 and no marked point is a pole
    int c = 0;        // pole-free vertices (within Sigma_k when k >= 2)
    int c_l = 0;      // ... that are not local maxima of the level order
    int c_m = 0;      // ... that are local maxima; c = c_m + c_l
    int lambda = 0;   // edges whose orders are divisible by k (all edges at k = 1)

    int dim_res = 0;          // lambda - c_l
    int dim_grc = 0;          // lambda - (c - delta_p)
    int independent_grc = 0;  // c_m - delta_p
};

inline int horizontal_edge_count(const LevelGraph& g) {
    int h = 0;
    for (const Edge& e : g.edges())
        if (g.is_horizontal(e)) ++h;
    return h;
}

// stratum_dim minus one per horizontal edge. The kind flag is taken at face
// value; passing ab for a signature with poles describes an empty locus and
// the returned number is then vacuous.
inline int twisted_dim(const TwistedDifferential& t, ComponentKind kind) {
    TypeSignature sig = type_signature(t);
    return stratum_dim(sig.genus, sig.count(), t.k, kind == ComponentKind::ab) -
           horizontal_edge_count(t.graph);
}

// Fills only the counting fields; k = 1 counts every vertex and edge with
// "pole" meaning any negative marked order, k >= 2 restricts to full-power
// vertices and k-divisible edge orders with "pole" meaning order <= -k. The
// two pole notions differ on purpose: marked orders in (-k, 0) obstruct
// smoothability outright (a case-i pole) but do not contribute a residue.
inline DimensionReport residue_counts(const TwistedDifferential& t) {
    DimensionReport r;
    r.k = t.k;

    auto counted_vertex = [&](const Vertex& v) { return t.k == 1 || t.full_power(v.id); };
    auto has_pole = [&](const Vertex& v) {
        for (const MarkedPoint& m : v.marked)
            if (m.order <= -t.k) return true;
        return false;
    };

    if (t.k == 1) {
        r.delta_p = 1;
        for (const Vertex& v : t.graph.vertices())
            if (has_pole(v)) r.delta_p = 0;
    }

    for (const Vertex& v : t.graph.vertices()) {
        if (!counted_vertex(v) || has_pole(v)) continue;
        ++r.c;
        if (t.graph.is_local_maximum(v.id))
            ++r.c_m;
        else
            ++r.c_l;
    }

    for (const Edge& e : t.graph.edges())
        if (e.order_plus % t.k == 0) ++r.lambda;

    r.dim_res = r.lambda - r.c_l;
    r.dim_grc = r.lambda - (r.c - r.delta_p);
    r.independent_grc = r.c_m - r.delta_p;
    return r;
}

// Everything in one report, for the CLI and the JSON mirror.
inline DimensionReport dimension_report(const TwistedDifferential& t, ComponentKind kind) {
    DimensionReport r = residue_counts(t);
    TypeSignature sig = type_signature(t);
    r.stratum_dim = stratum_dim(sig.genus, sig.count(), t.k, kind == ComponentKind::ab);
    r.h = horizontal_edge_count(t.graph);
    r.twisted_dim = r.stratum_dim - r.h;
    return r;
}

}  // namespace kdiff
