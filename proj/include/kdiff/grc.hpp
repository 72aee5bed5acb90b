#pragma once

// The boundary criterion: which twisted k-differentials arise as limits of
// differentials on smooth curves. Two independent decision routes:
//
//   check_condition_4      case analysis per (level, component) pair, checked
//                          directly on the twisted differential;
//   check_condition_4hat   search over normalized-cover gluings, checking the
//                          abelian residue condition upstairs.
//
// The two are provably equivalent; implementing both and cross-checking them
// on generated instances is the core correctness argument of this library.

#include <kdiff/budget.hpp>
#include <kdiff/cover.hpp>
#include <kdiff/cyclotomic.hpp>
#include <kdiff/twisted.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kdiff {

// ---- the symmetric residue polynomial ---------------------------------------

struct PnkResult {
    bool vanishes = false;
    std::vector<int> exponents;  // witness (j_1..j_N), j_1 = 0, when vanishes
};

// Whether P_{N,k}(R_1..R_N) = 0 for R_i = roots[i]^k: equivalently, whether
// some choice of k-th roots sums to zero. j_1 is pinned to 0 because the
// vanishing locus is invariant under rotating all roots at once. N = 0 is
// the empty sum, which vanishes.
inline PnkResult p_nk_vanishes(const std::vector<Cyclotomic>& roots, int k, Budget& budget) {
    const std::size_t n = roots.size();
    if (n == 0) return {true, {}};
    std::vector<int> j(n, 0);
    const unsigned uk = static_cast<unsigned>(k);
    for (;;) {
        budget.spend();
        Cyclotomic sum = roots[0];
        for (std::size_t i = 1; i < n; ++i)
            sum += Cyclotomic::root_of_unity(uk, j[i]) * roots[i];
        if (sum.is_zero()) return {true, j};
        std::size_t i = n;
        while (i-- > 1) {
            if (++j[i] < k) break;
            j[i] = 0;
        }
        if (i == 0) return {false, {}};
    }
}

// The full product over all k^N root tuples, exactly. Brute-force oracle for
// p_nk_vanishes; zero iff some tuple sums to zero.
inline Cyclotomic p_nk_evaluate(const std::vector<Cyclotomic>& roots, int k, Budget& budget) {
    const std::size_t n = roots.size();
    if (n == 0) throw std::invalid_argument("p_nk_evaluate needs at least one root");
    std::vector<int> j(n, 0);
    const unsigned uk = static_cast<unsigned>(k);
    Cyclotomic product(1L);
    for (;;) {
        budget.spend();
        Cyclotomic sum;
        for (std::size_t i = 0; i < n; ++i)
            sum += Cyclotomic::root_of_unity(uk, j[i]) * roots[i];
        product = product * sum;
        std::size_t i = n;
        bool wrapped = true;
        while (i > 0) {
            --i;
            if (++j[i] < k) {
                wrapped = false;
                break;
            }
            j[i] = 0;
        }
        if (wrapped) return product;
    }
}

inline PnkResult p_nk_vanishes(const std::vector<Cyclotomic>& roots, int k) {
    Budget b(default_budget());
    return p_nk_vanishes(roots, k, b);
}
inline Cyclotomic p_nk_evaluate(const std::vector<Cyclotomic>& roots, int k) {
    Budget b(default_budget());
    return p_nk_evaluate(roots, k, b);
}

// ---- reports -----------------------------------------------------------------

struct PairVerdict {
    int level = 0;                       // the cut L
    std::vector<int> component;          // Y, as sorted vertex ids
    Tri verdict = Tri::unknown;
    std::string satisfied_case;          // "i".."v"; empty if violated or unknown
    std::vector<int> cut_edges;          // edges joining Y to the cut level, sorted
    // Witness data. Case iii: twist_level = level of the inconsistent
    // horizontal component, twist_offsets = its forced offsets. Case iv:
    // twist_level = K, twist_offsets = exponents on the searched edge set E.
    // Case v: root_exponents = the vanishing tuple over cut_edges.
    std::optional<int> twist_level;
    std::map<int, int> twist_offsets;
    std::vector<int> root_exponents;
    std::vector<std::string> all_cases;  // filled only in report-all mode
};

struct GrcReport {
    Tri verdict = Tri::unknown;  // conjunction over pairs
    std::vector<PairVerdict> pairs;
};

namespace detail {

inline std::vector<int> edges_into_level(const TwistedDifferential& t, const std::vector<int>& y,
                                         int level) {
    std::set<int> in_y(y.begin(), y.end());
    std::vector<int> out;
    for (const Edge& e : t.graph.edges())
        if (in_y.count(e.v_plus) && !t.graph.is_horizontal(e) && t.graph.level_of(e.v_minus) == level)
            out.push_back(e.id);
    return out;
}

// Levels occupied by Y, descending.
inline std::vector<int> levels_of(const TwistedDifferential& t, const std::vector<int>& y) {
    std::set<int, std::greater<int>> ls;
    for (int v : y) ls.insert(t.graph.level_of(v));
    return {ls.begin(), ls.end()};
}

// Case iii probe: the horizontal-subgraph components of Y whose forced-offset
// cover has fewer than k components, i.e. where no global rotation of the
// chosen abelian roots makes all horizontal residues match.
inline std::optional<std::pair<std::vector<int>, std::map<int, int>>> horizontal_twist(
    const TwistedDifferential& t, const std::vector<int>& y, const std::map<int, int>& forced) {
    auto hcomps = t.graph.components(
        y, [&](const Edge& e) { return t.graph.is_horizontal(e); });
    for (auto& comp : hcomps) {
        std::set<int> in_comp(comp.begin(), comp.end());
        std::map<int, int> local;
        bool any = false;
        for (const Edge& e : t.graph.edges())
            if (t.graph.is_horizontal(e) && in_comp.count(e.v_plus) && in_comp.count(e.v_minus)) {
                local.emplace(e.id, forced.at(e.id));
                any = true;
            }
        if (!any) continue;
        CopyCover cover(t.graph, t.k, comp, local);
        if (cover.component_count() < t.k) return std::make_pair(comp, local);
    }
    return std::nullopt;
}

// Case iv probe at one candidate level K. E is the set of vertical edges of Y
// whose lower end sits at level K; everything above K is glued straight
// (offset 0 on verticals, forced offsets on horizontals). A candidate K only
// qualifies if that straight gluing really gives k disjoint copies over every
// component T of Y_{>K}; a twist living strictly above K belongs to a higher
// cut, where the search variables can express it.
struct VerticalTwist {
    std::map<int, int> offsets;  // exponents on E
};

inline std::optional<VerticalTwist> vertical_twist_at(const TwistedDifferential& t,
                                                      const std::vector<int>& y, int level_k,
                                                      const std::map<int, int>& forced,
                                                      Budget& budget) {
    const LevelGraph& g = t.graph;
    const int k = t.k;
    std::set<int> in_y(y.begin(), y.end());

    std::vector<int> at_or_above, above;
    for (int v : y) {
        if (g.level_of(v) >= level_k) at_or_above.push_back(v);
        if (g.level_of(v) > level_k) above.push_back(v);
    }

    std::vector<int> e_set;  // vertical edges of Y, lower end at level K
    std::map<int, int> straight = forced;  // offsets for everything except E
    for (const Edge& e : g.edges()) {
        if (!in_y.count(e.v_plus) || !in_y.count(e.v_minus)) continue;
        if (g.is_horizontal(e)) continue;
        if (g.level_of(e.v_minus) == level_k && g.level_of(e.v_plus) > level_k)
            e_set.push_back(e.id);
        else
            straight.emplace(e.id, 0);
    }

    auto t_comps = g.components(above, [](const Edge&) { return true; });
    for (auto& tc : t_comps) {
        CopyCover tcover(g, k, tc, straight);
        if (tcover.component_count() != k) return std::nullopt;  // premise fails; skip this K
    }

    int c = static_cast<int>(
        g.components(at_or_above, [](const Edge&) { return true; }).size());

    // Coherent roots for the cancellation sums, per component T of Y_{>K}.
    std::map<int, int> top_comp_of;  // vertex -> index of its T
    for (std::size_t i = 0; i < t_comps.size(); ++i)
        for (int v : t_comps[i]) top_comp_of[v] = static_cast<int>(i);

    std::vector<int> digits(e_set.size(), 0);
    const unsigned uk = static_cast<unsigned>(k);
    for (;;) {
        budget.spend();
        std::vector<Cyclotomic> sums(t_comps.size());
        for (std::size_t i = 0; i < e_set.size(); ++i) {
            const Edge& e = g.edge(e_set[i]);
            sums[static_cast<std::size_t>(top_comp_of.at(e.v_plus))] +=
                Cyclotomic::root_of_unity(uk, digits[i]) * t.minus_root(e);
        }
        bool cancels = true;
        for (const Cyclotomic& s : sums)
            if (!s.is_zero()) cancels = false;
        if (cancels) {
            std::map<int, int> offsets = straight;
            for (std::size_t i = 0; i < e_set.size(); ++i) offsets[e_set[i]] = digits[i];
            CopyCover cover(g, k, at_or_above, offsets);
            if (cover.component_count() < k * c) {
                VerticalTwist w;
                for (std::size_t i = 0; i < e_set.size(); ++i) w.offsets[e_set[i]] = digits[i];
                return w;
            }
        }
        std::size_t i = e_set.size();
        bool wrapped = true;
        while (i > 0) {
            --i;
            if (++digits[i] < k) {
                wrapped = false;
                break;
            }
            digits[i] = 0;
        }
        if (wrapped) return std::nullopt;
    }
}

}  // namespace detail

// ---- the direct condition ----------------------------------------------------

// Case analysis per (level, component) pair, first satisfied case reported:
//   i    a marked pole sits inside Y;
//   ii   some vertex of Y is not a full k-th power;
//   iii  the horizontal matching inside Y cannot be rotated consistent;
//   iv   some cut K > L admits offsets that cancel per top component while
//        genuinely entangling the k copies;
//   v    the roots at the edges into the cut level admit a vanishing
//        combination of k-th roots.
// A pair with none of these is a genuine violation. Budget exhaustion during
// the iv/v searches leaves the pair (and the overall verdict) indeterminate.
inline GrcReport check_condition_4(const TwistedDifferential& t, Budget& budget,
                                   bool report_all_cases = false) {
    GrcReport report;
    bool any_unknown = false, any_violated = false;

    std::map<int, int> forced = forced_horizontal_offsets(t);
    for (const BoundaryPair& bp : boundary_pairs(t)) {
        PairVerdict pv;
        pv.level = bp.level;
        pv.component = bp.component;
        pv.cut_edges = detail::edges_into_level(t, bp.component, bp.level);
        try {
            auto decide = [&](PairVerdict& out) {
                std::vector<std::string> found;
                bool pole = false, partial = false;
                for (int v : bp.component) {
                    if (t.has_marked_pole(v)) pole = true;
                    if (!t.full_power(v)) partial = true;
                }
                if (pole) found.push_back("i");
                if (partial) found.push_back("ii");
                if (!partial) {
                    bool have_iii = false;
                    if (report_all_cases || found.empty()) {
                        if (auto h = detail::horizontal_twist(t, bp.component, forced)) {
                            have_iii = true;
                            found.push_back("iii");
                            out.twist_level = t.graph.level_of(h->first.front());
                            out.twist_offsets = h->second;
                        }
                    }
                    // iv presumes the horizontal matching is solvable; never
                    // probe it once iii has fired.
                    if (!have_iii && (report_all_cases || found.empty())) {
                        for (int cut : detail::levels_of(t, bp.component)) {
                            if (cut <= bp.level) continue;
                            if (auto w = detail::vertical_twist_at(t, bp.component, cut,
                                                                   forced, budget)) {
                                found.push_back("iv");
                                out.twist_level = cut;
                                out.twist_offsets = w->offsets;
                                break;
                            }
                        }
                    }
                    if (report_all_cases || found.empty()) {
                        std::vector<Cyclotomic> roots;
                        for (int id : out.cut_edges) roots.push_back(t.minus_root(t.graph.edge(id)));
                        PnkResult p = p_nk_vanishes(roots, t.k, budget);
                        if (p.vanishes) {
                            found.push_back("v");
                            out.root_exponents = p.exponents;
                        }
                    }
                }
                out.all_cases = found;
                if (!found.empty()) {
                    out.satisfied_case = found.front();
                    out.verdict = Tri::yes;
                } else {
                    out.verdict = Tri::no;
                }
            };
            decide(pv);
            if (!report_all_cases) pv.all_cases.clear();
        } catch (const BudgetExceeded&) {
            pv.verdict = Tri::unknown;
            pv.satisfied_case.clear();
        }
        if (pv.verdict == Tri::no) any_violated = true;
        if (pv.verdict == Tri::unknown) any_unknown = true;
        report.pairs.push_back(std::move(pv));
    }
    report.verdict = any_violated ? Tri::no : (any_unknown ? Tri::unknown : Tri::yes);
    return report;
}

inline GrcReport check_condition_4(const TwistedDifferential& t) {
    Budget b(default_budget());
    return check_condition_4(t, b);
}

// The classical residue condition, stated for k = 1 only: a pair is exempt
// when Y carries a marked pole, and otherwise requires the plain sum of the
// residues at the edges into the cut level to vanish.
inline GrcReport check_4ab(const TwistedDifferential& t) {
    if (t.k != 1) throw std::invalid_argument("check_4ab applies to k = 1 instances");
    GrcReport report;
    bool any_violated = false;
    for (const BoundaryPair& bp : boundary_pairs(t)) {
        PairVerdict pv;
        pv.level = bp.level;
        pv.component = bp.component;
        pv.cut_edges = detail::edges_into_level(t, bp.component, bp.level);
        bool pole = false;
        for (int v : bp.component)
            if (t.has_marked_pole(v)) pole = true;
        if (pole) {
            pv.verdict = Tri::yes;
            pv.satisfied_case = "i";
        } else {
            Cyclotomic sum;
            for (int id : pv.cut_edges) sum += t.minus_root(t.graph.edge(id));
            if (sum.is_zero()) {
                pv.verdict = Tri::yes;
                pv.satisfied_case = "v";
                pv.root_exponents.assign(pv.cut_edges.size(), 0);
            } else {
                pv.verdict = Tri::no;
                any_violated = true;
            }
        }
        report.pairs.push_back(std::move(pv));
    }
    report.verdict = any_violated ? Tri::no : Tri::yes;
    return report;
}

// ---- the cover condition -----------------------------------------------------

struct CoverSearchResult {
    Tri verdict = Tri::unknown;
    std::optional<std::map<int, int>> witness;  // full offset assignment
    long long assignments_tried = 0;
};

// One offset assignment against one pair: exempt unless every vertex of Y is
// a full power and pole-free; exempt when the cover over Y entangles copies;
// otherwise the k copies each impose an exact residue sum over the down-edges.
inline bool cover_pair_satisfied(const TwistedDifferential& t, const BoundaryPair& bp,
                                 const std::vector<int>& cut_edges,
                                 const std::map<int, int>& offsets) {
    if (!bp.pure) return true;
    const int k = t.k;
    CopyCover cover(t.graph, k, bp.component, offsets);
    if (cover.component_count() < k) return true;
    std::vector<Cyclotomic> sums(static_cast<std::size_t>(k));
    const unsigned uk = static_cast<unsigned>(k);
    for (int id : cut_edges) {
        const Edge& e = t.graph.edge(id);
        Cyclotomic root = t.minus_root(e);
        for (int j = 0; j < k; ++j)
            sums[static_cast<std::size_t>(cover.component_of(e.v_plus, j))] +=
                Cyclotomic::root_of_unity(uk, j + offsets.at(id)) * root;
    }
    for (const Cyclotomic& s : sums)
        if (!s.is_zero()) return false;
    return true;
}

inline bool verify_cover_witness(const TwistedDifferential& t, const std::map<int, int>& offsets) {
    for (const BoundaryPair& bp : boundary_pairs(t)) {
        std::vector<int> cut = detail::edges_into_level(t, bp.component, bp.level);
        if (!cover_pair_satisfied(t, bp, cut, offsets)) return false;
    }
    return true;
}

// Search over normalized-cover gluings: true iff some offset assignment
// satisfies every pair's condition upstairs.
inline CoverSearchResult check_condition_4hat(const TwistedDifferential& t, Budget& budget) {
    CoverSearchResult result;
    std::vector<BoundaryPair> pairs = boundary_pairs(t);
    std::vector<std::vector<int>> cuts;
    for (const BoundaryPair& bp : pairs)
        cuts.push_back(detail::edges_into_level(t, bp.component, bp.level));

    try {
        for (OffsetAssignments it(t, cover_enumeration(t)); !it.done(); it.next()) {
            budget.spend();
            ++result.assignments_tried;
            bool ok = true;
            for (std::size_t i = 0; i < pairs.size() && ok; ++i)
                ok = cover_pair_satisfied(t, pairs[i], cuts[i], it.offsets());
            if (ok) {
                result.verdict = Tri::yes;
                result.witness = it.offsets();
                return result;
            }
        }
        result.verdict = Tri::no;
    } catch (const BudgetExceeded&) {
        result.verdict = Tri::unknown;
    }
    return result;
}

inline CoverSearchResult check_condition_4hat(const TwistedDifferential& t) {
    Budget b(default_budget());
    return check_condition_4hat(t, b);
}

// Re-verification of a direct-route witness, used by tests and report
// consumers. Cases i-iii recompute cheaply; iv and v substitute the stored
// witness back into their defining equations.
inline bool verify_pair_witness(const TwistedDifferential& t, const PairVerdict& pv) {
    if (pv.verdict != Tri::yes) return false;
    std::set<int> in_y(pv.component.begin(), pv.component.end());
    if (pv.satisfied_case == "i") {
        for (int v : pv.component)
            if (t.has_marked_pole(v)) return true;
        return false;
    }
    if (pv.satisfied_case == "ii") {
        for (int v : pv.component)
            if (!t.full_power(v)) return true;
        return false;
    }
    if (pv.satisfied_case == "iii") {
        if (!pv.twist_level) return false;
        std::vector<int> comp;
        std::set<int> touched;
        for (auto& [id, o] : pv.twist_offsets) {
            const Edge& e = t.graph.edge(id);
            if (Cyclotomic::root_of_unity(static_cast<unsigned>(t.k), o) * *e.root_minus !=
                -*e.root_plus)
                return false;
            touched.insert(e.v_plus);
            touched.insert(e.v_minus);
        }
        comp.assign(touched.begin(), touched.end());
        CopyCover cover(t.graph, t.k, comp, pv.twist_offsets);
        return cover.component_count() < t.k;
    }
    if (pv.satisfied_case == "iv") {
        if (!pv.twist_level) return false;
        // Rebuild the straight gluing and substitute the witness offsets.
        const LevelGraph& g = t.graph;
        const int k = t.k;
        const int cut = *pv.twist_level;
        std::vector<int> at_or_above, above;
        for (int v : pv.component) {
            if (g.level_of(v) >= cut) at_or_above.push_back(v);
            if (g.level_of(v) > cut) above.push_back(v);
        }
        std::map<int, int> offsets = forced_horizontal_offsets(t);
        for (const Edge& e : g.edges()) {
            if (!in_y.count(e.v_plus) || !in_y.count(e.v_minus) || g.is_horizontal(e)) continue;
            if (g.level_of(e.v_minus) == cut && g.level_of(e.v_plus) > cut) {
                auto it = pv.twist_offsets.find(e.id);
                if (it == pv.twist_offsets.end()) return false;
                offsets.emplace(e.id, it->second);
            } else {
                offsets.emplace(e.id, 0);
            }
        }
        auto t_comps = g.components(above, [](const Edge&) { return true; });
        std::map<int, int> top_comp_of;
        for (std::size_t i = 0; i < t_comps.size(); ++i)
            for (int v : t_comps[i]) top_comp_of[v] = static_cast<int>(i);
        std::vector<Cyclotomic> sums(t_comps.size());
        for (auto& [id, o] : pv.twist_offsets) {
            const Edge& e = g.edge(id);
            sums[static_cast<std::size_t>(top_comp_of.at(e.v_plus))] +=
                Cyclotomic::root_of_unity(static_cast<unsigned>(k), o) * t.minus_root(e);
        }
        for (const Cyclotomic& s : sums)
            if (!s.is_zero()) return false;
        int c = static_cast<int>(
            g.components(at_or_above, [](const Edge&) { return true; }).size());
        CopyCover cover(g, k, at_or_above, offsets);
        return cover.component_count() < k * c;
    }
    if (pv.satisfied_case == "v") {
        if (pv.root_exponents.size() != pv.cut_edges.size()) return false;
        Cyclotomic sum;
        for (std::size_t i = 0; i < pv.cut_edges.size(); ++i)
            sum += Cyclotomic::root_of_unity(static_cast<unsigned>(t.k), pv.root_exponents[i]) *
                   t.minus_root(t.graph.edge(pv.cut_edges[i]));
        return sum.is_zero();
    }
    return false;
}

}  // namespace kdiff
