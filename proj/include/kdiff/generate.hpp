#pragma once

// Instance generation for sweeps. Orders, levels and marked points are solved
// by construction (the per-vertex degree identity fixes the marked orders), so
// every emitted instance already satisfies the matching conditions; residue
// roots are drawn from a palette and filtered through validate(), which is
// where the abelian residue theorem can still reject a candidate.
//
// Exhaustive mode walks graph shapes in increasing size (vertices + edges),
// interleaving cells so small instances of every shape appear early, and takes
// a deterministic spread of decorations per shape rather than the full
// decoration space (which is astronomically larger than any useful sweep).
// Random mode draws everything from a seeded generator. Both are reproducible:
// no global state, no wall clock, no distribution objects with unspecified
// internals.

#include <kdiff/twisted.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace kdiff {

struct GeneratorParams {
    int max_vertices = 4;
    int max_edges = 5;
    std::vector<int> ks = {2};
    std::vector<Cyclotomic> palette;  // empty: default_palette(k) per k

    int per_cell_cap = 600;        // exhaustive: instances per (vertices, edges, k) cell
    int decorations_per_shape = 4; // exhaustive: instances per level/edge shape
    int samples_per_combo = 2;     // exhaustive: spread draws per discrete decoration
    std::uint64_t seed = 1;        // random mode
};

// false from the sink stops generation.
using InstanceSink = std::function<bool(const TwistedDifferential&)>;

inline std::vector<Cyclotomic> default_palette(int k) {
    std::vector<Cyclotomic> out;
    auto push = [&](const Cyclotomic& c) {
        for (const Cyclotomic& have : out)
            if (have == c) return;
        out.push_back(c);
    };
    push(Cyclotomic());
    push(Cyclotomic(1L));
    push(Cyclotomic(-1L));
    push(Cyclotomic::root_of_unity(static_cast<unsigned>(k), 1));
    push(Cyclotomic(1L) + Cyclotomic::root_of_unity(static_cast<unsigned>(k), 1));
    return out;
}

namespace detail {

// depth[i] = levels below the top; level = -depth. Usable vectors reach depth
// 0 and skip no intermediate depth.
inline bool depths_normalized(const std::vector<int>& depth) {
    int deepest = 0;
    for (int d : depth) deepest = std::max(deepest, d);
    std::vector<char> seen(static_cast<std::size_t>(deepest) + 1, 0);
    for (int d : depth) seen[static_cast<std::size_t>(d)] = 1;
    for (char s : seen)
        if (!s) return false;
    return true;
}

inline bool pairs_connect(int nv, const std::vector<std::pair<int, int>>& pairs) {
    std::vector<int> parent(static_cast<std::size_t>(nv));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (auto [a, b] : pairs) parent[static_cast<std::size_t>(find(a))] = find(b);
    int root = find(0);
    for (int v = 1; v < nv; ++v)
        if (find(v) != root) return false;
    return true;
}

// A shape: k, levels, and oriented edge slots. Decorations get layered on top.
struct Shape {
    int k = 1;
    int nv = 0;
    std::vector<int> depth;                      // per vertex
    std::vector<std::pair<int, int>> ends;       // per edge: (v_plus, v_minus)
    std::vector<char> horizontal;                // per edge
};

inline Shape make_shape(int k, const std::vector<int>& depth,
                        const std::vector<std::pair<int, int>>& pairs) {
    Shape s;
    s.k = k;
    s.nv = static_cast<int>(depth.size());
    s.depth = depth;
    for (auto [a, b] : pairs) {
        bool hor = depth[static_cast<std::size_t>(a)] == depth[static_cast<std::size_t>(b)];
        int plus = a, minus = b;
        if (depth[static_cast<std::size_t>(a)] > depth[static_cast<std::size_t>(b)]) std::swap(plus, minus);
        s.ends.emplace_back(plus, minus);
        s.horizontal.push_back(hor ? 1 : 0);
    }
    return s;
}

// Discrete decoration: per vertical edge a plus order, per vertex a genus and
// a marked-point pattern. These determine the local orders, hence which power
// divisors are admissible and which half-edges carry root slots.
struct Discrete {
    std::vector<int> order_plus;  // per edge; -k at horizontal slots
    std::vector<int> genus;       // per vertex
    std::vector<int> mark_mode;   // per vertex: 0 plain, 1 unit pole, 2 order-k pole
};

inline std::vector<int> plus_order_menu(int k) {
    std::vector<int> menu = {0, 1, k};
    std::sort(menu.begin(), menu.end());
    menu.erase(std::unique(menu.begin(), menu.end()), menu.end());
    return menu;
}

inline int mark_mode_count(int k) { return k == 1 ? 2 : 3; }

// Marked orders for one vertex: fill the degree identity, then pad with
// ordinary points until stable.
inline std::vector<int> marked_orders(const Shape& s, const Discrete& d, int vertex) {
    int k = s.k;
    long half_edge_sum = 0;
    int degree = 0;
    for (std::size_t e = 0; e < s.ends.size(); ++e) {
        if (s.ends[e].first == vertex) {
            half_edge_sum += d.order_plus[e];
            ++degree;
        }
        if (s.ends[e].second == vertex) {
            half_edge_sum += -2 * k - d.order_plus[e];
            ++degree;
        }
    }
    long target = static_cast<long>(k) * (2 * d.genus[static_cast<std::size_t>(vertex)] - 2);
    long m = target - half_edge_sum;
    std::vector<int> marks;
    switch (d.mark_mode[static_cast<std::size_t>(vertex)]) {
        case 0:
            if (m != 0) marks.push_back(static_cast<int>(m));
            break;
        case 1:
            marks.push_back(static_cast<int>(m + 1));
            marks.push_back(-1);
            break;
        default:
            marks.push_back(static_cast<int>(m + k));
            marks.push_back(-k);
            break;
    }
    while (2 * d.genus[static_cast<std::size_t>(vertex)] - 2 + degree +
               static_cast<int>(marks.size()) <=
           0)
        marks.push_back(0);
    return marks;
}

inline std::vector<int> divisors_descending(int n) {
    std::vector<int> out;
    for (int d = n; d >= 1; --d)
        if (n % d == 0) out.push_back(d);
    return out;
}

// Root-slot layout for one discrete decoration. Digits, in order: one divisor
// choice per vertex, then per edge either (nonzero palette, offset) for a
// horizontal slot or (full palette) for a divisible vertical minus slot.
struct SlotLayout {
    std::vector<std::vector<int>> divisor_menu;  // per vertex
    std::vector<std::vector<int>> marks;         // per vertex
    std::vector<int> radices;                    // mixed-radix decoration space
};

inline SlotLayout slot_layout(const Shape& s, const Discrete& d, int nonzero_palette,
                              int full_palette) {
    SlotLayout layout;
    layout.marks.resize(static_cast<std::size_t>(s.nv));
    for (int v = 0; v < s.nv; ++v) {
        layout.marks[static_cast<std::size_t>(v)] = marked_orders(s, d, v);
        int g = s.k;
        for (int m : layout.marks[static_cast<std::size_t>(v)]) g = std::gcd(g, std::abs(m));
        for (std::size_t e = 0; e < s.ends.size(); ++e) {
            if (s.ends[e].first == v) g = std::gcd(g, std::abs(d.order_plus[e]));
            if (s.ends[e].second == v) g = std::gcd(g, std::abs(-2 * s.k - d.order_plus[e]));
        }
        if (g == 0) g = s.k;
        layout.divisor_menu.push_back(divisors_descending(g));
        layout.radices.push_back(static_cast<int>(layout.divisor_menu.back().size()));
    }
    for (std::size_t e = 0; e < s.ends.size(); ++e) {
        if (s.horizontal[e]) {
            layout.radices.push_back(nonzero_palette);
            layout.radices.push_back(s.k);  // offset j in root_plus = -zeta^j root_minus
        } else if ((-2 * s.k - d.order_plus[e]) % s.k == 0) {
            layout.radices.push_back(full_palette);
        }
    }
    return layout;
}

inline TwistedDifferential assemble(const Shape& s, const Discrete& d, const SlotLayout& layout,
                                    const std::vector<int>& digits,
                                    const std::vector<Cyclotomic>& palette,
                                    const std::vector<Cyclotomic>& nonzero) {
    const int k = s.k;
    std::size_t digit = 0;

    std::map<int, int> divisor;
    for (int v = 0; v < s.nv; ++v)
        divisor[v] = layout.divisor_menu[static_cast<std::size_t>(v)]
                                        [static_cast<std::size_t>(digits[digit++])];

    std::vector<Vertex> vertices;
    for (int v = 0; v < s.nv; ++v) {
        Vertex out;
        out.id = v;
        out.genus = d.genus[static_cast<std::size_t>(v)];
        out.level = -s.depth[static_cast<std::size_t>(v)];
        for (int m : layout.marks[static_cast<std::size_t>(v)]) out.marked.push_back({m, {}});
        vertices.push_back(std::move(out));
    }

    std::vector<Edge> edges;
    for (std::size_t e = 0; e < s.ends.size(); ++e) {
        Edge out;
        out.id = static_cast<int>(e);
        out.v_plus = s.ends[e].first;
        out.v_minus = s.ends[e].second;
        if (s.horizontal[e]) {
            out.order_plus = out.order_minus = -k;
            const Cyclotomic& r = nonzero[static_cast<std::size_t>(digits[digit++])];
            int j = digits[digit++];
            out.root_minus = r;
            out.root_plus = -(Cyclotomic::root_of_unity(static_cast<unsigned>(k), j) * r);
        } else {
            out.order_plus = d.order_plus[e];
            out.order_minus = -2 * k - d.order_plus[e];
            if (out.order_minus % k == 0)
                out.root_minus = palette[static_cast<std::size_t>(digits[digit++])];
        }
        edges.push_back(std::move(out));
    }

    return TwistedDifferential(k, LevelGraph(std::move(vertices), std::move(edges)),
                               std::move(divisor));
}

inline long long radix_product(const std::vector<int>& radices, long long clamp) {
    long long t = 1;
    for (int r : radices) {
        t *= r;
        if (t >= clamp) return clamp;
    }
    return t;
}

inline std::vector<int> decode_mixed(long long m, const std::vector<int>& radices) {
    std::vector<int> digits(radices.size(), 0);
    for (std::size_t i = radices.size(); i-- > 0;) {
        digits[i] = static_cast<int>(m % radices[i]);
        m /= radices[i];
    }
    return digits;
}

// Emits up to `shape_cap` validated instances for one shape; false from the sink
// aborts everything.
inline bool emit_shape(const Shape& s, const GeneratorParams& params,
                       const std::vector<Cyclotomic>& palette,
                       const std::vector<Cyclotomic>& nonzero, int shape_cap, int& emitted_cell,
                       const InstanceSink& sink) {
    const auto plus_menu = plus_order_menu(s.k);
    const int modes = mark_mode_count(s.k);

    int vertical = 0;
    for (char h : s.horizontal)
        if (!h) ++vertical;

    std::vector<int> ab_radices;
    for (int e = 0; e < vertical; ++e) ab_radices.push_back(static_cast<int>(plus_menu.size()));
    for (int v = 0; v < s.nv; ++v) ab_radices.push_back(2);      // genus
    for (int v = 0; v < s.nv; ++v) ab_radices.push_back(modes);  // marks

    long long ab_total = radix_product(ab_radices, 1 << 16);
    int emitted_shape = 0;

    for (long long ab = 0; ab < ab_total; ++ab) {
        std::vector<int> ab_digits = decode_mixed(ab, ab_radices);
        Discrete d;
        std::size_t pos = 0;
        for (std::size_t e = 0; e < s.ends.size(); ++e)
            d.order_plus.push_back(s.horizontal[e] ? -s.k
                                                   : plus_menu[static_cast<std::size_t>(
                                                       ab_digits[pos++])]);
        for (int v = 0; v < s.nv; ++v) d.genus.push_back(ab_digits[pos++]);
        for (int v = 0; v < s.nv; ++v) d.mark_mode.push_back(ab_digits[pos++]);

        SlotLayout layout = slot_layout(s, d, static_cast<int>(nonzero.size()),
                                        static_cast<int>(palette.size()));
        long long total = radix_product(layout.radices, 1LL << 40);

        std::set<long long> tried;
        int samples = std::max(1, params.samples_per_combo);
        for (int q = 0; q < samples; ++q) {
            long long base = total <= samples ? q : q * (total / samples);
            if (base >= total) break;
            // probe forward from the spread point until something validates
            for (long long probe = 0; probe < 32 && base + probe < total; ++probe) {
                long long m = base + probe;
                if (!tried.insert(m).second) continue;
                TwistedDifferential t =
                    assemble(s, d, layout, decode_mixed(m, layout.radices), palette, nonzero);
                if (!validate(t).ok()) continue;
                if (!sink(t)) return false;
                ++emitted_shape;
                ++emitted_cell;
                break;
            }
            if (emitted_shape >= shape_cap || emitted_cell >= params.per_cell_cap) return true;
        }
        if (emitted_shape >= shape_cap || emitted_cell >= params.per_cell_cap) return true;
    }
    return true;
}

inline bool emit_cell(int k, int nv, int ne, const GeneratorParams& params,
                      const InstanceSink& sink) {
    std::vector<Cyclotomic> palette =
        params.palette.empty() ? default_palette(k) : params.palette;
    std::vector<Cyclotomic> nonzero;
    for (const Cyclotomic& c : palette)
        if (!c.is_zero()) nonzero.push_back(c);
    if (nonzero.empty()) nonzero.push_back(Cyclotomic(1L));

    std::vector<std::pair<int, int>> all_pairs;
    for (int a = 0; a < nv; ++a)
        for (int b = a; b < nv; ++b) all_pairs.emplace_back(a, b);

    int emitted_cell = 0;

    // depth vectors, then edge multisets as non-decreasing index sequences
    std::vector<int> depth(static_cast<std::size_t>(nv), 0);
    for (;;) {
        if (depths_normalized(depth)) {
            std::vector<int> pick(static_cast<std::size_t>(ne), 0);
            for (;;) {
                std::vector<std::pair<int, int>> pairs;
                for (int c : pick) pairs.push_back(all_pairs[static_cast<std::size_t>(c)]);
                if (ne == 0 ? nv == 1 : pairs_connect(nv, pairs)) {
                    Shape s = make_shape(k, depth, pairs);
                    if (!emit_shape(s, params, palette, nonzero, params.decorations_per_shape,
                                    emitted_cell, sink))
                        return false;
                    if (emitted_cell >= params.per_cell_cap) return true;
                }
                // next non-decreasing sequence over all_pairs
                if (ne == 0) break;
                std::size_t i = pick.size();
                while (i > 0) {
                    --i;
                    if (pick[i] + 1 < static_cast<int>(all_pairs.size())) {
                        ++pick[i];
                        for (std::size_t j = i + 1; j < pick.size(); ++j) pick[j] = pick[i];
                        break;
                    }
                    if (i == 0) goto pairs_done;
                }
            }
        pairs_done:;
        }
        // next depth vector
        std::size_t i = depth.size();
        bool wrapped = true;
        while (i > 0) {
            --i;
            if (++depth[i] < nv) {
                wrapped = false;
                break;
            }
            depth[i] = 0;
        }
        if (wrapped) return true;
    }
}

}  // namespace detail

// Cells ordered by total size so every shape family contributes early; within
// a cell, shapes in lexicographic order with a capped decoration spread each.
inline void generate_exhaustive(const GeneratorParams& params, const InstanceSink& sink) {
    for (int size = 1; size <= params.max_vertices + params.max_edges; ++size)
        for (int nv = 1; nv <= params.max_vertices && nv <= size; ++nv) {
            int ne = size - nv;
            if (ne > params.max_edges || ne < nv - 1) continue;
            for (int k : params.ks)
                if (!detail::emit_cell(k, nv, ne, params, sink)) return;
        }
}

// Seeded draws; modulo bias is irrelevant here and keeps the stream portable.
inline void generate_random(const GeneratorParams& params, long long count,
                            const InstanceSink& sink) {
    std::mt19937_64 rng(params.seed);
    auto draw = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };

    long long produced = 0;
    while (produced < count) {
        bool emitted = false;
        for (int attempt = 0; attempt < 500 && !emitted; ++attempt) {
            int k = params.ks[static_cast<std::size_t>(draw(static_cast<int>(params.ks.size())))];
            std::vector<Cyclotomic> palette =
                params.palette.empty() ? default_palette(k) : params.palette;
            std::vector<Cyclotomic> nonzero;
            for (const Cyclotomic& c : palette)
                if (!c.is_zero()) nonzero.push_back(c);
            if (nonzero.empty()) nonzero.push_back(Cyclotomic(1L));

            int nv = 1 + draw(params.max_vertices);
            if (nv - 1 > params.max_edges) continue;
            int ne = nv - 1 + draw(params.max_edges - (nv - 1) + 1);

            std::vector<int> depth(static_cast<std::size_t>(nv));
            for (int& d : depth) d = draw(nv);
            // renumber depths to a contiguous range starting at 0
            std::vector<int> distinct(depth.begin(), depth.end());
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
            for (int& d : depth)
                d = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), d) -
                                     distinct.begin());

            std::vector<std::pair<int, int>> pairs;
            for (int e = 0; e < ne; ++e) {
                int a = draw(nv), b = draw(nv);
                pairs.emplace_back(std::min(a, b), std::max(a, b));
            }
            if (!(ne == 0 ? nv == 1 : detail::pairs_connect(nv, pairs))) continue;

            detail::Shape s = detail::make_shape(k, depth, pairs);
            const auto plus_menu = detail::plus_order_menu(k);
            detail::Discrete d;
            for (std::size_t e = 0; e < s.ends.size(); ++e)
                d.order_plus.push_back(
                    s.horizontal[e] ? -k
                                    : plus_menu[static_cast<std::size_t>(
                                          draw(static_cast<int>(plus_menu.size())))]);
            for (int v = 0; v < nv; ++v) d.genus.push_back(draw(2));
            for (int v = 0; v < nv; ++v) d.mark_mode.push_back(draw(detail::mark_mode_count(k)));

            detail::SlotLayout layout = detail::slot_layout(
                s, d, static_cast<int>(nonzero.size()), static_cast<int>(palette.size()));
            std::vector<int> digits;
            for (int r : layout.radices) digits.push_back(draw(r));

            TwistedDifferential t = detail::assemble(s, d, layout, digits, palette, nonzero);
            if (!validate(t).ok()) continue;
            if (!sink(t)) return;
            emitted = true;
        }
        ++produced;  // count attempts groups even when unlucky, so the loop terminates
    }
}

}  // namespace kdiff
