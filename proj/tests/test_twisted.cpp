#include <catch2/catch_amalgamated.hpp>

#include <kdiff/twisted.hpp>

#include <vector>

using namespace kdiff;

namespace {

// Three-level k=2 workhorse: a genus-1 top over a rational middle over a
// genus-1 bottom, two parallel edges down from the top, power divisors
// (2, 2, 1). Roots on the three minus halves are the parameters.
TwistedDifferential three_level(long r1, long r2, long r3) {
    std::vector<Vertex> vs = {
        {1, 1, 0, {}},
        {2, 0, -1, {{4, {}}}},
        {3, 1, -2, {{3, {}}, {1, {}}}},
    };
    std::vector<Edge> es = {
        {1, 1, 2, 0, -4, {}, Cyclotomic(r1)},
        {2, 1, 2, 0, -4, {}, Cyclotomic(r2)},
        {3, 2, 3, 0, -4, {}, Cyclotomic(r3)},
    };
    return TwistedDifferential(2, LevelGraph(vs, es), {{1, 2}, {2, 2}, {3, 1}});
}

// Single-vertex instance: genus and marked orders must satisfy the degree
// identity; callers pick them accordingly.
TwistedDifferential lone(int k, int genus, std::vector<MarkedPoint> marked, int d = 1) {
    std::vector<Vertex> vs = {{1, genus, 0, std::move(marked)}};
    return TwistedDifferential(k, LevelGraph(vs, {}), {{1, d}});
}

}  // namespace

TEST_CASE("constructor rejects bad power divisors") {
    std::vector<Vertex> vs = {{1, 1, 0, {{0, {}}}}};
    LevelGraph g(vs, {});
    REQUIRE_THROWS_AS(TwistedDifferential(0, g, {{1, 1}}), std::invalid_argument);
    REQUIRE_THROWS_AS(TwistedDifferential(2, g, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(TwistedDifferential(2, g, {{1, 0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(TwistedDifferential(6, g, {{1, 4}}), std::invalid_argument);
    REQUIRE_THROWS_AS(TwistedDifferential(2, g, {{1, 2}, {9, 1}}), std::invalid_argument);
    REQUIRE_NOTHROW(TwistedDifferential(6, g, {{1, 3}}));
}

TEST_CASE("root slots read as zero where no k-residue lives") {
    TwistedDifferential t = three_level(0, 0, 1);
    REQUIRE(t.minus_root(t.graph.edge(3)) == Cyclotomic(1));
    REQUIRE(t.plus_root(t.graph.edge(3)).is_zero());  // vertical plus never carries one

    // A stored root at a non-divisible vertical minus half is ignored.
    std::vector<Vertex> vs = {{1, 1, 0, {{3, {}}}}, {2, 1, -1, {{1, {}}}}};
    std::vector<Edge> es = {{1, 1, 2, -3, -1, {}, Cyclotomic(7)}};
    TwistedDifferential odd(2, LevelGraph(vs, es), {{1, 1}, {2, 1}});
    REQUIRE(odd.minus_root(odd.graph.edge(1)).is_zero());
}

TEST_CASE("marked pole detection and divisor queries") {
    TwistedDifferential t = three_level(0, 0, 1);
    REQUIRE(t.d(3) == 1);
    REQUIRE(t.full_power(1));
    REQUIRE_FALSE(t.full_power(3));
    REQUIRE_FALSE(t.has_marked_pole(3));
    TwistedDifferential p = lone(1, 1, {{3, {}}, {-3, {}}});
    REQUIRE(p.has_marked_pole(1));
}

TEST_CASE("baseline instance validates cleanly") {
    auto report = validate(three_level(0, 0, 1));
    REQUIRE(report.ok());
    REQUIRE(report.warnings.empty());
    // The theorem at the middle vertex is live: 1 - 1 = 0 passes, 1 + 1 fails.
    REQUIRE(validate(three_level(1, -1, 1)).ok());
    auto bad = validate(three_level(1, 1, 1));
    REQUIRE_FALSE(bad.ok());
    REQUIRE(bad.has("residue-theorem"));
}

TEST_CASE("structural violations are reported one by one") {
    SECTION("empty") {
        TwistedDifferential t(2, LevelGraph(), {});
        REQUIRE(validate(t).has("empty"));
    }
    SECTION("disconnected") {
        std::vector<Vertex> vs = {{1, 1, 0, {{0, {}}}}, {2, 1, 0, {{0, {}}}}};
        TwistedDifferential t(1, LevelGraph(vs, {}), {{1, 1}, {2, 1}});
        auto r = validate(t);
        REQUIRE(r.has("disconnected"));
        REQUIRE_FALSE(r.has("unstable"));
    }
    SECTION("unstable") {
        auto r = validate(lone(1, 0, {{-2, {}}}));
        REQUIRE(r.has("unstable"));
        REQUIRE(r.violations.size() == 1);
    }
    SECTION("degree") {
        auto r = validate(lone(1, 1, {{1, {}}}));
        REQUIRE(r.has("degree"));
        REQUIRE(r.violations.size() == 1);
    }
    SECTION("power divisor must divide local orders") {
        auto r = validate(lone(2, 1, {{1, {}}, {-1, {}}}, 2));
        REQUIRE(r.has("power-divisor"));
    }
}

TEST_CASE("edge violations") {
    auto pair_graph = [](int k, int order_plus, int order_minus, std::vector<MarkedPoint> m1,
                         std::vector<MarkedPoint> m2) {
        std::vector<Vertex> vs = {{1, 1, 0, std::move(m1)}, {2, 1, -1, std::move(m2)}};
        std::vector<Edge> es = {{1, 1, 2, order_plus, order_minus, {}, {}}};
        return TwistedDifferential(k, LevelGraph(vs, es), {{1, 1}, {2, 1}});
    };

    SECTION("half-edge orders must sum to -2k") {
        auto r = validate(pair_graph(2, 0, -3, {}, {{3, {}}}));
        REQUIRE(r.has("order-sum"));
    }
    SECTION("plus order below -k") {
        auto r = validate(pair_graph(2, -3, -1, {{3, {}}}, {{1, {}}}));
        REQUIRE(r.has("order-range"));
        REQUIRE(r.violations.size() == 1);
    }
    SECTION("order -k exactly at horizontal edges") {
        // Vertical edge wearing the horizontal order.
        auto r = validate(pair_graph(2, -2, -2, {{2, {}}}, {{2, {}}}));
        REQUIRE(r.has("horizontality"));
        // Horizontal edge without it.
        std::vector<Vertex> vs = {{1, 1, 0, {{1, {}}}}, {2, 1, 0, {{3, {}}}}};
        std::vector<Edge> es = {{1, 1, 2, -1, -3, Cyclotomic(1), Cyclotomic(1)}};
        TwistedDifferential t(2, LevelGraph(vs, es), {{1, 1}, {2, 1}});
        REQUIRE(validate(t).has("horizontality"));
    }
    SECTION("vertical divisible minus half needs a root slot") {
        TwistedDifferential t = three_level(0, 0, 1);
        std::vector<Edge> es = t.graph.edges();
        es[2].root_minus.reset();
        TwistedDifferential stripped(2, LevelGraph(t.graph.vertices(), es), t.power_divisor);
        auto r = validate(stripped);
        REQUIRE(r.has("missing-root"));
        REQUIRE(r.violations.size() == 1);
    }
    SECTION("spurious roots") {
        // Nonzero root at a non-divisible vertical minus half.
        auto with_root = [](Cyclotomic plus, Cyclotomic minus) {
            std::vector<Vertex> vs = {{1, 1, 0, {{3, {}}}}, {2, 1, -1, {{1, {}}}}};
            std::vector<Edge> es = {{1, 1, 2, -3, -1, std::move(plus), std::move(minus)}};
            return TwistedDifferential(2, LevelGraph(vs, es), {{1, 1}, {2, 1}});
        };
        REQUIRE(validate(with_root(Cyclotomic(), Cyclotomic(5))).has("spurious-root"));
        REQUIRE(validate(with_root(Cyclotomic(5), Cyclotomic())).has("spurious-root"));
        // Nonzero residue at a non-pole marked point of a full power.
        auto r = validate(lone(2, 1, {{0, Cyclotomic(1)}}, 2));
        REQUIRE(r.has("spurious-root"));
    }
}

TEST_CASE("horizontal roots and the k-residue matching sign") {
    auto flat_pair = [](int k, Cyclotomic rp, Cyclotomic rm, std::optional<Cyclotomic> res1,
                        std::optional<Cyclotomic> res2) {
        std::vector<Vertex> vs = {{1, 1, 0, {{k + 2, {}}, {-2, res1}}},
                                  {2, 1, 0, {{k + 2, {}}, {-2, res2}}}};
        std::vector<Edge> es = {{1, 1, 2, -k, -k, std::move(rp), std::move(rm)}};
        return TwistedDifferential(k, LevelGraph(vs, es), {{1, 1}, {2, 1}});
    };

    SECTION("both halves need nonzero roots") {
        auto r = validate(flat_pair(2, {}, Cyclotomic(1), {}, {}));
        REQUIRE(r.has("missing-root"));
        REQUIRE(validate(flat_pair(2, Cyclotomic(0), Cyclotomic(1), {}, {})).has("missing-root"));
    }
    SECTION("even k matches squares directly") {
        REQUIRE_FALSE(validate(flat_pair(2, Cyclotomic(1), Cyclotomic(-1), {}, {})).has("residue-match"));
        Cyclotomic i = Cyclotomic::root_of_unity(4, 1);
        REQUIRE(validate(flat_pair(2, Cyclotomic(1), i, {}, {})).has("residue-match"));
    }
    SECTION("odd k flips the sign across the node") {
        // k=1 is fully abelian, so pick marked-pole residues that balance the
        // residue theorem at both vertices and isolate the matching check.
        auto ok = flat_pair(1, Cyclotomic(1), Cyclotomic(-1), Cyclotomic(-1), Cyclotomic(1));
        REQUIRE(validate(ok).ok());
        auto bad = flat_pair(1, Cyclotomic(1), Cyclotomic(1), Cyclotomic(-1), Cyclotomic(-1));
        REQUIRE(validate(bad).has("residue-match"));
    }
}

TEST_CASE("residue theorem scope and warnings") {
    SECTION("skipped with a warning when a marked-pole residue is missing") {
        auto r = validate(lone(1, 1, {{2, {}}, {-2, {}}}));
        REQUIRE(r.ok());
        REQUIRE(r.warnings.size() == 1);
    }
    SECTION("enforced once the residue is supplied") {
        REQUIRE(validate(lone(1, 1, {{2, {}}, {-2, Cyclotomic(0)}})).ok());
        auto r = validate(lone(1, 1, {{2, {}}, {-2, Cyclotomic(1)}}));
        REQUIRE(r.has("residue-theorem"));
    }
    SECTION("ignored at partial powers, with a warning") {
        auto r = validate(lone(2, 1, {{2, {}}, {-2, Cyclotomic(1)}}));
        REQUIRE(r.ok());
        REQUIRE(r.warnings.size() == 1);
    }
}

TEST_CASE("type signature") {
    TwistedDifferential t = three_level(0, 0, 1);
    TypeSignature sig = type_signature(t);
    REQUIRE(sig.genus == 3);
    REQUIRE(sig.orders == std::vector<int>{4, 3, 1});
    REQUIRE(sig.count() == 3);
    REQUIRE_THROWS_AS(type_signature(lone(1, 1, {{1, {}}})), std::logic_error);
}

TEST_CASE("gauge transformations preserve validity") {
    TwistedDifferential t = three_level(1, -1, 1);
    REQUIRE(validate(t).ok());

    Cyclotomic c = Cyclotomic(1) + Cyclotomic::root_of_unity(4, 1);
    REQUIRE(validate(scale_all_roots(t, c)).ok());

    // Flipping every slot at the full-power middle vertex keeps the sum zero.
    TwistedDifferential gv = gauge_vertex(t, 2, 1);
    REQUIRE(validate(gv).ok());
    REQUIRE(gv.minus_root(gv.graph.edge(1)) == Cyclotomic(-1));

    // A single slot at the partial-power bottom vertex is free.
    TwistedDifferential gs = gauge_minus_slot(t, 3, 1);
    REQUIRE(validate(gs).ok());
    REQUIRE(gs.minus_root(gs.graph.edge(3)) == Cyclotomic(-1));

    TwistedDifferential rl = relabel_levels(t, [](int l) { return 3 * l - 5; });
    REQUIRE(validate(rl).ok());
    REQUIRE(rl.graph.level_of(1) == -5);
    REQUIRE(rl.graph.level_of(3) == -11);
    REQUIRE(rl.graph.is_horizontal(1) == t.graph.is_horizontal(1));
}
