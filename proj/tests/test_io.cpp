#include <catch2/catch_amalgamated.hpp>

#include <kdiff/grc.hpp>
#include <kdiff/io.hpp>

#include <cstdio>
#include <fstream>
#include <vector>

using namespace kdiff;

namespace {

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

const char* kSample = R"({
  "k": 2,
  "vertices": [
    {"id": 1, "genus": 1, "level": 0, "power_divisor": 2},
    {"id": 2, "genus": 0, "level": -1, "power_divisor": 2, "marked": [{"order": 4}]},
    {"id": 3, "genus": 1, "level": -2, "marked": [{"order": 3}, {"order": 1}]}
  ],
  "edges": [
    {"id": 1, "v_plus": 1, "v_minus": 2, "order_plus": 0, "order_minus": -4, "root_minus": 0},
    {"id": 2, "v_plus": 1, "v_minus": 2, "order_plus": 0, "order_minus": -4, "root_minus": 0},
    {"id": 3, "v_plus": 2, "v_minus": 3, "order_plus": 0, "order_minus": -4, "root_minus": 1}
  ]
})";

}  // namespace

TEST_CASE("cyclotomic values accept every spelling, emit one") {
    REQUIRE(cyc_from_json(json(5), "t") == Cyclotomic(5));
    REQUIRE(cyc_from_json(json("-3/7"), "t") == Cyclotomic(Rational(-3, 7)));
    REQUIRE(cyc_from_json(json("2/4"), "t") == Cyclotomic(Rational(1, 2)));
    REQUIRE(cyc_from_json(json::parse(R"({"N": 4, "coeffs": [0, 1]})"), "t") ==
            Cyclotomic::root_of_unity(4, 1));
    REQUIRE(cyc_from_json(json::parse(R"({"N": 3, "coeffs": [[1, 2], ["1/3", 1]]})"), "t") ==
            Cyclotomic(3, {Rational(1, 2), Rational(1, 3)}));

    SECTION("serialization is canonical and lossless") {
        std::vector<Cyclotomic> palette = {
            Cyclotomic(0),
            Cyclotomic(-17),
            Cyclotomic(Rational(22, 7)),
            Cyclotomic::root_of_unity(4, 1),
            Cyclotomic(1) + Cyclotomic::root_of_unity(3, 2),
            Cyclotomic(Rational("123456789012345678901234567890")),
        };
        for (const Cyclotomic& x : palette) {
            json j = cyc_to_json(x);
            REQUIRE(cyc_from_json(j, "t") == x);
            REQUIRE(cyc_to_json(cyc_from_json(j, "t")).dump() == j.dump());
        }
        // Rational values collapse to scalars, never objects.
        REQUIRE(cyc_to_json(Cyclotomic(3)).is_number_integer());
        REQUIRE(cyc_to_json(Cyclotomic(Rational(1, 2))).is_string());
        REQUIRE(cyc_to_json(Cyclotomic::root_of_unity(4, 1)).is_object());
    }
    SECTION("floats and junk are rejected") {
        REQUIRE_THROWS_AS(cyc_from_json(json(1.5), "t"), ParseError);
        REQUIRE_THROWS_AS(cyc_from_json(json(2.0), "t"), ParseError);
        REQUIRE_THROWS_AS(cyc_from_json(json("elephant"), "t"), ParseError);
        REQUIRE_THROWS_AS(cyc_from_json(json("1/0"), "t"), ParseError);
        REQUIRE_THROWS_AS(cyc_from_json(json::parse(R"({"N": 0, "coeffs": [1]})"), "t"), ParseError);
        REQUIRE_THROWS_AS(cyc_from_json(json::parse(R"({"coeffs": [1]})"), "t"), ParseError);
        REQUIRE_THROWS_AS(cyc_from_json(json::parse(R"({"N": 3, "coeffs": [[1, 0]]})"), "t"),
                          ParseError);
        REQUIRE_THROWS_AS(cyc_from_json(json::parse(R"({"N": 3, "coeffs": [[1, 2, 3]]})"), "t"),
                          ParseError);
        REQUIRE_THROWS_AS(cyc_from_json(json::parse(R"({"N": 3, "coeffs": 7})"), "t"), ParseError);
    }
}

TEST_CASE("instance parsing") {
    TwistedDifferential t = instance_from_json(json::parse(kSample));
    REQUIRE(t.k == 2);
    REQUIRE(t.graph.vertices().size() == 3);
    REQUIRE(t.d(3) == 1);  // power_divisor defaults to 1
    REQUIRE(t.graph.vertex(1).marked.empty());
    REQUIRE(t.minus_root(t.graph.edge(3)) == Cyclotomic(1));
    REQUIRE(validate(t).ok());

    SECTION("k defaults to 1") {
        TwistedDifferential a = instance_from_json(
            json::parse(R"({"vertices": [{"id": 1, "genus": 2, "level": 0}], "edges": []})"));
        REQUIRE(a.k == 1);
        REQUIRE(a.d(1) == 1);
    }
    SECTION("missing required fields") {
        REQUIRE_THROWS_AS(instance_from_json(json::parse(R"({"edges": []})")), ParseError);
        REQUIRE_THROWS_AS(instance_from_json(json::parse(
                              R"({"vertices": [{"id": 1, "level": 0}], "edges": []})")),
                          ParseError);
        REQUIRE_THROWS_AS(
            instance_from_json(json::parse(
                R"({"vertices": [{"id": 1, "genus": 0, "level": 0}],
                    "edges": [{"id": 1, "v_plus": 1, "v_minus": 1, "order_plus": -2}]})")),
            ParseError);
    }
    SECTION("type errors") {
        REQUIRE_THROWS_AS(instance_from_json(json::parse("[]")), ParseError);
        REQUIRE_THROWS_AS(instance_from_json(json::parse(R"({"k": 0, "vertices": [], "edges": []})")),
                          ParseError);
        REQUIRE_THROWS_AS(
            instance_from_json(json::parse(R"({"k": 1.5, "vertices": [], "edges": []})")),
            ParseError);
        REQUIRE_THROWS_AS(
            instance_from_json(json::parse(R"({"k": 1, "vertices": 3, "edges": []})")), ParseError);
    }
    SECTION("structural problems surface from the graph layer") {
        json dup = json::parse(kSample);
        dup["vertices"][1]["id"] = 1;
        REQUIRE_THROWS_AS(instance_from_json(dup), std::invalid_argument);
    }
    SECTION("unknown fields are errors, or warnings under lenient") {
        json j = json::parse(kSample);
        j["vertices"][0]["colour"] = "red";
        REQUIRE_THROWS_AS(instance_from_json(j), ParseError);

        std::vector<std::string> warnings;
        ParseOptions opts;
        opts.lenient = true;
        opts.warnings = &warnings;
        TwistedDifferential lt = instance_from_json(j, opts);
        REQUIRE(lt.k == 2);
        REQUIRE(warnings.size() == 1);
        REQUIRE(warnings[0].find("colour") != std::string::npos);
    }
}

TEST_CASE("serialize then parse is the identity, bytes included") {
    for (auto roots : std::vector<std::vector<long>>{{0, 0, 1}, {1, -1, 1}, {1, -1, 0}}) {
        TwistedDifferential t = three_level(roots[0], roots[1], roots[2]);
        json j = instance_to_json(t);
        TwistedDifferential back = instance_from_json(j);
        REQUIRE(back.k == t.k);
        REQUIRE(back.power_divisor == t.power_divisor);
        REQUIRE(back.graph.vertices().size() == t.graph.vertices().size());
        for (const Edge& e : t.graph.edges())
            REQUIRE(back.minus_root(back.graph.edge(e.id)) == t.minus_root(e));
        REQUIRE(instance_to_json(back).dump() == j.dump());
    }
    // Marked residues and engaged plus roots survive.
    std::vector<Vertex> vs = {{1, 1, 0, {{4, Cyclotomic(3)}, {-2, Cyclotomic(-3)}}},
                              {2, 1, 0, {{4, {}}, {-2, Cyclotomic(1)}}}};
    std::vector<Edge> es = {{1, 1, 2, -1, -1, Cyclotomic(-3), Cyclotomic(-1)}};
    TwistedDifferential t(1, LevelGraph(vs, es), {{1, 1}, {2, 1}});
    json j = instance_to_json(t);
    TwistedDifferential back = instance_from_json(j);
    REQUIRE(back.graph.vertex(1).marked[1].residue_root == Cyclotomic(-3));
    REQUIRE(*back.graph.edge(1).root_plus == Cyclotomic(-3));
    REQUIRE(instance_to_json(back).dump() == j.dump());
}

TEST_CASE("file loading") {
    std::string path = "/tmp/kdiff_io_sample.json";
    {
        std::ofstream out(path);
        out << kSample;
    }
    TwistedDifferential t = load_instance(path);
    REQUIRE(t.k == 2);
    std::remove(path.c_str());

    REQUIRE_THROWS_AS(load_instance("/tmp/kdiff_io_does_not_exist.json"), ParseError);

    std::string broken = "/tmp/kdiff_io_broken.json";
    {
        std::ofstream out(broken);
        out << "{ not json";
    }
    REQUIRE_THROWS_AS(load_instance(broken), ParseError);
    std::remove(broken.c_str());
}

TEST_CASE("report serialization") {
    SECTION("tri-state and offsets") {
        REQUIRE(tri_to_json(Tri::yes) == json(true));
        REQUIRE(tri_to_json(Tri::no) == json(false));
        REQUIRE(tri_to_json(Tri::unknown).is_null());
        REQUIRE(offsets_to_json({{1, 0}, {3, 2}}).dump() == R"({"1":0,"3":2})");
    }
    SECTION("validation reports") {
        std::vector<Vertex> vs = {{1, 0, 0, {}}};
        json j = validation_to_json(validate(TwistedDifferential(1, LevelGraph(vs, {}), {{1, 1}})));
        REQUIRE(j["ok"] == json(false));
        REQUIRE(j["violations"][0]["code"].is_string());
        REQUIRE(j["warnings"].is_array());
    }
    SECTION("grc reports carry per-pair witnesses") {
        json j = grc_to_json(check_condition_4(three_level(0, 0, 1)));
        REQUIRE(j["holds"] == json(true));
        REQUIRE(j["instances"].size() == 2);
        REQUIRE(j["instances"][0]["level"] == -1);
        REQUIRE(j["instances"][0]["case"] == "v");
        REQUIRE(j["instances"][0]["witness"]["edges"] == json::array({1, 2}));
        REQUIRE(j["instances"][0]["witness"]["exponents"] == json::array({0, 0}));
        REQUIRE_FALSE(j["instances"][0].contains("all_cases"));
        REQUIRE(j["instances"][1]["case"] == "iv");
        REQUIRE(j["instances"][1]["witness"]["cut_level"] == -1);
        REQUIRE(j["instances"][1]["witness"]["offsets"].dump() == R"({"1":0,"2":1})");

        json bad = grc_to_json(check_condition_4(three_level(1, -1, 1)));
        REQUIRE(bad["holds"] == json(false));
        REQUIRE(bad["instances"][1]["case"] == "violated");
        REQUIRE(bad["instances"][1]["witness"].is_null());

        Budget b(0);
        json unk = grc_to_json(check_condition_4(three_level(1, -1, 1), b));
        REQUIRE(unk["holds"].is_null());
        REQUIRE(unk["instances"][0]["case"] == "unknown");

        Budget b2(1000000);
        json all = grc_to_json(check_condition_4(three_level(0, 0, 0), b2, true));
        REQUIRE(all["instances"][1]["all_cases"] == json::array({"iv", "v"}));
        REQUIRE_FALSE(all["instances"][0].contains("all_cases"));
    }
    SECTION("cover reports") {
        json j = cover_to_json(check_condition_4hat(three_level(0, 0, 1)));
        REQUIRE(j["holds"] == json(true));
        REQUIRE(j["witness"].dump() == R"({"1":0,"2":1,"3":0})");
        REQUIRE(j["assignments_tried"] == 3);
        json bad = cover_to_json(check_condition_4hat(three_level(1, -1, 1)));
        REQUIRE(bad["witness"].is_null());
        REQUIRE(bad["assignments_tried"] == 8);
    }
    SECTION("dimension reports") {
        json j = dimension_to_json(dimension_report(three_level(0, 0, 1), ComponentKind::non_ab));
        for (const char* key : {"k", "stratum_dim", "h", "twisted_dim", "delta_p", "c", "c_l", "c_m",
                                "lambda", "dim_res", "dim_grc", "independent_grc"})
            REQUIRE(j.contains(key));
        REQUIRE(j["stratum_dim"] == 7);
        REQUIRE(j["dim_grc"] == 1);
    }
}
