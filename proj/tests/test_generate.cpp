#include <catch2/catch_amalgamated.hpp>

#include <kdiff/generate.hpp>
#include <kdiff/io.hpp>

#include <string>
#include <vector>

using namespace kdiff;

namespace {

std::string stream_of(const GeneratorParams& params) {
    std::string out;
    generate_exhaustive(params, [&](const TwistedDifferential& t) {
        out += instance_to_json(t).dump();
        out += '\n';
        return true;
    });
    return out;
}

}  // namespace

TEST_CASE("default palettes collapse coincident values") {
    auto p1 = default_palette(1);  // zeta_1 = 1, 1 + zeta_1 = 2
    REQUIRE(p1.size() == 4);
    auto p2 = default_palette(2);  // zeta_2 = -1, 1 + zeta_2 = 0
    REQUIRE(p2.size() == 3);
    REQUIRE(p2[0].is_zero());
    auto p4 = default_palette(4);
    REQUIRE(p4.size() == 5);
}

TEST_CASE("exhaustive generation is deterministic and sound") {
    GeneratorParams params;
    params.max_vertices = 3;
    params.max_edges = 3;
    params.ks = {1, 2};
    params.per_cell_cap = 40;

    int count = 0;
    int last_size = 0;
    generate_exhaustive(params, [&](const TwistedDifferential& t) {
        ++count;
        REQUIRE(validate(t).ok());
        REQUIRE((t.k == 1 || t.k == 2));
        int nv = static_cast<int>(t.graph.vertices().size());
        int ne = static_cast<int>(t.graph.edges().size());
        REQUIRE(nv <= 3);
        REQUIRE(ne <= 3);
        REQUIRE(t.graph.top_level() == 0);
        // Cells are walked by total size, so the stream never shrinks.
        REQUIRE(nv + ne >= last_size);
        last_size = nv + ne;
        return true;
    });
    REQUIRE(count > 50);

    REQUIRE(stream_of(params) == stream_of(params));
}

TEST_CASE("the sink can stop generation early") {
    GeneratorParams params;
    int count = 0;
    generate_exhaustive(params, [&](const TwistedDifferential&) { return ++count < 7; });
    REQUIRE(count == 7);
}

TEST_CASE("random generation is seeded and sound") {
    GeneratorParams params;
    params.max_vertices = 3;
    params.max_edges = 4;
    params.ks = {2, 3};

    auto run = [&](std::uint64_t seed) {
        params.seed = seed;
        std::string out;
        generate_random(params, 25, [&](const TwistedDifferential& t) {
            REQUIRE(validate(t).ok());
            REQUIRE((t.k == 2 || t.k == 3));
            out += instance_to_json(t).dump();
            return true;
        });
        return out;
    };

    std::string a = run(7);
    REQUIRE(a == run(7));
    REQUIRE(a != run(8));
}
