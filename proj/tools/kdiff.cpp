// Command-line front end: validate instances, decide the residue conditions
// by either route, print dimension and cover data, evaluate the residue
// polynomial, and drive cross-checking sweeps.
//
// Exit codes: 0 computed (and agreeing, where agreement is asserted),
// 1 mathematical violation (invalid instance, cross-check disagreement),
// 2 unreadable or malformed input, 3 indeterminate (budget exhausted).

#include <kdiff/cover.hpp>
#include <kdiff/dimension.hpp>
#include <kdiff/generate.hpp>
#include <kdiff/grc.hpp>
#include <kdiff/io.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace kdiff;

namespace {

struct Options {
    bool json = false;
    bool lenient = false;
    long long budget = -1;  // <0: fall back to KDIFF_BUDGET or the default
};

long long effective_budget(const Options& opt) {
    return opt.budget >= 0 ? opt.budget : default_budget();
}

TwistedDifferential load(const std::string& path, const Options& opt) {
    std::vector<std::string> warnings;
    ParseOptions popts;
    popts.lenient = opt.lenient;
    popts.warnings = &warnings;
    TwistedDifferential t = load_instance(path, popts);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    return t;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string phrase(Tri t) {
    switch (t) {
        case Tri::yes: return "in boundary";
        case Tri::no: return "not in boundary";
        default: return "indeterminate";
    }
}

std::string ints(const std::vector<int>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += " ";
        out += std::to_string(v[i]);
    }
    return out + "]";
}

std::string offsets(const std::map<int, int>& m) {
    std::string out = "{";
    bool first = true;
    for (auto [id, o] : m) {
        if (!first) out += ", ";
        first = false;
        out += std::to_string(id) + ":" + std::to_string(o);
    }
    return out + "}";
}

void print_grc(const GrcReport& r) {
    std::cout << "direct: " << phrase(r.verdict) << "\n";
    for (const PairVerdict& pv : r.pairs) {
        std::cout << "  level " << pv.level << ", component " << ints(pv.component) << ": ";
        if (pv.verdict == Tri::unknown) {
            std::cout << "indeterminate\n";
            continue;
        }
        if (pv.verdict == Tri::no) {
            std::cout << "violated\n";
            continue;
        }
        std::cout << "case " << pv.satisfied_case;
        if (pv.satisfied_case == "iii")
            std::cout << ", offsets " << offsets(pv.twist_offsets);
        else if (pv.satisfied_case == "iv")
            std::cout << ", cut level " << *pv.twist_level << ", offsets "
                      << offsets(pv.twist_offsets);
        else if (pv.satisfied_case == "v")
            std::cout << ", edges " << ints(pv.cut_edges) << ", exponents "
                      << ints(pv.root_exponents);
        if (pv.all_cases.size() > 1) {
            std::cout << " (all:";
            for (const std::string& c : pv.all_cases) std::cout << " " << c;
            std::cout << ")";
        }
        std::cout << "\n";
    }
}

void print_cover_search(const CoverSearchResult& r) {
    std::cout << "cover: " << phrase(r.verdict) << "\n";
    if (r.witness) std::cout << "  witness: " << offsets(*r.witness) << "\n";
    std::cout << "  assignments tried: " << r.assignments_tried << "\n";
}

int require_valid(const TwistedDifferential& t, const Options& opt) {
    ValidationReport v = validate(t);
    if (v.ok()) return 0;
    if (opt.json)
        emit(validation_to_json(v));
    else {
        std::cerr << "invalid instance:\n";
        for (const Violation& violation : v.violations)
            std::cerr << "  " << violation.code << ": " << violation.message << "\n";
    }
    return 1;
}

int run_validate(const std::string& path, const Options& opt) {
    TwistedDifferential t = load(path, opt);
    ValidationReport r = validate(t);
    if (opt.json) {
        emit(validation_to_json(r));
    } else {
        std::cout << (r.ok() ? "valid" : "invalid") << "\n";
        for (const Violation& v : r.violations)
            std::cout << "  " << v.code << ": " << v.message << "\n";
        for (const std::string& w : r.warnings) std::cout << "  warning: " << w << "\n";
    }
    return r.ok() ? 0 : 1;
}

int run_check(const std::string& path, const Options& opt, bool use_cover, bool cross,
              bool all_cases) {
    TwistedDifferential t = load(path, opt);
    if (int rc = require_valid(t, opt)) return rc;

    std::optional<GrcReport> direct;
    std::optional<CoverSearchResult> cover;
    if (!use_cover || cross) {
        Budget b(effective_budget(opt));
        direct = check_condition_4(t, b, all_cases);
    }
    if (use_cover || cross) {
        Budget b(effective_budget(opt));
        cover = check_condition_4hat(t, b);
    }

    json out = json::object();
    if (direct) out["direct"] = grc_to_json(*direct);
    if (cover) out["cover"] = cover_to_json(*cover);

    int rc = 0;
    if (cross) {
        bool unknown =
            direct->verdict == Tri::unknown || cover->verdict == Tri::unknown;
        bool agree = !unknown && direct->verdict == cover->verdict;
        out["agree"] = unknown ? json(nullptr) : json(agree);
        rc = unknown ? 3 : (agree ? 0 : 1);
    } else {
        Tri v = direct ? direct->verdict : cover->verdict;
        rc = v == Tri::unknown ? 3 : 0;
    }

    if (opt.json) {
        emit(out);
    } else {
        if (direct) print_grc(*direct);
        if (cover) print_cover_search(*cover);
        if (cross) {
            if (rc == 3)
                std::cout << "cross-check: indeterminate\n";
            else
                std::cout << "cross-check: " << (rc == 0 ? "agree" : "DISAGREE") << "\n";
        }
    }
    return rc;
}

int run_dim(const std::string& path, const Options& opt, std::string kind_str) {
    TwistedDifferential t = load(path, opt);
    if (int rc = require_valid(t, opt)) return rc;

    ComponentKind kind;
    if (t.k == 1) {
        // Not a choice at k = 1: holomorphic abelian <=> pole-free signature.
        bool pole = false;
        for (const Vertex& v : t.graph.vertices())
            for (const MarkedPoint& m : v.marked)
                if (m.order < 0) pole = true;
        kind = pole ? ComponentKind::non_ab : ComponentKind::ab;
        kind_str = pole ? "non-ab" : "ab";
    } else {
        kind = kind_str == "ab" ? ComponentKind::ab : ComponentKind::non_ab;
    }

    DimensionReport r = dimension_report(t, kind);
    if (opt.json) {
        json j = dimension_to_json(r);
        j["kind"] = kind_str;
        emit(j);
    } else {
        std::cout << "k: " << r.k << "\n"
                  << "kind: " << kind_str << "\n"
                  << "stratum dim: " << r.stratum_dim << "\n"
                  << "horizontal edges: " << r.h << "\n"
                  << "twisted dim: " << r.twisted_dim << "\n"
                  << "delta_p: " << r.delta_p << "\n"
                  << "c: " << r.c << " (c_m: " << r.c_m << ", c_l: " << r.c_l << ")\n"
                  << "lambda: " << r.lambda << "\n"
                  << "dim_res: " << r.dim_res << "\n"
                  << "dim_grc: " << r.dim_grc << "\n"
                  << "independent_grc: " << r.independent_grc << "\n";
    }
    return 0;
}

const char* site_name(PointCover::Site s) {
    switch (s) {
        case PointCover::Site::marked: return "marked";
        case PointCover::Site::edge_plus: return "plus";
        default: return "minus";
    }
}

int run_cover(const std::string& path, const Options& opt) {
    TwistedDifferential t = load(path, opt);
    if (int rc = require_valid(t, opt)) return rc;

    CoverEnumeration ce = cover_enumeration(t);
    if (opt.json) {
        json vertices = json::array();
        for (const Vertex& v : t.graph.vertices()) {
            VertexCoverData data = local_cover(t, v.id);
            json points = json::array();
            for (const PointCover& p : data.points)
                points.push_back(json{{"site", site_name(p.site)},
                                      {"source", p.source_id},
                                      {"order", p.order},
                                      {"preimages", p.preimages},
                                      {"ramification", p.ramification},
                                      {"lifted_order", p.lifted_order}});
            vertices.push_back(json{{"id", data.vertex},
                                    {"components", data.components},
                                    {"genus", data.genus},
                                    {"points", std::move(points)}});
        }
        emit(json{{"vertices", std::move(vertices)},
                  {"enumeration", json{{"forced", offsets_to_json(ce.forced)},
                                       {"edges", ce.enumerated_edges},
                                       {"assignments", ce.total.get_str()}}}});
    } else {
        for (const Vertex& v : t.graph.vertices()) {
            VertexCoverData data = local_cover(t, v.id);
            std::cout << "vertex " << data.vertex << ": components " << data.components
                      << ", genus " << data.genus << "\n";
            for (const PointCover& p : data.points) {
                std::cout << "  " << site_name(p.site);
                if (p.site == PointCover::Site::marked)
                    std::cout << " " << p.source_id;
                else
                    std::cout << " of edge " << p.source_id;
                std::cout << ": order " << p.order << ", preimages " << p.preimages
                          << ", lifted order " << p.lifted_order << "\n";
            }
        }
        std::cout << "forced horizontal offsets: " << offsets(ce.forced) << "\n"
                  << "enumerated vertical edges: " << ints(ce.enumerated_edges) << "\n"
                  << "cover assignments: " << ce.total.get_str() << "\n";
    }
    return 0;
}

// Roots on the pnk command line: JSON (integers, "n/d" strings, {"N","coeffs"}
// objects) with a zN or zN^j shorthand for roots of unity.
Cyclotomic parse_root(const std::string& arg) {
    if (!arg.empty() && (arg[0] == 'z' || arg[0] == 'Z')) {
        std::size_t caret = arg.find('^');
        try {
            unsigned long n = std::stoul(arg.substr(1, caret - 1));
            long j = caret == std::string::npos ? 1 : std::stol(arg.substr(caret + 1));
            if (n > 0) return Cyclotomic::root_of_unity(static_cast<unsigned>(n), j);
        } catch (const std::exception&) {
            // fall through to the JSON forms
        }
    }
    json parsed;
    try {
        parsed = json::parse(arg);
    } catch (const json::parse_error&) {
        parsed = json(arg);  // bare rational string like 1/2
    }
    return cyc_from_json(parsed, "root");
}

int run_pnk(int k, const std::vector<std::string>& args, const Options& opt) {
    if (k < 1) throw ParseError("k must be positive");
    std::vector<Cyclotomic> roots;
    for (const std::string& a : args) roots.push_back(parse_root(a));

    Budget b(effective_budget(opt));
    PnkResult result = p_nk_vanishes(roots, k, b);
    Budget b2(effective_budget(opt));
    Cyclotomic product = p_nk_evaluate(roots, k, b2);

    if (opt.json) {
        json jroots = json::array();
        for (const Cyclotomic& r : roots) jroots.push_back(cyc_to_json(r));
        emit(json{{"k", k},
                  {"roots", std::move(jroots)},
                  {"vanishes", result.vanishes},
                  {"exponents", result.exponents},
                  {"product", cyc_to_json(product)}});
    } else {
        std::cout << "vanishes: " << (result.vanishes ? "yes" : "no") << "\n";
        if (result.vanishes) std::cout << "witness exponents: " << ints(result.exponents) << "\n";
        std::cout << "product: " << product.str() << "\n";
    }
    return 0;
}

struct SweepTally {
    long long instances = 0;
    long long agreements = 0;
    long long disagreements = 0;
    long long indeterminate = 0;
    long long k1_checked = 0;
    long long k1_mismatches = 0;
    long long identity_failures = 0;
};

int run_sweep(const Options& opt, GeneratorParams params, long long random_count,
              const std::string& palette_json) {
    if (!palette_json.empty()) {
        json pj = json::parse(palette_json);
        if (!pj.is_array()) throw ParseError("palette: expected a JSON array");
        for (std::size_t i = 0; i < pj.size(); ++i)
            params.palette.push_back(cyc_from_json(pj[i], "palette[" + std::to_string(i) + "]"));
    }

    SweepTally tally;
    auto sink = [&](const TwistedDifferential& t) {
        ++tally.instances;
        Budget b1(effective_budget(opt));
        Budget b2(effective_budget(opt));
        GrcReport direct = check_condition_4(t, b1);
        CoverSearchResult cover = check_condition_4hat(t, b2);

        if (direct.verdict == Tri::unknown || cover.verdict == Tri::unknown) {
            ++tally.indeterminate;
        } else if (direct.verdict != cover.verdict) {
            ++tally.disagreements;
            std::cerr << "disagreement (direct " << phrase(direct.verdict) << ", cover "
                      << phrase(cover.verdict) << "):\n"
                      << instance_to_json(t).dump() << "\n";
        } else {
            ++tally.agreements;
        }

        if (t.k == 1 && direct.verdict != Tri::unknown) {
            ++tally.k1_checked;
            if (check_4ab(t).verdict != direct.verdict) {
                ++tally.k1_mismatches;
                std::cerr << "k=1 reduction mismatch:\n" << instance_to_json(t).dump() << "\n";
            }
        }

        DimensionReport r = dimension_report(t, ComponentKind::non_ab);
        if (r.c != r.c_m + r.c_l || r.dim_res - r.dim_grc != r.c_m - r.delta_p ||
            r.twisted_dim != r.stratum_dim - r.h) {
            ++tally.identity_failures;
            std::cerr << "dimension identity failure:\n" << instance_to_json(t).dump() << "\n";
        }
        return true;
    };

    if (random_count >= 0)
        generate_random(params, random_count, sink);
    else
        generate_exhaustive(params, sink);

    if (opt.json) {
        emit(json{{"instances", tally.instances},
                  {"agreements", tally.agreements},
                  {"disagreements", tally.disagreements},
                  {"indeterminate", tally.indeterminate},
                  {"k1_checked", tally.k1_checked},
                  {"k1_mismatches", tally.k1_mismatches},
                  {"identity_failures", tally.identity_failures}});
    } else {
        std::cout << "instances: " << tally.instances << "\n"
                  << "agreements: " << tally.agreements << "\n"
                  << "disagreements: " << tally.disagreements << "\n"
                  << "indeterminate: " << tally.indeterminate << "\n"
                  << "k=1 reduction mismatches: " << tally.k1_mismatches << " (of "
                  << tally.k1_checked << " checked)\n"
                  << "dimension identity failures: " << tally.identity_failures << "\n";
    }
    return (tally.disagreements || tally.k1_mismatches || tally.identity_failures) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"twisted k-differentials: residue conditions, covers, dimensions"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_flag("--json", opt.json, "emit machine-readable JSON reports");
    app.add_flag("--lenient", opt.lenient, "warn on unknown input fields instead of failing");
    app.add_option("--budget", opt.budget,
                   "enumeration budget (default: KDIFF_BUDGET or 10^7)");

    std::string path;

    CLI::App* validate_cmd = app.add_subcommand("validate", "check an instance file");
    validate_cmd->add_option("path", path, "instance file")->required();

    CLI::App* check_cmd =
        app.add_subcommand("check", "decide the residue conditions");
    check_cmd->add_option("path", path, "instance file")->required();
    bool direct_flag = false, cover_flag = false, cross_flag = false, all_cases = false;
    CLI::Option* od = check_cmd->add_flag("--direct", direct_flag, "direct case analysis (default)");
    CLI::Option* oc = check_cmd->add_flag("--cover", cover_flag, "search over cover gluings");
    CLI::Option* ox =
        check_cmd->add_flag("--cross-check", cross_flag, "run both routes and assert agreement");
    od->excludes(oc);
    ox->excludes(od)->excludes(oc);
    check_cmd->add_flag("--all-cases", all_cases, "report every satisfied case, not the first");

    CLI::App* dim_cmd = app.add_subcommand("dim", "dimension and residue-space counts");
    dim_cmd->add_option("path", path, "instance file")->required();
    std::string kind = "non-ab";
    dim_cmd->add_option("--kind", kind, "stratum component for k >= 2 (inferred at k = 1)")
        ->check(CLI::IsMember({"ab", "non-ab"}));

    CLI::App* cover_cmd = app.add_subcommand("cover", "canonical cover data per vertex");
    cover_cmd->add_option("path", path, "instance file")->required();

    CLI::App* pnk_cmd = app.add_subcommand("pnk", "evaluate the residue polynomial");
    int pnk_k = 1;
    std::vector<std::string> pnk_roots;
    pnk_cmd->add_option("k", pnk_k, "power")->required();
    pnk_cmd->add_option("roots", pnk_roots, "residue roots (JSON, n/d, or zN^j)")->required();

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "generate instances and cross-check routes");
    GeneratorParams params;
    long long random_count = -1;
    std::string palette_json;
    sweep_cmd->add_option("--max-vertices", params.max_vertices, "vertex bound (default 4)");
    sweep_cmd->add_option("--max-edges", params.max_edges, "edge bound (default 5)");
    sweep_cmd->add_option("--k", params.ks, "k values (default 2)");
    sweep_cmd->add_option("--palette", palette_json, "root palette as a JSON array");
    sweep_cmd->add_option("--seed", params.seed, "random-mode seed (default 1)");
    sweep_cmd->add_option("--random", random_count, "random mode: draw N instances");
    sweep_cmd->add_option("--cap", params.per_cell_cap,
                          "exhaustive mode: instances per size cell (default 600)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (validate_cmd->parsed()) return run_validate(path, opt);
        if (check_cmd->parsed()) return run_check(path, opt, cover_flag, cross_flag, all_cases);
        if (dim_cmd->parsed()) return run_dim(path, opt, kind);
        if (cover_cmd->parsed()) return run_cover(path, opt);
        if (pnk_cmd->parsed()) return run_pnk(pnk_k, pnk_roots, opt);
        if (sweep_cmd->parsed()) return run_sweep(opt, params, random_count, palette_json);
    } catch (const BudgetExceeded&) {
        std::cerr << "indeterminate: budget exhausted\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
