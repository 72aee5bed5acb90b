#pragma once

// JSON input and output. Instances travel as
//   {"k": int, "vertices": [...], "edges": [...]}
// with cyclotomic numbers encoded as {"N": int, "coeffs": [[num, den], ...]}
// (little-endian in the power basis of ζ_N). Plain integers and strings like
// "-3/7" are accepted wherever a cyclotomic value is expected; serialization
// always emits the canonical form, so parse ∘ serialize ∘ parse = parse.
//
// Unknown fields are hard errors unless ParseOptions::lenient is set, in
// which case they are collected as warnings. Numeric fields must be exact:
// floating-point literals are rejected outright.

#include <kdiff/budget.hpp>
#include <kdiff/dimension.hpp>
#include <kdiff/grc.hpp>
#include <kdiff/twisted.hpp>

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace kdiff {

using nlohmann::json;

struct ParseOptions {
    bool lenient = false;
    std::vector<std::string>* warnings = nullptr;  // lenient-mode sink, may be null
};

namespace detail {

inline void unknown_field(const std::string& where, const std::string& key,
                          const ParseOptions& opts) {
    std::string msg = where + ": unknown field \"" + key + "\"";
    if (!opts.lenient) throw ParseError(msg);
    if (opts.warnings) opts.warnings->push_back(msg);
}

inline void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                       const std::string& where, const ParseOptions& opts) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) ok = true;
        if (!ok) unknown_field(where, it.key(), opts);
    }
}

inline const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + ": missing field \"" + std::string(key) + "\"");
    return *it;
}

inline int to_int(const json& j, const std::string& where) {
    if (!j.is_number_integer())
        throw ParseError(where + ": expected an integer");
    auto v = j.get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ParseError(where + ": integer out of range");
    return static_cast<int>(v);
}

// One exact rational: integer, or a string "n" / "n/d" in any magnitude.
inline Rational to_rational(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) {
        Rational r;
        try {
            r = Rational(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            throw ParseError(where + ": not a rational: \"" + j.get<std::string>() + "\"");
        }
        if (r.get_den() == 0) throw ParseError(where + ": zero denominator");
        r.canonicalize();
        return r;
    }
    throw ParseError(where + ": expected an exact rational (integer or string)");
}

}  // namespace detail

inline Cyclotomic cyc_from_json(const json& j, const std::string& where,
                                const ParseOptions& opts = {}) {
    if (j.is_number_integer() || j.is_string())
        return Cyclotomic(detail::to_rational(j, where));
    if (!j.is_object())
        throw ParseError(where + ": expected a cyclotomic value");
    detail::check_keys(j, {"N", "coeffs"}, where, opts);
    int n = detail::to_int(detail::require(j, "N", where), where + ".N");
    if (n < 1) throw ParseError(where + ".N: order must be positive");
    const json& cj = detail::require(j, "coeffs", where);
    if (!cj.is_array()) throw ParseError(where + ".coeffs: expected an array");
    std::vector<Rational> coeffs;
    for (std::size_t i = 0; i < cj.size(); ++i) {
        std::string cw = where + ".coeffs[" + std::to_string(i) + "]";
        const json& c = cj[i];
        if (c.is_array()) {
            if (c.size() != 2) throw ParseError(cw + ": expected [num, den]");
            Rational num = detail::to_rational(c[0], cw + "[0]");
            Rational den = detail::to_rational(c[1], cw + "[1]");
            if (den == 0) throw ParseError(cw + ": zero denominator");
            coeffs.push_back(num / den);
        } else {
            coeffs.push_back(detail::to_rational(c, cw));
        }
    }
    return Cyclotomic(static_cast<unsigned>(n), std::move(coeffs));
}

inline json rational_to_json(const Rational& r) {
    if (r.get_den() == 1 && r.get_num().fits_slong_p())
        return json(static_cast<std::int64_t>(r.get_num().get_si()));
    return json(r.get_str());
}

inline json cyc_to_json(const Cyclotomic& x) {
    if (auto r = x.as_rational()) return rational_to_json(*r);
    json coeffs = json::array();
    for (const Rational& c : x.coeffs())
        coeffs.push_back(json::array({rational_to_json(Rational(c.get_num())),
                                      rational_to_json(Rational(c.get_den()))}));
    return json{{"N", x.order()}, {"coeffs", coeffs}};
}

// ---- instances -------------------------------------------------------------

inline TwistedDifferential instance_from_json(const json& j, const ParseOptions& opts = {}) {
    if (!j.is_object()) throw ParseError("instance: expected a JSON object");
    detail::check_keys(j, {"k", "vertices", "edges"}, "instance", opts);

    int k = 1;
    if (auto it = j.find("k"); it != j.end()) k = detail::to_int(*it, "k");
    if (k < 1) throw ParseError("k: must be positive");

    std::vector<Vertex> vertices;
    std::map<int, int> divisors;
    const json& vj = detail::require(j, "vertices", "instance");
    if (!vj.is_array()) throw ParseError("vertices: expected an array");
    for (std::size_t i = 0; i < vj.size(); ++i) {
        std::string where = "vertices[" + std::to_string(i) + "]";
        const json& v = vj[i];
        if (!v.is_object()) throw ParseError(where + ": expected an object");
        detail::check_keys(v, {"id", "genus", "level", "marked", "power_divisor"}, where, opts);
        Vertex out;
        out.id = detail::to_int(detail::require(v, "id", where), where + ".id");
        out.genus = detail::to_int(detail::require(v, "genus", where), where + ".genus");
        out.level = detail::to_int(detail::require(v, "level", where), where + ".level");
        if (auto it = v.find("marked"); it != v.end()) {
            if (!it->is_array()) throw ParseError(where + ".marked: expected an array");
            for (std::size_t p = 0; p < it->size(); ++p) {
                std::string mw = where + ".marked[" + std::to_string(p) + "]";
                const json& m = (*it)[p];
                if (!m.is_object()) throw ParseError(mw + ": expected an object");
                detail::check_keys(m, {"order", "residue_root"}, mw, opts);
                MarkedPoint mp;
                mp.order = detail::to_int(detail::require(m, "order", mw), mw + ".order");
                if (auto rt = m.find("residue_root"); rt != m.end())
                    mp.residue_root = cyc_from_json(*rt, mw + ".residue_root", opts);
                out.marked.push_back(std::move(mp));
            }
        }
        int d = 1;
        if (auto it = v.find("power_divisor"); it != v.end())
            d = detail::to_int(*it, where + ".power_divisor");
        divisors[out.id] = d;
        vertices.push_back(std::move(out));
    }

    std::vector<Edge> edges;
    const json& ej = detail::require(j, "edges", "instance");
    if (!ej.is_array()) throw ParseError("edges: expected an array");
    for (std::size_t i = 0; i < ej.size(); ++i) {
        std::string where = "edges[" + std::to_string(i) + "]";
        const json& e = ej[i];
        if (!e.is_object()) throw ParseError(where + ": expected an object");
        detail::check_keys(
            e, {"id", "v_plus", "v_minus", "order_plus", "order_minus", "root_plus", "root_minus"},
            where, opts);
        Edge out;
        out.id = detail::to_int(detail::require(e, "id", where), where + ".id");
        out.v_plus = detail::to_int(detail::require(e, "v_plus", where), where + ".v_plus");
        out.v_minus = detail::to_int(detail::require(e, "v_minus", where), where + ".v_minus");
        out.order_plus =
            detail::to_int(detail::require(e, "order_plus", where), where + ".order_plus");
        out.order_minus =
            detail::to_int(detail::require(e, "order_minus", where), where + ".order_minus");
        if (auto it = e.find("root_plus"); it != e.end())
            out.root_plus = cyc_from_json(*it, where + ".root_plus", opts);
        if (auto it = e.find("root_minus"); it != e.end())
            out.root_minus = cyc_from_json(*it, where + ".root_minus", opts);
        edges.push_back(std::move(out));
    }

    return TwistedDifferential(k, LevelGraph(std::move(vertices), std::move(edges)),
                               std::move(divisors));
}

inline json instance_to_json(const TwistedDifferential& t) {
    json vertices = json::array();
    for (const Vertex& v : t.graph.vertices()) {
        json marked = json::array();
        for (const MarkedPoint& m : v.marked) {
            json mp{{"order", m.order}};
            if (m.residue_root) mp["residue_root"] = cyc_to_json(*m.residue_root);
            marked.push_back(std::move(mp));
        }
        json vo{{"id", v.id},
                {"genus", v.genus},
                {"level", v.level},
                {"power_divisor", t.d(v.id)}};
        if (!marked.empty()) vo["marked"] = std::move(marked);
        vertices.push_back(std::move(vo));
    }
    json edges = json::array();
    for (const Edge& e : t.graph.edges()) {
        json eo{{"id", e.id},
                {"v_plus", e.v_plus},
                {"v_minus", e.v_minus},
                {"order_plus", e.order_plus},
                {"order_minus", e.order_minus}};
        if (e.root_plus) eo["root_plus"] = cyc_to_json(*e.root_plus);
        if (e.root_minus) eo["root_minus"] = cyc_to_json(*e.root_minus);
        edges.push_back(std::move(eo));
    }
    return json{{"k", t.k}, {"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

inline TwistedDifferential load_instance(const std::string& path, const ParseOptions& opts = {}) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return instance_from_json(j, opts);
}

// ---- reports ---------------------------------------------------------------

inline json tri_to_json(Tri t) {
    switch (t) {
        case Tri::yes: return json(true);
        case Tri::no: return json(false);
        default: return json(nullptr);
    }
}

inline json offsets_to_json(const std::map<int, int>& offsets) {
    json out = json::object();
    for (auto [edge, exp] : offsets) out[std::to_string(edge)] = exp;
    return out;
}

inline json validation_to_json(const ValidationReport& r) {
    json violations = json::array();
    for (const Violation& v : r.violations)
        violations.push_back(json{{"code", v.code},
                                  {"message", v.message},
                                  {"vertices", v.vertex_ids},
                                  {"edges", v.edge_ids}});
    return json{{"ok", r.ok()}, {"violations", std::move(violations)}, {"warnings", r.warnings}};
}

inline json grc_to_json(const GrcReport& r) {
    json instances = json::array();
    for (const PairVerdict& pv : r.pairs) {
        json witness(nullptr);
        std::string label;
        if (pv.verdict == Tri::yes) {
            label = pv.satisfied_case;
            if (label == "iii")
                witness = json{{"offsets", offsets_to_json(pv.twist_offsets)}};
            else if (label == "iv")
                witness = json{{"cut_level", pv.twist_level ? json(*pv.twist_level) : json(nullptr)},
                               {"offsets", offsets_to_json(pv.twist_offsets)}};
            else if (label == "v")
                witness = json{{"edges", pv.cut_edges}, {"exponents", pv.root_exponents}};
        } else {
            label = pv.verdict == Tri::no ? "violated" : "unknown";
        }
        json row{{"level", pv.level},
                 {"component_vertices", pv.component},
                 {"case", label},
                 {"witness", std::move(witness)}};
        if (pv.all_cases.size() > 1) row["all_cases"] = pv.all_cases;
        instances.push_back(std::move(row));
    }
    return json{{"holds", tri_to_json(r.verdict)}, {"instances", std::move(instances)}};
}

inline json cover_to_json(const CoverSearchResult& r) {
    return json{{"holds", tri_to_json(r.verdict)},
                {"witness", r.witness ? offsets_to_json(*r.witness) : json(nullptr)},
                {"assignments_tried", r.assignments_tried}};
}

inline json dimension_to_json(const DimensionReport& r) {
    return json{{"k", r.k},
                {"stratum_dim", r.stratum_dim},
                {"h", r.h},
                {"twisted_dim", r.twisted_dim},
                {"delta_p", r.delta_p},
                {"c", r.c},
                {"c_l", r.c_l},
                {"c_m", r.c_m},
                {"lambda", r.lambda},
                {"dim_res", r.dim_res},
                {"dim_grc", r.dim_grc},
                {"independent_grc", r.independent_grc}};
}

}  // namespace kdiff
