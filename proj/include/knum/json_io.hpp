#pragma once

#include <json.hpp>

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "knum/dgcat.hpp"
#include "knum/ktheory.hpp"
#include "knum/quiver.hpp"

namespace knum {

using nlohmann::json;

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("JSON syntax error: ") + e.what());
    }
}

/// "Q" or "Fp:<prime>".
struct FieldSpec {
    int characteristic = 0;

    static FieldSpec parse(const std::string& s) {
        if (s == "Q") return {0};
        if (s.rfind("Fp:", 0) == 0) {
            int p = 0;
            try {
                p = std::stoi(s.substr(3));
            } catch (...) {
                throw InputError("bad field spec '" + s + "': expected Q or Fp:<prime>");
            }
            if (p < 2) throw InputError("field characteristic must be a prime >= 2");
            for (int d = 2; d * d <= p; ++d)
                if (p % d == 0) throw InputError("field characteristic " + std::to_string(p) +
                                                 " is not prime");
            return {p};
        }
        throw InputError("bad field spec '" + s + "': expected Q or Fp:<prime>");
    }

    std::string to_string() const {
        return characteristic == 0 ? "Q" : "Fp:" + std::to_string(characteristic);
    }
};

namespace detail {

inline std::string want_string(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_string())
        throw InputError("schema: '" + where + "' needs a string field '" + key + "'");
    return j[key].get<std::string>();
}

template <class K>
K parse_scalar(const json& j, int characteristic);

template <>
inline Rat parse_scalar<Rat>(const json& j, int) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) return scalar_from_string(j.get<std::string>(), Rat());
    throw InputError("schema: scalar coefficients must be integers or strings");
}

template <>
inline Fp parse_scalar<Fp>(const json& j, int characteristic) {
    Fp ctx(0, characteristic);
    if (j.is_number_integer()) return Fp(j.get<long long>(), characteristic);
    if (j.is_string()) return scalar_from_string(j.get<std::string>(), ctx);
    throw InputError("schema: scalar coefficients must be integers or strings");
}

inline int object_index(const std::vector<std::string>& names, const std::string& label,
                        const std::string& where) {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == label) return static_cast<int>(i);
    throw InputError("unknown object label '" + label + "' in " + where);
}

}  // namespace detail

/// Parses a category spec. Exactly one of "quiver" or "objects"/"homs"/...
/// may be present; the result always passes validate() or the call throws
/// with the offending basis names.
template <class K>
DGCategory<K> parse_category(const json& spec, int characteristic) {
    bool has_quiver = spec.contains("quiver");
    bool has_homs = spec.contains("homs") || spec.contains("objects");
    if (has_quiver == has_homs)
        throw InputError("schema: a category spec needs exactly one of 'quiver' or "
                         "'objects'+'homs'+'composition'");

    DGCategory<K> C;
    if (has_quiver) {
        const json& q = spec["quiver"];
        QuiverPresentation<K> Q;
        if (!q.contains("vertices") || !q["vertices"].is_array())
            throw InputError("schema: quiver.vertices must be an array of labels");
        for (const auto& v : q["vertices"]) Q.vertices.push_back(v.get<std::string>());
        if (q.contains("arrows"))
            for (const auto& a : q["arrows"]) {
                std::string name = detail::want_string(a, "name", "quiver.arrows");
                int s = detail::object_index(Q.vertices,
                                             detail::want_string(a, "from", "quiver.arrows"),
                                             "quiver.arrows.from");
                int t = detail::object_index(Q.vertices,
                                             detail::want_string(a, "to", "quiver.arrows"),
                                             "quiver.arrows.to");
                Q.arrows.push_back({name, s, t});
            }
        auto arrow_index = [&](const std::string& name) {
            for (size_t i = 0; i < Q.arrows.size(); ++i)
                if (Q.arrows[i].name == name) return static_cast<int>(i);
            throw InputError("unknown arrow label '" + name + "' in quiver.relations");
        };
        if (q.contains("relations"))
            for (const auto& r : q["relations"]) {
                typename QuiverPresentation<K>::Relation rel;
                if (!r.contains("terms") || !r["terms"].is_array() || r["terms"].empty())
                    throw InputError("schema: each relation needs a nonempty 'terms' array");
                for (const auto& t : r["terms"]) {
                    K coeff = t.contains("coeff")
                                  ? detail::parse_scalar<K>(t["coeff"], characteristic)
                                  : K(1);
                    std::vector<int> path;
                    for (const auto& arrow : t["path"])
                        path.push_back(arrow_index(arrow.get<std::string>()));
                    rel.terms.push_back({coeff, path});
                }
                Q.relations.push_back(rel);
            }
        if (q.contains("path_length_cap")) Q.path_length_cap = q["path_length_cap"].get<int>();
        C = from_quiver(Q, characteristic);
    } else {
        if (!spec.contains("objects") || !spec.contains("homs"))
            throw InputError("schema: explicit category specs need 'objects' and 'homs'");
        for (const auto& o : spec["objects"]) C.objects.push_back(o.get<std::string>());
        C.characteristic = characteristic;
        C.init_tables();
        auto obj = [&](const json& j, const char* key, const char* where) {
            return detail::object_index(C.objects, detail::want_string(j, key, where), where);
        };
        for (const auto& h : spec["homs"]) {
            int s = obj(h, "from", "homs");
            int t = obj(h, "to", "homs");
            for (const auto& b : h["basis"]) {
                std::string name = detail::want_string(b, "name", "homs.basis");
                if (!b.contains("degree"))
                    throw InputError("schema: hom basis element '" + name + "' needs a degree");
                C.hom(s, t).add(name, b["degree"].get<int>());
            }
        }
        C.window_lo = 0;
        C.window_hi = 0;
        bool first = true;
        for (int s = 0; s < C.n_objects(); ++s)
            for (int t = 0; t < C.n_objects(); ++t)
                for (int d : C.hom(s, t).degrees) {
                    if (first) { C.window_lo = C.window_hi = d; first = false; }
                    C.window_lo = std::min(C.window_lo, d);
                    C.window_hi = std::max(C.window_hi, d);
                }
        if (spec.contains("window")) {
            C.window_lo = spec["window"][0].get<int>();
            C.window_hi = spec["window"][1].get<int>();
        }
        auto elt_index = [&](int s, int t, const std::string& name, const char* where) {
            const auto& names = C.hom(s, t).names;
            for (size_t i = 0; i < names.size(); ++i)
                if (names[i] == name) return static_cast<int>(i);
            throw InputError(std::string("unknown hom element '") + name + "' in " + where);
        };
        auto parse_terms = [&](const json& terms, int s, int t, const char* where) {
            LinComb<K> out;
            for (const auto& term : terms) {
                K coeff = term.contains("coeff")
                              ? detail::parse_scalar<K>(term["coeff"], characteristic)
                              : K(1);
                int idx = elt_index(s, t, detail::want_string(term, "elt", where), where);
                lc_add_scaled(out, lc_single(idx, K(1)), coeff);
            }
            return out;
        };
        if (spec.contains("differential"))
            for (const auto& d : spec["differential"]) {
                int s = obj(d, "from", "differential");
                int t = obj(d, "to", "differential");
                int of = elt_index(s, t, detail::want_string(d, "of", "differential"),
                                   "differential");
                C.hom(s, t).diff[of] = parse_terms(d["terms"], s, t, "differential");
            }
        if (!spec.contains("identities"))
            throw InputError("schema: explicit category specs need 'identities'");
        for (int a = 0; a < C.n_objects(); ++a) {
            const std::string& label = C.objects[a];
            if (!spec["identities"].contains(label))
                throw InputError("schema: missing identity for object '" + label + "'");
            C.ids[a] = lc_single(
                elt_index(a, a, spec["identities"][label].get<std::string>(), "identities"),
                K(1));
        }
        C.init_composition();
        if (spec.contains("composition"))
            for (const auto& c : spec["composition"]) {
                int a = obj(c, "from", "composition");
                int b = obj(c, "mid", "composition");
                int cc = obj(c, "to", "composition");
                int g = elt_index(b, cc, detail::want_string(c, "g", "composition"),
                                  "composition");
                int f = elt_index(a, b, detail::want_string(c, "f", "composition"),
                                  "composition");
                C.set_composition(a, b, cc, g, f, parse_terms(c["terms"], a, cc, "composition"));
            }
        if (spec.contains("acyclic_quiver")) C.from_acyclic_quiver = spec["acyclic_quiver"].get<bool>();
    }

    ValidationReport rep = validate(C);
    if (!rep.ok()) {
        std::string msg = "category spec violates the DG axioms:";
        for (const auto& v : rep.violations) msg += "\n  " + v;
        throw InputError(msg);
    }
    return C;
}

/// Serializes to the explicit-homs form; parse(serialize(parse(x))) equals
/// parse(x) structurally.
template <class K>
json serialize_category(const DGCategory<K>& C) {
    json out;
    out["field"] = FieldSpec{C.characteristic}.to_string();
    out["objects"] = C.objects;
    json homs = json::array();
    json diffs = json::array();
    json comps = json::array();
    auto term_array = [&](int s, int t, const LinComb<K>& x) {
        json terms = json::array();
        for (const auto& [i, c] : x)
            terms.push_back({{"coeff", to_string(c)}, {"elt", C.hom(s, t).names[i]}});
        return terms;
    };
    for (int s = 0; s < C.n_objects(); ++s)
        for (int t = 0; t < C.n_objects(); ++t) {
            const auto& H = C.hom(s, t);
            if (H.dim() == 0) continue;
            json basis = json::array();
            for (int i = 0; i < H.dim(); ++i)
                basis.push_back({{"name", H.names[i]}, {"degree", H.degrees[i]}});
            homs.push_back({{"from", C.objects[s]}, {"to", C.objects[t]}, {"basis", basis}});
            for (int i = 0; i < H.dim(); ++i)
                if (!lc_is_zero(H.diff[i]))
                    diffs.push_back({{"from", C.objects[s]},
                                     {"to", C.objects[t]},
                                     {"of", H.names[i]},
                                     {"terms", term_array(s, t, H.diff[i])}});
        }
    for (int a = 0; a < C.n_objects(); ++a)
        for (int b = 0; b < C.n_objects(); ++b)
            for (int c = 0; c < C.n_objects(); ++c)
                for (int g = 0; g < C.hom(b, c).dim(); ++g)
                    for (int f = 0; f < C.hom(a, b).dim(); ++f) {
                        const LinComb<K>& v = C.compose_basis(a, b, c, g, f);
                        if (lc_is_zero(v)) continue;
                        comps.push_back({{"from", C.objects[a]},
                                         {"mid", C.objects[b]},
                                         {"to", C.objects[c]},
                                         {"g", C.hom(b, c).names[g]},
                                         {"f", C.hom(a, b).names[f]},
                                         {"terms", term_array(a, c, v)}});
                    }
    out["homs"] = homs;
    if (!diffs.empty()) out["differential"] = diffs;
    out["composition"] = comps;
    json ids;
    for (int a = 0; a < C.n_objects(); ++a) {
        if (C.ids[a].size() != 1)
            throw InputError("serialize_category: identities must be single basis elements");
        ids[C.objects[a]] = C.hom(a, a).names[C.ids[a][0].first];
    }
    out["identities"] = ids;
    out["acyclic_quiver"] = C.from_acyclic_quiver;
    return out;
}

inline IntMatrix parse_int_matrix(const json& j, const std::string& where) {
    if (!j.is_array()) throw InputError("schema: " + where + " must be an array of rows");
    int rows = static_cast<int>(j.size());
    int cols = rows == 0 ? 0 : static_cast<int>(j[0].size());
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols)
            throw InputError("schema: ragged matrix in " + where);
        for (int c = 0; c < cols; ++c) {
            const auto& cell = j[i][c];
            if (cell.is_number_integer())
                m.at(i, c) = cell.get<long long>();
            else if (cell.is_string())
                m.at(i, c) = Int(cell.get<std::string>());
            else
                throw InputError("schema: matrix entries must be integers or strings in " +
                                 where);
        }
    }
    return m;
}

inline EulerLattice parse_lattice(const json& j, const std::string& where) {
    EulerLattice L;
    if (!j.contains("rank")) throw InputError("schema: " + where + " needs 'rank'");
    L.rank = j["rank"].get<int>();
    L.gram = j.contains("gram") ? parse_int_matrix(j["gram"], where + ".gram")
                                : IntMatrix(L.rank, L.rank);
    if (L.rank > 0 && !j.contains("gram"))
        throw InputError("schema: " + where + " needs 'gram'");
    if (j.contains("serre")) L.serre = parse_int_matrix(j["serre"], where + ".serre");
    if (j.contains("generators"))
        for (const auto& g : j["generators"]) L.gen_names.push_back(g.get<std::string>());
    L.provenance = Provenance::user_supplied;
    L.validate();
    return L;
}

/// The data of a triple spec: either a base category plus a contraction (k0
/// derived from acyclic-quiver representables) or explicit k0 lattice data,
/// or both (explicit k0 overrides the derivation).
struct TripleSpec {
    std::optional<json> base;            // category spec (inline or loaded)
    std::vector<std::string> contract;
    int depth = 3;
    FieldSpec field;
    std::optional<KTriple> explicit_k0;
    FlagState thick = FlagState::unset;
    FlagState q_preserves_compacts = FlagState::unset;
};

inline TripleSpec parse_triple_spec(const json& j, const std::string& base_dir) {
    TripleSpec T;
    if (j.contains("base"))
        T.base = j["base"];
    else if (j.contains("base_path")) {
        std::string p = j["base_path"].get<std::string>();
        if (!p.empty() && p[0] != '/') p = base_dir + "/" + p;
        T.base = load_json(p);
    }
    if (T.base && T.base->contains("field"))
        T.field = FieldSpec::parse((*T.base)["field"].get<std::string>());
    if (j.contains("field")) T.field = FieldSpec::parse(j["field"].get<std::string>());
    if (j.contains("contract"))
        for (const auto& c : j["contract"]) T.contract.push_back(c.get<std::string>());
    if (j.contains("depth")) T.depth = j["depth"].get<int>();
    if (T.depth < 2) throw InputError("schema: depth must be at least 2");
    if (j.contains("flags")) {
        const json& f = j["flags"];
        if (f.contains("thick") && f["thick"].get<bool>()) T.thick = FlagState::asserted;
        if (f.contains("q_preserves_compacts") && f["q_preserves_compacts"].get<bool>())
            T.q_preserves_compacts = FlagState::asserted;
    }
    if (j.contains("k0")) {
        const json& k = j["k0"];
        KTriple kt;
        kt.L_I = parse_lattice(k.at("L_I"), "k0.L_I");
        kt.L_A = parse_lattice(k.at("L_A"), "k0.L_A");
        kt.L_Q = parse_lattice(k.at("L_Q"), "k0.L_Q");
        kt.i_star = parse_int_matrix(k.at("i_star"), "k0.i_star");
        kt.q_star = parse_int_matrix(k.at("q_star"), "k0.q_star");
        if (kt.i_star.rows == 0 && kt.i_star.cols == 0)
            kt.i_star = IntMatrix(kt.L_A.rank, kt.L_I.rank);
        if (kt.q_star.rows == 0 && kt.q_star.cols == 0)
            kt.q_star = IntMatrix(kt.L_Q.rank, kt.L_A.rank);
        kt.thick = T.thick;
        kt.q_preserves_compacts = T.q_preserves_compacts;
        kt.validate();
        T.explicit_k0 = std::move(kt);
    }
    if (!T.base && !T.explicit_k0)
        throw InputError("schema: a triple spec needs 'base'/'base_path' or explicit 'k0'");
    return T;
}

}  // namespace knum
