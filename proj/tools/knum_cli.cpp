// knum: desk-scale DG categories, Drinfeld quotients and numerical K-group
// verification. See README.md for the input formats.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "knum/drinfeld.hpp"
#include "knum/json_io.hpp"
#include "knum/ktheory.hpp"
#include "knum/quiver.hpp"
#include "knum/reports.hpp"

using namespace knum;

namespace {

struct CommonOpts {
    std::string input;
    bool json_out = false;
    std::string field_override;
    std::string generators;
    std::string pairs;
    int depth = 0;       // 0 means: take the spec's depth
    int max_len = 6;
    unsigned long long seed = 2024;  // reserved for randomized subroutines
};

int emit(const Report& r, bool json_out) {
    if (json_out)
        std::cout << r.data.dump(2) << "\n";
    else
        std::cout << r.text;
    return r.exit_code;
}

std::string dir_of(const std::string& path) {
    auto pos = path.find_last_of('/');
    return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

FieldSpec field_of(const json& spec, const CommonOpts& opt) {
    FieldSpec f;
    if (spec.contains("field")) f = FieldSpec::parse(spec["field"].get<std::string>());
    if (!opt.field_override.empty()) f = FieldSpec::parse(opt.field_override);
    return f;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

template <class K>
EulerLattice gram_of_spec(const json& spec, const FieldSpec& field, const CommonOpts& opt) {
    DGCategory<K> C = parse_category<K>(spec, field.characteristic);
    std::vector<std::string> labels;
    if (!opt.generators.empty())
        labels = split(opt.generators, ',');
    else if (spec.contains("generators"))
        for (const auto& g : spec["generators"]) labels.push_back(g.get<std::string>());
    else
        labels = C.objects;
    std::vector<TwistedComplex<K>> gens;
    for (const auto& l : labels) {
        int idx = -1;
        for (int a = 0; a < C.n_objects(); ++a)
            if (C.objects[a] == l) idx = a;
        if (idx < 0) throw InputError("unknown generator label '" + l + "'");
        gens.push_back(tc_representable<K>(C, idx));
    }
    return gram_from_category(C, gens, labels);
}

EulerLattice gram_dispatch(const json& spec, const FieldSpec& field, const CommonOpts& opt) {
    if (field.characteristic == 0) return gram_of_spec<Rat>(spec, field, opt);
    return gram_of_spec<Fp>(spec, field, opt);
}

EulerLattice lattice_or_gram(const json& spec, const FieldSpec& field, const CommonOpts& opt) {
    if (spec.contains("rank")) return parse_lattice(spec, "lattice");
    return gram_dispatch(spec, field, opt);
}

int cmd_chi_gram(const CommonOpts& opt) {
    json spec = load_json(opt.input);
    FieldSpec field = field_of(spec, opt);
    EulerLattice L = lattice_or_gram(spec, field, opt);
    return emit(report_chi_gram(L, field, {}), opt.json_out);
}

int cmd_numk(const CommonOpts& opt) {
    json spec = load_json(opt.input);
    FieldSpec field = field_of(spec, opt);
    EulerLattice L = lattice_or_gram(spec, field, opt);
    return emit(report_numk(L, field, {}), opt.json_out);
}

template <class K>
int run_quotient(const TripleSpec& ts, const CommonOpts& opt) {
    DGCategory<K> C = parse_category<K>(*ts.base, ts.field.characteristic);
    std::vector<int> contract;
    for (const auto& label : ts.contract) {
        int idx = -1;
        for (int a = 0; a < C.n_objects(); ++a)
            if (C.objects[a] == label) idx = a;
        if (idx < 0) throw InputError("contracted label '" + label + "' is not an object");
        contract.push_back(idx);
    }
    int depth = opt.depth > 0 ? opt.depth : ts.depth;
    QuotientCategory<K> Q = drinfeld_quotient(C, contract, depth);
    std::vector<std::pair<int, int>> pairs;
    if (!opt.pairs.empty()) {
        for (const auto& entry : split(opt.pairs, ';')) {
            auto parts = split(entry, ':');
            if (parts.size() != 2)
                throw InputError("bad --pairs entry '" + entry + "'; expected from:to");
            int s = -1, t = -1;
            for (int a = 0; a < C.n_objects(); ++a) {
                if (C.objects[a] == parts[0]) s = a;
                if (C.objects[a] == parts[1]) t = a;
            }
            if (s < 0 || t < 0)
                throw InputError("unknown object in --pairs entry '" + entry + "'");
            pairs.push_back({s, t});
        }
    } else {
        for (int s = 0; s < C.n_objects(); ++s)
            for (int t = 0; t < C.n_objects(); ++t) pairs.push_back({s, t});
    }
    return emit(report_quotient(Q, ts.field, pairs), opt.json_out);
}

int cmd_quotient(const CommonOpts& opt) {
    json spec = load_json(opt.input);
    TripleSpec ts = parse_triple_spec(spec, dir_of(opt.input));
    if (!ts.base) throw InputError("quotient: the triple spec needs a base category");
    if (!opt.field_override.empty()) ts.field = FieldSpec::parse(opt.field_override);
    if (ts.field.characteristic == 0) return run_quotient<Rat>(ts, opt);
    return run_quotient<Fp>(ts, opt);
}

template <class K>
int run_verify_sequence(const TripleSpec& ts, const CommonOpts& opt) {
    KTriple T;
    std::vector<std::string> notes;
    if (ts.explicit_k0) {
        T = *ts.explicit_k0;
        notes.push_back("k0 data supplied explicitly");
    } else {
        DGCategory<K> C = parse_category<K>(*ts.base, ts.field.characteristic);
        std::vector<int> contract;
        for (const auto& label : ts.contract) {
            int idx = -1;
            for (int a = 0; a < C.n_objects(); ++a)
                if (C.objects[a] == label) idx = a;
            if (idx < 0) throw InputError("contracted label '" + label + "' is not an object");
            contract.push_back(idx);
        }
        int depth = opt.depth > 0 ? opt.depth : ts.depth;
        DerivedTriple<K> D = derive_triple(C, contract, depth, ts.thick,
                                           ts.q_preserves_compacts, opt.max_len);
        T = D.triple;
        notes = D.notes;
        notes.insert(notes.begin(), "k0 derived from acyclic-quiver representables");
    }
    SequenceReport rep = verify_numerical_sequence(T);
    return emit(report_verify_sequence(T, rep, ts.field, notes), opt.json_out);
}

int cmd_verify_sequence(const CommonOpts& opt) {
    json spec = load_json(opt.input);
    TripleSpec ts = parse_triple_spec(spec, dir_of(opt.input));
    if (!opt.field_override.empty()) ts.field = FieldSpec::parse(opt.field_override);
    if (ts.field.characteristic == 0) return run_verify_sequence<Rat>(ts, opt);
    return run_verify_sequence<Fp>(ts, opt);
}

int cmd_verify_serre(const CommonOpts& opt) {
    json spec = load_json(opt.input);
    FieldSpec field = field_of(spec, opt);
    EulerLattice L = lattice_or_gram(spec, field, opt);
    return emit(report_verify_serre(L, field, L.serre.has_value()), opt.json_out);
}

int cmd_snf(const CommonOpts& opt) {
    json spec = load_json(opt.input);
    if (!spec.contains("matrix")) throw InputError("snf: input needs a 'matrix' field");
    IntMatrix M = parse_int_matrix(spec["matrix"], "matrix");
    return emit(report_snf(M), opt.json_out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knum: finite DG categories, Drinfeld quotients and numerical K-groups"};
    app.require_subcommand(1);
    CommonOpts opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", opt.input, "input JSON file")->required();
        sub->add_flag("--json", opt.json_out, "emit the machine-readable JSON report");
        sub->add_option("--field", opt.field_override,
                        "coefficient field override: Q or Fp:<prime>");
        sub->add_option("--seed", opt.seed,
                        "seed for randomized subroutines (the verification "
                        "commands are deterministic)");
    };

    auto* chi = app.add_subcommand("chi-gram", "Gram matrix of the Euler pairing");
    add_common(chi);
    chi->add_option("--generators", opt.generators, "comma-separated object labels");

    auto* numk = app.add_subcommand("numk", "numerical Grothendieck group");
    add_common(numk);
    numk->add_option("--generators", opt.generators, "comma-separated object labels");

    auto* quot = app.add_subcommand("quotient", "Drinfeld quotient H^0 dims and trust windows");
    add_common(quot);
    quot->add_option("--pairs", opt.pairs, "pairs from:to, separated by ';'");
    quot->add_option("--depth", opt.depth, "override the spec's materialization depth");

    auto* seq = app.add_subcommand("verify-sequence",
                                   "K0 and numerical exact-sequence verification");
    add_common(seq);
    seq->add_option("--depth", opt.depth, "override the spec's materialization depth");
    seq->add_option("--max-len", opt.max_len, "budget for the compactness witness search");

    auto* serre = app.add_subcommand("verify-serre", "Serre matrix and kernel agreement");
    add_common(serre);
    serre->add_option("--generators", opt.generators, "comma-separated object labels");

    auto* snf = app.add_subcommand("snf", "Smith normal form of an integer matrix");
    add_common(snf);

    CLI11_PARSE(app, argc, argv);

    try {
        if (chi->parsed()) return cmd_chi_gram(opt);
        if (numk->parsed()) return cmd_numk(opt);
        if (quot->parsed()) return cmd_quotient(opt);
        if (seq->parsed()) return cmd_verify_sequence(opt);
        if (serre->parsed()) return cmd_verify_serre(opt);
        if (snf->parsed()) return cmd_snf(opt);
    } catch (const std::exception& e) {
        std::cerr << "ERROR: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
