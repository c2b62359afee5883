#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "knum/drinfeld.hpp"
#include "knum/json_io.hpp"
#include "knum/ktheory.hpp"
#include "knum/smith.hpp"

namespace knum {

/// Reports carry a fixed-order plain-text rendering, a machine-readable JSON
/// mirror and the process exit code (0 ok, 1 verification failure).
struct Report {
    std::string text;
    json data;
    int exit_code = 0;
};

namespace fmt {

inline const char* kConvention =
    "convention: chi(a,b) = Euler characteristic of Hom(a,b); "
    "G[i][j] = chi(g_i, g_j), rows indexed by the source argument.";

inline std::string ok(bool b) { return b ? "OK" : "FAIL"; }
inline std::string yesno(bool b) { return b ? "yes" : "no"; }

inline std::string vec_string(const std::vector<Int>& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i].str();
    }
    return s + ")";
}

inline std::string lattice_string(const Sublattice& S) {
    if (S.rank() == 0) return "span{} (rank 0)";
    std::string s = "span{";
    for (int j = 0; j < S.rank(); ++j) {
        if (j) s += ", ";
        s += vec_string(S.basis.col(j));
    }
    return s + "}";
}

inline std::string matrix_string(const IntMatrix& m) {
    return m.to_string() + " (" + std::to_string(m.rows) + "x" + std::to_string(m.cols) + ")";
}

inline json matrix_json(const IntMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m.at(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

inline json lattice_json(const Sublattice& S) {
    return json{{"ambient", S.ambient}, {"basis", matrix_json(S.basis)}};
}

inline json invariants_json(const AbGroupPresentation& P) {
    json v = json::array();
    for (const auto& t : P.invariants()) v.push_back(t.str());
    return v;
}

}  // namespace fmt

inline Report report_snf(const IntMatrix& M) {
    SmithResult s = smith_normal_form(M);
    Report r;
    bool product_ok = s.U.mul(M).mul(s.V) == s.D;
    Int du = det(s.U), dv = det(s.V);
    bool uni = (du == 1 || du == -1) && (dv == 1 || dv == -1);
    bool chain = true;
    auto diag = s.diagonal();
    for (size_t i = 0; i + 1 < diag.size(); ++i) {
        if (diag[i] == 0) { if (diag[i + 1] != 0) chain = false; }
        else if (diag[i + 1] % diag[i] != 0) chain = false;
    }
    r.text += "== knum snf ==\n";
    r.text += "input M " + fmt::matrix_string(M) + "\n";
    r.text += "U " + fmt::matrix_string(s.U) + "\n";
    r.text += "D " + fmt::matrix_string(s.D) + "\n";
    r.text += "V " + fmt::matrix_string(s.V) + "\n";
    std::string factors;
    for (size_t i = 0; i < diag.size(); ++i) {
        if (i) factors += ", ";
        factors += diag[i].str();
    }
    r.text += "invariant factors: [" + factors + "]\n";
    r.text += "checks: D == U.M.V: " + fmt::ok(product_ok) + "; U, V unimodular: " +
              fmt::ok(uni) + "; divisibility chain: " + fmt::ok(chain) + "\n";
    r.data = {{"command", "snf"},
              {"input", fmt::matrix_json(M)},
              {"U", fmt::matrix_json(s.U)},
              {"D", fmt::matrix_json(s.D)},
              {"V", fmt::matrix_json(s.V)},
              {"checks",
               {{"product", product_ok}, {"unimodular", uni}, {"divisibility", chain}}}};
    r.exit_code = (product_ok && uni && chain) ? 0 : 1;
    return r;
}

inline void report_lattice_header(Report& r, const EulerLattice& L, const FieldSpec& field,
                                  const char* command) {
    r.text += std::string("== knum ") + command + " ==\n";
    r.text += std::string(fmt::kConvention) + "\n";
    r.text += "field: " + field.to_string() + "\n";
    if (!L.gen_names.empty()) {
        r.text += "generators:";
        for (const auto& g : L.gen_names) r.text += " " + g;
        r.text += "\n";
    }
    r.text += "G " + fmt::matrix_string(L.gram) + "\n";
    r.data["command"] = command;
    r.data["field"] = field.to_string();
    r.data["generators"] = L.gen_names;
    r.data["gram"] = fmt::matrix_json(L.gram);
}

inline Report report_chi_gram(const EulerLattice& L, const FieldSpec& field,
                              const std::vector<std::string>& notes) {
    Report r;
    report_lattice_header(r, L, field, "chi-gram");
    for (const auto& n : notes) r.text += "note: " + n + "\n";
    r.data["notes"] = notes;
    return r;
}

inline Report report_numk(const EulerLattice& L, const FieldSpec& field,
                          const std::vector<std::string>& notes) {
    Report r;
    report_lattice_header(r, L, field, "numk");
    for (const auto& n : notes) r.text += "note: " + n + "\n";
    r.data["notes"] = notes;
    ChiKernels k = chi_kernels(L);
    r.text += "left kernel of chi:  " + fmt::lattice_string(k.left) + "\n";
    r.text += "right kernel of chi: " + fmt::lattice_string(k.right) + "\n";
    r.text += "kernels agree: " + fmt::yesno(k.agree) + "\n";
    r.data["left_kernel"] = fmt::lattice_json(k.left);
    r.data["right_kernel"] = fmt::lattice_json(k.right);
    r.data["kernels_agree"] = k.agree;
    if (k.agree) {
        AbGroupPresentation N = numerical_group(L);
        r.text += "numerical group N = K0/ker(chi): " + N.to_string() + "\n";
        std::string inv;
        for (const auto& t : N.invariants()) {
            if (!inv.empty()) inv += ", ";
            inv += t.str();
        }
        r.text += "invariant factors: [" + inv + "]\n";
        r.data["numerical_group"] = N.to_string();
        r.data["invariant_factors"] = fmt::invariants_json(N);
        r.exit_code = 0;
    } else {
        r.text += "numerical group: ill-defined (kernels disagree)\n";
        r.exit_code = 1;
    }
    return r;
}

inline Report report_verify_serre(const EulerLattice& L, const FieldSpec& field,
                                  bool serre_supplied) {
    Report r;
    report_lattice_header(r, L, field, "verify-serre");
    IntMatrix S = serre_supplied ? *L.serre : serre_from_gram(L);
    r.text += std::string("S (") + (serre_supplied ? "supplied" : "computed = G^-1.G^T") +
              ") " + fmt::matrix_string(S) + "\n";
    IntMatrix residual = L.gram.transpose();
    IntMatrix gs = L.gram.mul(S);
    for (int i = 0; i < residual.rows; ++i)
        for (int j = 0; j < residual.cols; ++j) residual.at(i, j) -= gs.at(i, j);
    bool residual_zero = residual.is_zero();
    r.text += "residual G^T - G.S " + fmt::matrix_string(residual) + ": " +
              (residual_zero ? "zero" : "NONZERO") + "\n";
    ChiKernels k = chi_kernels(L);
    r.text += "left kernel == right kernel: " + fmt::yesno(k.agree) + " (rank " +
              std::to_string(k.right.rank()) + ")\n";
    bool pass = residual_zero && k.agree;
    r.text += std::string("verdict: ") + (pass ? "PASS" : "FAIL") + "\n";
    r.data["serre"] = fmt::matrix_json(S);
    r.data["serre_supplied"] = serre_supplied;
    r.data["residual_zero"] = residual_zero;
    r.data["kernels_agree"] = k.agree;
    r.data["pass"] = pass;
    r.exit_code = pass ? 0 : 1;
    return r;
}

template <class K>
Report report_quotient(const QuotientCategory<K>& Q, const FieldSpec& field,
                       const std::vector<std::pair<int, int>>& pairs) {
    Report r;
    r.text += "== knum quotient ==\n";
    r.text += "field: " + field.to_string() + "\n";
    r.text += "objects:";
    for (int a = 0; a < Q.n_objects(); ++a) r.text += " " + Q.object_name(a);
    r.text += "\ncontracted:";
    for (int c : Q.contracted_objs) r.text += " " + Q.object_name(c);
    r.text += "\ndepth: " + std::to_string(Q.depth) + "\n";
    r.data["command"] = "quotient";
    r.data["field"] = field.to_string();
    r.data["depth"] = Q.depth;
    json rows = json::array();
    for (auto [a, b] : pairs) {
        const auto& P = Q.pair(a, b);
        std::string line = "pair " + Q.object_name(a) + " -> " + Q.object_name(b) + ": ";
        json row = {{"from", Q.object_name(a)}, {"to", Q.object_name(b)}};
        if (P.trust.complete) {
            line += "exact (no xi-paths)";
            row["trust"] = "exact";
        } else if (P.trust.lo == INT_MAX) {
            line += "trust window empty";
            row["trust"] = "empty";
        } else {
            line += "trust window [" + std::to_string(P.trust.lo) + ", +inf)";
            row["trust"] = P.trust.lo;
        }
        if (P.trust.trusts(0)) {
            H0Result<K> h = h0_hom(Q, a, b);
            line += "; H^0 dim = " + std::to_string(h.dim);
            row["h0"] = h.dim;
            json reps = json::array();
            for (const auto& nm : h.names) reps.push_back(nm);
            row["representatives"] = reps;
            if (h.dim > 0) {
                line += "; representatives: ";
                for (size_t i = 0; i < h.names.size(); ++i) {
                    if (i) line += " | ";
                    line += h.names[i];
                }
            }
        } else {
            line += "; H^0 not trusted at this depth";
            row["h0"] = nullptr;
        }
        r.text += line + "\n";
        rows.push_back(row);
    }
    r.data["pairs"] = rows;
    return r;
}

inline Report report_verify_sequence(const KTriple& T, const SequenceReport& rep,
                                     const FieldSpec& field,
                                     const std::vector<std::string>& notes) {
    Report r;
    r.text += "== knum verify-sequence ==\n";
    r.text += std::string(fmt::kConvention) + "\n";
    r.text += "field: " + field.to_string() + "\n";
    r.text += "ranks: K0(I) = " + std::to_string(T.L_I.rank) +
              ", K0(A) = " + std::to_string(T.L_A.rank) +
              ", K0(Q) = " + std::to_string(T.L_Q.rank) + "\n";
    r.text += "flags: thick = " + flag_string(T.thick) +
              ", q_preserves_compacts = " + flag_string(T.q_preserves_compacts) + "\n";
    r.text += "i_star " + fmt::matrix_string(T.i_star) + "\n";
    r.text += "q_star " + fmt::matrix_string(T.q_star) + "\n";
    for (const auto& n : notes) r.text += "note: " + n + "\n";

    r.text += "\n[K0 sequence]  K0(I) -> K0(A) -> K0(Q) -> 0\n";
    const auto& k0 = rep.k0.exact;
    r.text += "  q_star . i_star == 0: " + fmt::ok(k0.composite_zero) + "\n";
    std::string mid = "  Im(i_star) == Ker(q_star): " + fmt::ok(k0.image_equals_kernel);
    if (!k0.image_equals_kernel && k0.image_subset_kernel && k0.index)
        mid += " (index " + k0.index->str() + ")";
    if (k0.witness) mid += "; witness in Ker\\Im: " + fmt::vec_string(*k0.witness);
    r.text += mid + "\n";
    r.text += "  q_star surjective: " + fmt::ok(k0.surjective) + "\n";
    r.text += "  coker(i_star): " + rep.k0.coker_i.to_string() + "\n";
    r.text += std::string("  verdict: ") + (k0.exact() ? "exact" : "NOT exact") + "\n";

    r.text += "\n[kernel lemma]\n";
    const auto& km = rep.kermaps;
    std::string v1 = "  (1) i(K0(I)) /\\ Ker(chi_A) == i(Ker(chi_I)): " + fmt::ok(km.verdict1);
    if (km.witness1) v1 += "; witness: " + fmt::vec_string(*km.witness1);
    r.text += v1 + "\n";
    std::string v2 = "  (2) q(Ker(chi_A)) inside Ker(chi_Q): " + fmt::ok(km.verdict2);
    if (km.witness2) v2 += "; witness: " + fmt::vec_string(*km.witness2);
    r.text += v2 + "\n";
    std::string v3 = "  (3) q(Ker(chi_A)) == Ker(chi_Q): " + fmt::yesno(km.verdict3_equality);
    if (km.verdict3_theorem_backed) v3 += " [theorem-backed]";
    else if (km.verdict3_consistent_with_paper)
        v3 += " [flag unset: inequality is consistent with the statement]";
    else if (T.q_preserves_compacts == FlagState::unset) v3 += " [flag unset]";
    else v3 += " [FAILS under the asserted flag]";
    r.text += v3 + "\n";

    r.text += "\n[numerical sequence]  N(I) -> N(A) -> N(Q) -> 0\n";
    r.text += "  kernels agree (I, A, Q): " + fmt::yesno(rep.kernels_agree_I) + ", " +
              fmt::yesno(rep.kernels_agree_A) + ", " + fmt::yesno(rep.kernels_agree_Q) + "\n";
    if (rep.N_I) {
        r.text += "  N(I) = " + rep.N_I->to_string() + ", N(A) = " + rep.N_A->to_string() +
                  ", N(Q) = " + rep.N_Q->to_string() + "\n";
        if (rep.bar_i.ok && rep.bar_q.ok) {
            r.text += "  induced maps well-defined: OK\n";
            r.text += "  bar_i " + fmt::matrix_string(rep.bar_i.matrix) + "\n";
            r.text += "  bar_q " + fmt::matrix_string(rep.bar_q.matrix) + "\n";
            const auto& ne = *rep.numerical_exact;
            r.text += "  composite zero: " + fmt::ok(ne.composite_zero) + "\n";
            std::string nmid = "  Im(bar_i) == Ker(bar_q): " + fmt::ok(ne.image_equals_kernel);
            if (!ne.image_equals_kernel && ne.image_subset_kernel && ne.index)
                nmid += " (index " + ne.index->str() + ")";
            if (ne.witness) nmid += "; witness: " + fmt::vec_string(*ne.witness);
            r.text += nmid + "\n";
            r.text += "  bar_q surjective: " + fmt::ok(ne.surjective) + "\n";
            r.text += "  isomorphism-theorem cross-check: K0(A)/(i(K0(I)) + Ker(chi_A)) = " +
                      rep.crosscheck->to_string() + " == N(Q): " +
                      fmt::ok(rep.crosscheck_matches) + "\n";
        } else {
            r.text += "  induced maps well-defined: FAIL";
            if (rep.bar_i.witness)
                r.text += " (i_star moves " + fmt::vec_string(*rep.bar_i.witness) +
                          " outside the kernel)";
            if (rep.bar_q.witness)
                r.text += " (q_star moves " + fmt::vec_string(*rep.bar_q.witness) +
                          " outside the kernel)";
            r.text += "\n";
        }
    } else {
        r.text += "  numerical groups ill-defined where kernels disagree\n";
    }
    r.text += "  coker(i_star) torsion-free: " + fmt::yesno(rep.coker_i_torsion_free) + "\n";
    r.text += "  route: " + route_string(rep.route) + "\n";
    std::string verdict;
    if (rep.pass()) verdict = "exact, theorem-backed";
    else if (!rep.theorem_backed()) verdict = "hypotheses unmet (not theorem-backed)";
    else verdict = "NOT exact";
    r.text += "  verdict: " + verdict + "\n";

    r.data = {{"command", "verify-sequence"},
              {"field", field.to_string()},
              {"notes", notes},
              {"flags",
               {{"thick", flag_string(T.thick)},
                {"q_preserves_compacts", flag_string(T.q_preserves_compacts)}}},
              {"k0",
               {{"composite_zero", k0.composite_zero},
                {"exact_middle", k0.image_equals_kernel},
                {"surjective", k0.surjective},
                {"coker_i", rep.k0.coker_i.to_string()},
                {"exact", k0.exact()}}},
              {"kermaps",
               {{"v1", km.verdict1},
                {"v2", km.verdict2},
                {"v3_equality", km.verdict3_equality},
                {"v3_theorem_backed", km.verdict3_theorem_backed},
                {"v3_consistent_with_paper", km.verdict3_consistent_with_paper}}},
              {"numerical",
               {{"kernels_agree",
                 {rep.kernels_agree_I, rep.kernels_agree_A, rep.kernels_agree_Q}},
                {"raw_exact", rep.raw_exact},
                {"crosscheck_matches", rep.crosscheck_matches}}},
              {"coker_torsion_free", rep.coker_i_torsion_free},
              {"route", route_string(rep.route)},
              {"verdict", verdict},
              {"pass", rep.pass()}};
    if (rep.N_I) {
        r.data["numerical"]["N_I"] = rep.N_I->to_string();
        r.data["numerical"]["N_A"] = rep.N_A->to_string();
        r.data["numerical"]["N_Q"] = rep.N_Q->to_string();
    }
    r.exit_code = rep.pass() ? 0 : 1;
    return r;
}

}  // namespace knum
