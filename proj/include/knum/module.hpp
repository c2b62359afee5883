#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "knum/twisted.hpp"

namespace knum {

/// Right module over a DG category, given by fibers and a right action.
/// act(e) for e in hom(s,t) maps the fiber over t to the fiber over s; the
/// action is plain precomposition with no Koszul factor, so the axioms are
///   act(id) = id,   act(g.f) = act(f) act(g),
///   d(act(e) m) = act(e)(d m) + (-1)^{deg m} act(de)(m).
template <class K>
struct Module {
    struct Fiber {
        std::vector<std::string> names;
        std::vector<int> degrees;
        std::vector<LinComb<K>> diff;
        int dim() const { return static_cast<int>(names.size()); }
        FlatComplex<K> flat() const {
            FlatComplex<K> F;
            F.degrees = degrees;
            F.diff = diff;
            return F;
        }
    };
    std::vector<Fiber> fibers;
    // act[s*n + t][hom basis elt][fiber-of-t basis elt] -> LinComb in fiber of s
    std::vector<std::vector<std::vector<LinComb<K>>>> act;

    int n_objects() const { return static_cast<int>(fibers.size()); }

    LinComb<K> apply(int s, int t, const LinComb<K>& e, const LinComb<K>& m) const {
        const auto& table = act[s * n_objects() + t];
        LinComb<K> out;
        for (const auto& [ei, ec] : e)
            for (const auto& [mi, mc] : m) lc_add_scaled(out, table[ei][mi], ec * mc);
        return out;
    }

    static Module zero_module(int n_objects) {
        Module M;
        M.fibers.assign(n_objects, {});
        M.act.assign(static_cast<size_t>(n_objects) * n_objects, {});
        return M;
    }
};

/// Yoneda module of an object: fibers Hom(-, c) with precomposition action.
template <class K, class Cat>
Module<K> representable_module(const Cat& C, int c) {
    int n = C.n_objects();
    Module<K> M = Module<K>::zero_module(n);
    for (int x = 0; x < n; ++x) {
        auto& f = M.fibers[x];
        for (int e = 0; e < C.hom_dim(x, c); ++e) {
            f.names.push_back(C.basis_name(x, c, e));
            f.degrees.push_back(C.basis_degree(x, c, e));
            f.diff.push_back(C.d_basis(x, c, e));
        }
    }
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            auto& table = M.act[s * n + t];
            table.assign(C.hom_dim(s, t), {});
            for (int e = 0; e < C.hom_dim(s, t); ++e) {
                table[e].assign(M.fibers[t].dim(), {});
                for (int m = 0; m < C.hom_dim(t, c); ++m)
                    table[e][m] = C.compose_lc(s, t, c, lc_single(m, K(1)), lc_single(e, K(1)));
            }
        }
    return M;
}

/// Module underlying a twisted complex: fiber over a is the hom complex from
/// the representable of a, action by precomposition in the first slot.
template <class K, class Cat>
Module<K> module_of_tc(const Cat& C, const TwistedComplex<K>& X) {
    int n = C.n_objects();
    Module<K> M = Module<K>::zero_module(n);
    std::vector<TCHomComplex<K>> hc;
    for (int a = 0; a < n; ++a) hc.push_back(tc_hom(C, tc_representable<K>(C, a), X));
    for (int a = 0; a < n; ++a) {
        auto& f = M.fibers[a];
        for (int i = 0; i < hc[a].flat.dim(); ++i) {
            int j = hc[a].coord[i][1], e = hc[a].coord[i][2];
            f.names.push_back("[" + std::to_string(j) + "]" +
                              C.basis_name(a, X.entries[j].obj, e));
            f.degrees.push_back(hc[a].flat.degrees[i]);
            f.diff.push_back(hc[a].flat.diff[i]);
        }
    }
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            auto& table = M.act[s * n + t];
            table.assign(C.hom_dim(s, t), {});
            for (int e = 0; e < C.hom_dim(s, t); ++e) {
                table[e].assign(M.fibers[t].dim(), {});
                for (int m = 0; m < M.fibers[t].dim(); ++m) {
                    int j = hc[t].coord[m][1], g = hc[t].coord[m][2];
                    int obj_j = X.entries[j].obj;
                    LinComb<K> ge = C.compose_lc(s, t, obj_j, lc_single(g, K(1)),
                                                 lc_single(e, K(1)));
                    LinComb<K> out;
                    for (const auto& [idx, c] : ge)
                        lc_add_scaled(out, lc_single(hc[s].index.at({0, j, idx}), K(1)), c);
                    table[e][m] = std::move(out);
                }
            }
        }
    return M;
}

/// Restriction of scalars along F : A -> B, sending each fiber to the fiber
/// over F(a) and precomposing the action.
template <class K, class SrcCat>
Module<K> restrict_module(const SrcCat& A, const DGFunctor<K>& F, const Module<K>& M) {
    int n = A.n_objects();
    Module<K> R = Module<K>::zero_module(n);
    for (int a = 0; a < n; ++a) R.fibers[a] = M.fibers[F(a)];
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            auto& table = R.act[s * n + t];
            table.assign(A.hom_dim(s, t), {});
            for (int e = 0; e < A.hom_dim(s, t); ++e) {
                table[e].assign(R.fibers[t].dim(), {});
                LinComb<K> fe = F.apply(n, s, t, lc_single(e, K(1)));
                for (int m = 0; m < R.fibers[t].dim(); ++m)
                    table[e][m] = M.apply(F(s), F(t), fe, lc_single(m, K(1)));
            }
        }
    return R;
}

/// Shift of a module: fiber degrees drop by k, the fiber differential flips
/// sign for odd k, the action is untouched.
template <class K>
Module<K> module_shift(Module<K> M, int k) {
    for (auto& f : M.fibers) {
        for (auto& d : f.degrees) d -= k;
        if (k % 2 != 0)
            for (auto& dl : f.diff) dl = lc_scaled(dl, K(-1));
    }
    return M;
}

/// Derived hom from a twisted complex into a module: the totalization of the
/// fibers M_{a_i} with the twist acting through the module structure. Basis
/// (i, m) has degree deg(m) + r_i; for representable M this coincides with
/// tc_hom against the representable on the nose.
template <class K>
struct ModHomComplex {
    FlatComplex<K> flat;
    std::vector<std::pair<int, int>> coord;    // flat -> (entry, fiber elt)
    std::map<std::pair<int, int>, int> index;
};

template <class K, class Cat>
ModHomComplex<K> hom_to_module(const Cat& C, const TwistedComplex<K>& X, const Module<K>& M) {
    ModHomComplex<K> H;
    for (int i = 0; i < X.size(); ++i) {
        const auto& fib = M.fibers[X.entries[i].obj];
        for (int m = 0; m < fib.dim(); ++m) {
            H.index[{i, m}] = H.flat.dim();
            H.coord.push_back({i, m});
            H.flat.add(fib.degrees[m] + X.entries[i].shift);
        }
    }
    for (int f = 0; f < H.flat.dim(); ++f) {
        auto [j, m] = H.coord[f];
        int n = H.flat.degrees[f];
        int obj_j = X.entries[j].obj;
        LinComb<K> out;
        for (const auto& [mm, c] : M.fibers[obj_j].diff[m])
            lc_add_scaled(out, lc_single(H.index.at({j, mm}), K(1)), c);
        for (int i = j + 1; i < X.size(); ++i) {
            if (lc_is_zero(X.twist[j][i])) continue;
            LinComb<K> acted =
                M.apply(X.entries[i].obj, obj_j, X.twist[j][i], lc_single(m, K(1)));
            for (const auto& [mm, c] : acted)
                lc_add_scaled(out, lc_single(H.index.at({i, mm}), K(1)),
                              c * K(-parity_sign(n)));
        }
        H.flat.diff[f] = std::move(out);
    }
    return H;
}

/// Closed degree-0 map from a twisted complex to a module: one fiber element
/// of degree -r_i per entry.
template <class K>
struct ModuleMap {
    std::vector<LinComb<K>> components;
};

template <class K, class Cat>
bool module_map_closed(const Cat& C, const TwistedComplex<K>& X, const Module<K>& M,
                       const ModuleMap<K>& phi) {
    for (int i = 0; i < X.size(); ++i) {
        int obj_i = X.entries[i].obj;
        LinComb<K> defect = M.fibers[obj_i].flat().d_of(phi.components[i]);
        for (int j = 0; j < i; ++j) {
            if (lc_is_zero(X.twist[j][i])) continue;
            lc_add_scaled(defect,
                          M.apply(obj_i, X.entries[j].obj, X.twist[j][i], phi.components[j]),
                          K(-1));
        }
        if (!lc_is_zero(defect)) return false;
    }
    return true;
}

namespace detail {

/// Chain map on the fiber over a induced by phi : X -> M, as columns over the
/// flat basis of tc_hom(repr a, X).
template <class K, class Cat>
std::vector<LinComb<K>> fiber_map(const Cat& C, const TwistedComplex<K>& X, const Module<K>& M,
                                  const ModuleMap<K>& phi, const TCHomComplex<K>& Fa, int a) {
    std::vector<LinComb<K>> u(Fa.flat.dim());
    for (int i = 0; i < Fa.flat.dim(); ++i) {
        int j = Fa.coord[i][1], e = Fa.coord[i][2];
        u[i] = M.apply(a, X.entries[j].obj, lc_single(e, K(1)), phi.components[j]);
    }
    return u;
}

}  // namespace detail

/// Levelwise quasi-isomorphism test for a map into a module: every fiber cone
/// must be acyclic.
template <class K, class Cat>
bool is_module_quasi_iso(const Cat& C, const TwistedComplex<K>& X, const Module<K>& M,
                         const ModuleMap<K>& phi) {
    for (int a = 0; a < C.n_objects(); ++a) {
        TCHomComplex<K> Fa = tc_hom(C, tc_representable<K>(C, a), X);
        auto u = detail::fiber_map(C, X, M, phi, Fa, a);
        FlatComplex<K> cone_a = flat_cone(Fa.flat, M.fibers[a].flat(), u);
        if (!flat_is_acyclic(cone_a)) return false;
    }
    return true;
}

enum class PerfSearchStatus { witness, not_found_within_bound };

template <class K>
struct PerfSearchResult {
    PerfSearchStatus status = PerfSearchStatus::not_found_within_bound;
    TwistedComplex<K> witness;
    ModuleMap<K> map;
    int length = 0;
    bool found() const { return status == PerfSearchStatus::witness; }
};

/// Greedy peeling: repeatedly split off a representable cover of the lowest
/// nonvanishing cone cohomology. Success yields a verified twisted-complex
/// witness; running out of budget is NOT a proof of non-perfectness.
template <class K, class Cat>
PerfSearchResult<K> bounded_perfectness_search(const Cat& C, const Module<K>& M, int max_len) {
    PerfSearchResult<K> res;
    int n = C.n_objects();
    TwistedComplex<K> X;
    X.reshape();
    ModuleMap<K> phi;

    for (;;) {
        // cones over every object
        std::vector<TCHomComplex<K>> F;
        std::vector<FlatComplex<K>> cones;
        for (int a = 0; a < n; ++a) {
            F.push_back(tc_hom(C, tc_representable<K>(C, a), X));
            auto u = detail::fiber_map(C, X, M, phi, F[a], a);
            cones.push_back(flat_cone(F[a].flat, M.fibers[a].flat(), u));
        }
        bool all_acyclic = true;
        int low = 0;
        bool low_set = false;
        for (int a = 0; a < n; ++a) {
            if (cones[a].dim() == 0) continue;
            int mn = cones[a].degrees[0], mx = cones[a].degrees[0];
            for (int d : cones[a].degrees) { mn = std::min(mn, d); mx = std::max(mx, d); }
            for (int m = mn; m <= mx; ++m)
                if (flat_cohomology_dim(cones[a], m) > 0) {
                    all_acyclic = false;
                    if (!low_set || m < low) { low = m; low_set = true; }
                    break;  // lowest degree of this object found
                }
        }
        if (all_acyclic) {
            if (!module_map_closed(C, X, M, phi) || !is_module_quasi_iso(C, X, M, phi))
                return res;  // should not happen; stay honest
            res.status = PerfSearchStatus::witness;
            res.witness = X;
            res.map = phi;
            res.length = X.size();
            return res;
        }
        if (X.size() >= max_len) return res;

        // classes in the lowest degree, per object
        std::vector<FlatCohomology<K>> V(n);
        for (int a = 0; a < n; ++a) V[a] = flat_cohomology(cones[a], low);

        // prefer classes generating the others under the degree-0 cycle action
        std::vector<Span<K>> W(n);
        for (int a = 0; a < n; ++a) {
            // boundaries at the low degree are redundant by construction of V
            for (int aa = 0; aa < n; ++aa)
                for (int e = 0; e < C.hom_dim(a, aa); ++e) {
                    if (C.basis_degree(a, aa, e) != 0) continue;
                    if (!lc_is_zero(C.d_basis(a, aa, e))) continue;
                    bool is_id_term = false;
                    if (a == aa)
                        for (const auto& [ii, cc] : C.identity(a))
                            if (ii == e) is_id_term = true;
                    if (is_id_term) continue;
                    for (const auto& z : V[aa].representatives) {
                        // induced map on cones: precompose the F-part,
                        // act by e on the M-part
                        std::vector<K> img(cones[a].dim(), K(0));
                        int nc_a = F[a].flat.dim();
                        int nc_aa = F[aa].flat.dim();
                        for (const auto& [idx, c] : z) {
                            if (idx < nc_aa) {
                                int j = F[aa].coord[idx][1], g = F[aa].coord[idx][2];
                                LinComb<K> ge =
                                    C.compose_lc(a, aa, X.entries[j].obj, lc_single(g, K(1)),
                                                 lc_single(e, K(1)));
                                for (const auto& [gg, cc] : ge)
                                    img[F[a].index.at({0, j, gg})] += c * cc;
                            } else {
                                LinComb<K> acted = M.apply(a, aa, lc_single(e, K(1)),
                                                           lc_single(idx - nc_aa, K(1)));
                                for (const auto& [mm, cc] : acted) img[nc_a + mm] += c * cc;
                            }
                        }
                        W[a].add(std::move(img));
                    }
                }
            // boundaries: image of d from one degree below
            for (int i = 0; i < cones[a].dim(); ++i)
                if (cones[a].degrees[i] == low - 1) {
                    std::vector<K> img(cones[a].dim(), K(0));
                    for (const auto& [j, c] : cones[a].diff[i]) img[j] += c;
                    W[a].add(std::move(img));
                }
        }
        int pick_a = -1;
        LinComb<K> pick;
        for (int a = 0; a < n && pick_a < 0; ++a)
            for (const auto& z : V[a].representatives) {
                std::vector<K> dense(cones[a].dim(), K(0));
                for (const auto& [idx, c] : z) dense[idx] += c;
                if (!W[a].contains(dense)) { pick_a = a; pick = z; break; }
            }
        if (pick_a < 0)
            for (int a = 0; a < n && pick_a < 0; ++a)
                if (!V[a].representatives.empty()) { pick_a = a; pick = V[a].representatives[0]; }

        // attach h_{pick_a}[-low] with twist column -x and map component m
        int nc = F[pick_a].flat.dim();
        int new_idx = X.size();
        X.entries.push_back({pick_a, -low});
        for (auto& row : X.twist) row.emplace_back();
        X.twist.emplace_back(std::vector<LinComb<K>>(X.size()));
        phi.components.emplace_back();
        for (const auto& [idx, c] : pick) {
            if (idx < nc) {
                int j = F[pick_a].coord[idx][1], e = F[pick_a].coord[idx][2];
                lc_add_scaled(X.twist[j][new_idx], lc_single(e, K(1)), -c);
            } else {
                lc_add_scaled(phi.components[new_idx], lc_single(idx - nc, K(1)), c);
            }
        }
    }
}

/// Checks the module axioms against the category's structure constants.
template <class K, class Cat>
ValidationReport validate_module(const Cat& C, const Module<K>& M) {
    ValidationReport rep;
    int n = C.n_objects();
    for (int a = 0; a < n; ++a) {
        for (int m = 0; m < M.fibers[a].dim(); ++m) {
            LinComb<K> um = M.apply(a, a, C.identity(a), lc_single(m, K(1)));
            if (!lc_equal(um, lc_single(m, K(1))))
                rep.violations.push_back("module unit fails at fiber " + C.object_name(a) +
                                         " elt " + M.fibers[a].names[m]);
            if (!lc_is_zero(M.fibers[a].flat().d_of(M.fibers[a].diff[m])))
                rep.violations.push_back("fiber d^2 != 0 at " + C.object_name(a));
        }
    }
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            for (int e = 0; e < C.hom_dim(s, t); ++e) {
                LinComb<K> le = lc_single(e, K(1));
                for (int m = 0; m < M.fibers[t].dim(); ++m) {
                    // signed Leibniz
                    LinComb<K> lhs =
                        M.fibers[s].flat().d_of(M.apply(s, t, le, lc_single(m, K(1))));
                    LinComb<K> rhs = M.apply(s, t, le, M.fibers[t].diff[m]);
                    lc_add_scaled(rhs,
                                  M.apply(s, t, C.d_basis(s, t, e), lc_single(m, K(1))),
                                  K(parity_sign(M.fibers[t].degrees[m])));
                    if (!lc_equal(lhs, rhs))
                        rep.violations.push_back("module Leibniz fails for " +
                                                 C.basis_name(s, t, e) + " on fiber elt " +
                                                 M.fibers[t].names[m]);
                }
                // act(g.f) = act(f) act(g)
                for (int u = 0; u < n; ++u)
                    for (int g = 0; g < C.hom_dim(t, u); ++g)
                        for (int m = 0; m < M.fibers[u].dim(); ++m) {
                            LinComb<K> gf = C.compose_basis(s, t, u, g, e);
                            LinComb<K> lhs2 = M.apply(s, u, gf, lc_single(m, K(1)));
                            LinComb<K> rhs2 = M.apply(
                                s, t, le, M.apply(t, u, lc_single(g, K(1)), lc_single(m, K(1))));
                            if (!lc_equal(lhs2, rhs2))
                                rep.violations.push_back("module associativity fails at " +
                                                         C.basis_name(t, u, g) + " o " +
                                                         C.basis_name(s, t, e));
                        }
            }
    return rep;
}

}  // namespace knum
