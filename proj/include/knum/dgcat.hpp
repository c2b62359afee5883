#pragma once

#include <optional>
#include <string>
#include <vector>

#include "knum/complex.hpp"
#include "knum/errors.hpp"
#include "knum/linalg.hpp"

namespace knum {

/// Graded hom space with a named basis. The differential is stored per basis
/// element as a linear combination of basis elements one degree up.
template <class K>
struct HomSpace {
    std::vector<std::string> names;
    std::vector<int> degrees;
    std::vector<LinComb<K>> diff;

    int dim() const { return static_cast<int>(names.size()); }

    int add(const std::string& name, int degree) {
        names.push_back(name);
        degrees.push_back(degree);
        diff.emplace_back();
        return dim() - 1;
    }
};

/// Finite DG category over an exact field: labeled objects, graded hom
/// complexes, composition structure constants and distinguished identities.
/// Degrees of all hom basis elements stay inside [window_lo, window_hi];
/// operations that would leave the window fail loudly.
template <class K>
struct DGCategory {
    std::vector<std::string> objects;
    std::vector<HomSpace<K>> hom_spaces;                     // index src * n + tgt
    std::vector<std::vector<std::vector<LinComb<K>>>> comp;  // [(a*n+b)*n+c][g][f]
    std::vector<LinComb<K>> ids;                             // in hom(a, a)
    int window_lo = 0, window_hi = 0;
    int characteristic = 0;
    bool from_acyclic_quiver = false;

    int n_objects() const { return static_cast<int>(objects.size()); }
    const std::string& object_name(int a) const { return objects[a]; }

    int pair_index(int s, int t) const { return s * n_objects() + t; }
    int triple_index(int a, int b, int c) const {
        return (a * n_objects() + b) * n_objects() + c;
    }

    HomSpace<K>& hom(int s, int t) { return hom_spaces[pair_index(s, t)]; }
    const HomSpace<K>& hom(int s, int t) const { return hom_spaces[pair_index(s, t)]; }

    int hom_dim(int s, int t) const { return hom(s, t).dim(); }
    int basis_degree(int s, int t, int idx) const { return hom(s, t).degrees[idx]; }
    const std::string& basis_name(int s, int t, int idx) const { return hom(s, t).names[idx]; }
    LinComb<K> d_basis(int s, int t, int idx) const { return hom(s, t).diff[idx]; }
    LinComb<K> identity(int a) const { return ids[a]; }

    LinComb<K> compose_basis(int a, int b, int c, int g, int f) const {
        return comp[triple_index(a, b, c)][g][f];
    }

    LinComb<K> d_lc(int s, int t, const LinComb<K>& x) const {
        LinComb<K> out;
        for (const auto& [idx, coef] : x) lc_add_scaled(out, hom(s, t).diff[idx], coef);
        return out;
    }

    LinComb<K> compose_lc(int a, int b, int c, const LinComb<K>& g, const LinComb<K>& f) const {
        LinComb<K> out;
        const auto& table = comp[triple_index(a, b, c)];
        for (const auto& [gi, gc] : g)
            for (const auto& [fi, fc] : f) lc_add_scaled(out, table[gi][fi], gc * fc);
        return out;
    }

    /// Degree of a homogeneous combination; nullopt for 0 or mixed degrees.
    std::optional<int> lc_degree(int s, int t, const LinComb<K>& x) const {
        std::optional<int> deg;
        for (const auto& [idx, coef] : x) {
            int d = basis_degree(s, t, idx);
            if (!deg) deg = d;
            else if (*deg != d) return std::nullopt;
        }
        return deg;
    }

    void init_tables() {
        int n = n_objects();
        hom_spaces.assign(static_cast<size_t>(n) * n, {});
        ids.assign(n, {});
        comp.clear();
    }

    /// Allocates composition tables once all hom bases are in place.
    void init_composition() {
        int n = n_objects();
        comp.assign(static_cast<size_t>(n) * n * n, {});
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    comp[triple_index(a, b, c)].assign(
                        hom(b, c).dim(), std::vector<LinComb<K>>(hom(a, b).dim()));
    }

    void set_composition(int a, int b, int c, int g, int f, LinComb<K> value) {
        comp[triple_index(a, b, c)][g][f] = std::move(value);
    }

    std::string elt_string(int s, int t, const LinComb<K>& x) const {
        if (x.empty()) return "0";
        std::string out;
        for (size_t i = 0; i < x.size(); ++i) {
            if (i) out += " + ";
            out += to_string(x[i].second) + "*" + basis_name(s, t, x[i].first);
        }
        return out;
    }
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks every DG axiom on the basis: degree bookkeeping, d^2 = 0, the
/// Leibniz rule d(g.f) = dg.f + (-1)^{deg g} g.df, associativity on basis
/// triples and both unit laws. Validation never throws; every violation is
/// reported with the offending names.
template <class K>
ValidationReport validate(const DGCategory<K>& C) {
    ValidationReport rep;
    int n = C.n_objects();
    auto loc = [&](int s, int t, int i) {
        return C.object_name(s) + "->" + C.object_name(t) + ":" + C.basis_name(s, t, i);
    };
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            const auto& H = C.hom(s, t);
            for (int i = 0; i < H.dim(); ++i) {
                if (H.degrees[i] < C.window_lo || H.degrees[i] > C.window_hi)
                    rep.violations.push_back("degree outside window at " + loc(s, t, i));
                for (const auto& [j, c] : H.diff[i])
                    if (H.degrees[j] != H.degrees[i] + 1)
                        rep.violations.push_back("differential not degree +1 at " + loc(s, t, i));
                if (!lc_is_zero(C.d_lc(s, t, H.diff[i])))
                    rep.violations.push_back("d^2 != 0 at " + loc(s, t, i));
            }
        }
    for (int a = 0; a < n; ++a) {
        const auto& ida = C.ids[a];
        if (C.lc_degree(a, a, ida).value_or(0) != 0)
            rep.violations.push_back("identity of " + C.object_name(a) + " not degree 0");
        if (!lc_is_zero(C.d_lc(a, a, ida)))
            rep.violations.push_back("identity of " + C.object_name(a) + " not closed");
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            for (int f = 0; f < C.hom(a, b).dim(); ++f) {
                LinComb<K> unit = lc_single(f, K(1));
                if (!lc_equal(C.compose_lc(a, b, b, C.ids[b], unit), unit))
                    rep.violations.push_back("left unit fails at " + loc(a, b, f));
                if (!lc_equal(C.compose_lc(a, a, b, unit, C.ids[a]), unit))
                    rep.violations.push_back("right unit fails at " + loc(a, b, f));
            }
            for (int c = 0; c < n; ++c)
                for (int g = 0; g < C.hom(b, c).dim(); ++g)
                    for (int f = 0; f < C.hom(a, b).dim(); ++f) {
                        const LinComb<K>& gf = C.compose_basis(a, b, c, g, f);
                        int dg = C.basis_degree(b, c, g), df = C.basis_degree(a, b, f);
                        for (const auto& [idx, coef] : gf)
                            if (C.basis_degree(a, c, idx) != dg + df)
                                rep.violations.push_back("composition not degree-additive at " +
                                                         loc(b, c, g) + " o " + loc(a, b, f));
                        // Leibniz: d(g.f) = dg.f + (-1)^{deg g} g.df
                        LinComb<K> lhs = C.d_lc(a, c, gf);
                        LinComb<K> rhs = C.compose_lc(a, b, c, C.hom(b, c).diff[g], lc_single(f, K(1)));
                        lc_add_scaled(rhs,
                                      C.compose_lc(a, b, c, lc_single(g, K(1)), C.hom(a, b).diff[f]),
                                      K(parity_sign(dg)));
                        if (!lc_equal(lhs, rhs))
                            rep.violations.push_back("Leibniz fails at " + loc(b, c, g) + " o " +
                                                     loc(a, b, f));
                    }
        }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int dd = 0; dd < n; ++dd)
                    for (int h = 0; h < C.hom(c, dd).dim(); ++h)
                        for (int g = 0; g < C.hom(b, c).dim(); ++g)
                            for (int f = 0; f < C.hom(a, b).dim(); ++f) {
                                LinComb<K> hg_f = C.compose_lc(
                                    a, b, dd, C.compose_basis(b, c, dd, h, g), lc_single(f, K(1)));
                                LinComb<K> h_gf = C.compose_lc(
                                    a, c, dd, lc_single(h, K(1)), C.compose_basis(a, b, c, g, f));
                                if (!lc_equal(hg_f, h_gf))
                                    rep.violations.push_back(
                                        "associativity fails at " + loc(c, dd, h) + " o " +
                                        loc(b, c, g) + " o " + loc(a, b, f));
                            }
    return rep;
}

/// Opposite category: hom(a,b) becomes hom(b,a), composition is reversed with
/// the standard Koszul sign g .op f = (-1)^{|f||g|} f . g (this fixes the
/// global convention the sign discipline of the diagonal bimodule leaves
/// open). Applying it twice returns the original data on the nose.
template <class K>
DGCategory<K> opposite(const DGCategory<K>& C) {
    DGCategory<K> O;
    O.objects = C.objects;
    O.window_lo = C.window_lo;
    O.window_hi = C.window_hi;
    O.characteristic = C.characteristic;
    int n = C.n_objects();
    O.init_tables();
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) O.hom(s, t) = C.hom(t, s);
    O.ids = C.ids;
    O.init_composition();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int g = 0; g < O.hom(b, c).dim(); ++g)
                    for (int f = 0; f < O.hom(a, b).dim(); ++f) {
                        // g in hom_C(c,b), f in hom_C(b,a); f .C g lands in hom_C(c,a)
                        int sign = parity_sign(C.basis_degree(c, b, g) * C.basis_degree(b, a, f));
                        O.set_composition(a, b, c, g, f,
                                          lc_scaled(C.compose_basis(c, b, a, f, g), K(sign)));
                    }
    return O;
}

/// DG functor data: an object map together with per-pair images of hom basis
/// elements (as combinations in the target's hom basis). The target indexing
/// is whatever category the functor points at; the struct itself is
/// target-agnostic.
template <class K>
struct DGFunctor {
    std::vector<int> obj_map;
    std::vector<std::vector<LinComb<K>>> hom_map;  // [src pair][basis idx]

    int operator()(int a) const { return obj_map[a]; }

    LinComb<K> apply(int n_src_objects, int s, int t, const LinComb<K>& x) const {
        const auto& table = hom_map[s * n_src_objects + t];
        LinComb<K> out;
        for (const auto& [idx, coef] : x) lc_add_scaled(out, table[idx], coef);
        return out;
    }
};

template <class K>
DGFunctor<K> identity_functor(const DGCategory<K>& C) {
    DGFunctor<K> F;
    int n = C.n_objects();
    for (int a = 0; a < n; ++a) F.obj_map.push_back(a);
    F.hom_map.resize(static_cast<size_t>(n) * n);
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            auto& tab = F.hom_map[s * n + t];
            for (int i = 0; i < C.hom(s, t).dim(); ++i) tab.push_back(lc_single(i, K(1)));
        }
    return F;
}

/// Full subcategory on a subset of objects, with the inclusion functor.
template <class K>
std::pair<DGCategory<K>, DGFunctor<K>> full_subcategory(const DGCategory<K>& C,
                                                        const std::vector<int>& objs) {
    DGCategory<K> S;
    for (int a : objs) {
        if (a < 0 || a >= C.n_objects())
            throw InputError("full_subcategory: unknown object index " + std::to_string(a));
        S.objects.push_back(C.objects[a]);
    }
    S.window_lo = C.window_lo;
    S.window_hi = C.window_hi;
    S.characteristic = C.characteristic;
    S.from_acyclic_quiver = C.from_acyclic_quiver;
    int m = static_cast<int>(objs.size());
    S.init_tables();
    for (int s = 0; s < m; ++s)
        for (int t = 0; t < m; ++t) S.hom(s, t) = C.hom(objs[s], objs[t]);
    for (int a = 0; a < m; ++a) S.ids[a] = C.ids[objs[a]];
    S.init_composition();
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int g = 0; g < S.hom(b, c).dim(); ++g)
                    for (int f = 0; f < S.hom(a, b).dim(); ++f)
                        S.set_composition(a, b, c, g, f,
                                          C.compose_basis(objs[a], objs[b], objs[c], g, f));
    DGFunctor<K> incl;
    incl.obj_map = objs;
    incl.hom_map.resize(static_cast<size_t>(m) * m);
    for (int s = 0; s < m; ++s)
        for (int t = 0; t < m; ++t)
            for (int i = 0; i < S.hom(s, t).dim(); ++i)
                incl.hom_map[s * m + t].push_back(lc_single(i, K(1)));
    return {std::move(S), std::move(incl)};
}

/// Checks that F : Src -> Tgt preserves degrees, differentials, composition
/// and identities. Tgt only needs the category-like interface.
template <class K, class SrcCat, class TgtCat>
ValidationReport validate_functor(const SrcCat& S, const TgtCat& T, const DGFunctor<K>& F) {
    ValidationReport rep;
    int n = S.n_objects();
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            int fs = F(s), ft = F(t);
            for (int i = 0; i < S.hom_dim(s, t); ++i) {
                LinComb<K> img = F.apply(n, s, t, lc_single(i, K(1)));
                for (const auto& [j, c] : img)
                    if (T.basis_degree(fs, ft, j) != S.basis_degree(s, t, i))
                        rep.violations.push_back("functor not degree-preserving at " +
                                                 S.basis_name(s, t, i));
                LinComb<K> d_img;
                for (const auto& [j, c] : img) lc_add_scaled(d_img, T.d_basis(fs, ft, j), c);
                if (!lc_equal(d_img, F.apply(n, s, t, S.d_basis(s, t, i))))
                    rep.violations.push_back("functor does not commute with d at " +
                                             S.basis_name(s, t, i));
            }
        }
    for (int a = 0; a < n; ++a) {
        LinComb<K> img_id = F.apply(n, a, a, S.identity(a));
        if (!lc_equal(img_id, T.identity(F(a))))
            rep.violations.push_back("functor does not preserve identity of " + S.object_name(a));
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int g = 0; g < S.hom_dim(b, c); ++g)
                    for (int f = 0; f < S.hom_dim(a, b); ++f) {
                        LinComb<K> lhs = F.apply(n, a, c, S.compose_basis(a, b, c, g, f));
                        LinComb<K> rhs;
                        LinComb<K> fg = F.apply(n, b, c, lc_single(g, K(1)));
                        LinComb<K> ff = F.apply(n, a, b, lc_single(f, K(1)));
                        for (const auto& [gi, gc] : fg)
                            for (const auto& [fi, fc] : ff)
                                lc_add_scaled(rhs, T.compose_basis(F(a), F(b), F(c), gi, fi),
                                              gc * fc);
                        if (!lc_equal(lhs, rhs))
                            rep.violations.push_back("functor does not preserve composition at " +
                                                     S.basis_name(b, c, g) + " o " +
                                                     S.basis_name(a, b, f));
                    }
    return rep;
}

}  // namespace knum
