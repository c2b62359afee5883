#pragma once

#include <random>
#include <string>
#include <vector>

#include "knum/quiver.hpp"
#include "knum/twisted.hpp"

namespace knum {

/// Seeded generators for the property suites. Categories come from random
/// quivers with relations, so DG validity holds by construction; twisted
/// complexes are built by iterated shifts, sums and cones of random closed
/// morphisms, so Maurer-Cartan holds by construction. All draws go through
/// rng() directly to stay reproducible across standard libraries.
namespace rnd {

inline int pick(std::mt19937_64& rng, int n) {
    return static_cast<int>(rng() % static_cast<unsigned long long>(n));
}

inline QuiverPresentation<Rat> random_quiver(std::mt19937_64& rng, int max_objects = 4) {
    QuiverPresentation<Rat> q;
    int n = 1 + pick(rng, max_objects);
    for (int i = 0; i < n; ++i) q.vertices.push_back("v" + std::to_string(i));
    int arrows = pick(rng, 5);
    for (int a = 0; a < arrows && n >= 2; ++a) {
        int i = pick(rng, n - 1);
        int j = i + 1 + pick(rng, n - i - 1);
        q.arrows.push_back({"a" + std::to_string(a), i, j});
    }
    // occasional square-zero loop: a closed degree-0 endomorphism relation
    if (pick(rng, 4) == 0) {
        int v = pick(rng, n);
        int l = static_cast<int>(q.arrows.size());
        q.arrows.push_back({"l", v, v});
        typename QuiverPresentation<Rat>::Relation r;
        r.terms = {{Rat(1), {l, l}}};
        q.relations.push_back(r);
    }
    // occasional commutation or zero relation on parallel length-2 paths
    if (pick(rng, 3) == 0) {
        std::vector<std::vector<int>> twos;
        for (size_t a = 0; a < q.arrows.size(); ++a)
            for (size_t b = 0; b < q.arrows.size(); ++b)
                if (q.arrows[a].tgt == q.arrows[b].src && q.arrows[a].src != q.arrows[a].tgt &&
                    q.arrows[b].src != q.arrows[b].tgt)
                    twos.push_back({static_cast<int>(a), static_cast<int>(b)});
        if (!twos.empty()) {
            const auto& p = twos[pick(rng, static_cast<int>(twos.size()))];
            typename QuiverPresentation<Rat>::Relation r;
            // prefer a commutation relation when a distinct parallel path exists
            const std::vector<int>* other = nullptr;
            for (const auto& cand : twos) {
                if (cand == p) continue;
                if (q.arrows[cand[0]].src == q.arrows[p[0]].src &&
                    q.arrows[cand[1]].tgt == q.arrows[p[1]].tgt) {
                    other = &cand;
                    break;
                }
            }
            if (other) {
                r.terms = {{Rat(1), p}, {Rat(-1), *other}};
            } else {
                r.terms = {{Rat(1), p}};
            }
            q.relations.push_back(r);
        }
    }
    return q;
}

inline DGCategory<Rat> random_category(std::mt19937_64& rng, int max_objects = 4) {
    return from_quiver(random_quiver(rng, max_objects));
}

/// Random cocycle of total degree `degree` in the hom complex, with small
/// integer coefficients (possibly zero).
inline PerfMorphism<Rat> random_closed_morphism(std::mt19937_64& rng, const DGCategory<Rat>& C,
                                                const TwistedComplex<Rat>& X,
                                                const TwistedComplex<Rat>& Y) {
    TCHomComplex<Rat> H = tc_hom(C, X, Y);
    PerfMorphism<Rat> f = PerfMorphism<Rat>::zero(Y.size(), X.size());
    bool any = false;
    for (int d : H.flat.degrees)
        if (d == 0) any = true;
    if (!any) return f;
    auto org = H.flat.organize();
    FieldMatrix<Rat> d0 = org.cx.diff(0);
    auto kernel = d0.kernel_basis();
    LinComb<Rat> z;
    const auto& slots = org.flat_of[0 - org.lo];
    for (const auto& v : kernel) {
        int c = pick(rng, 5) - 2;
        if (c == 0) continue;
        for (size_t s = 0; s < slots.size(); ++s)
            if (!is_zero(v[s])) lc_add_scaled(z, lc_single(slots[s], Rat(1)), v[s] * Rat(c));
    }
    return morphism_from_cocycle(H, z, X.size(), Y.size());
}

inline TwistedComplex<Rat> random_twisted(std::mt19937_64& rng, const DGCategory<Rat>& C,
                                          int steps = 3, int max_entries = 4) {
    int n = C.n_objects();
    TwistedComplex<Rat> X = tc_representable<Rat>(C, pick(rng, n));
    if (pick(rng, 2)) X = tc_shift(X, pick(rng, 3) - 1);
    for (int s = 0; s < steps; ++s) {
        if (X.size() >= max_entries) break;
        int what = pick(rng, 3);
        if (what == 0) {
            X = tc_shift(X, pick(rng, 2) ? 1 : -1);
        } else {
            TwistedComplex<Rat> R = tc_representable<Rat>(C, pick(rng, n));
            if (pick(rng, 2)) R = tc_shift(R, pick(rng, 3) - 1);
            if (what == 1) {
                X = tc_direct_sum(X, R);
            } else if (pick(rng, 2)) {
                X = cone(C, random_closed_morphism(rng, C, X, R), X, R);
            } else {
                X = cone(C, random_closed_morphism(rng, C, R, X), R, X);
            }
        }
    }
    return X;
}

}  // namespace rnd
}  // namespace knum
