#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "knum/dgcat.hpp"
#include "knum/flat_complex.hpp"

namespace knum {

/// One-sided twisted complex over a DG category: a formal sum of shifted
/// representables h_{a_i}[r_i] with a degree-1 twist. The twist component
/// twist[t][s] points from entry s to entry t and is nonzero only for t < s,
/// so alpha is strictly triangular for the entry-list order; cones append
/// entries and preserve the invariant. Maurer-Cartan here reads
///   (-1)^{r_t} d(alpha_ts) + (alpha.alpha)_ts = 0,
/// the sign coming from the shift of the target summand.
template <class K>
struct TwistedComplex {
    struct Entry {
        int obj;
        int shift;
    };
    std::vector<Entry> entries;
    std::vector<std::vector<LinComb<K>>> twist;  // [t][s]

    int size() const { return static_cast<int>(entries.size()); }

    void reshape() {
        twist.assign(size(), std::vector<LinComb<K>>(size()));
    }
};

template <class K, class Cat>
TwistedComplex<K> tc_representable(const Cat& C, int obj) {
    (void)C;
    TwistedComplex<K> X;
    X.entries.push_back({obj, 0});
    X.reshape();
    return X;
}

/// X[k]: shifts move by k and the twist picks up (-1)^k, which keeps
/// Maurer-Cartan intact degreewise.
template <class K>
TwistedComplex<K> tc_shift(TwistedComplex<K> X, int k) {
    for (auto& e : X.entries) e.shift += k;
    if (k % 2 != 0)
        for (auto& row : X.twist)
            for (auto& c : row) c = lc_scaled(c, K(-1));
    return X;
}

template <class K>
TwistedComplex<K> tc_direct_sum(const TwistedComplex<K>& X, const TwistedComplex<K>& Y) {
    TwistedComplex<K> Z;
    Z.entries = X.entries;
    Z.entries.insert(Z.entries.end(), Y.entries.begin(), Y.entries.end());
    Z.reshape();
    int nx = X.size();
    for (int t = 0; t < nx; ++t)
        for (int s = 0; s < nx; ++s) Z.twist[t][s] = X.twist[t][s];
    for (int t = 0; t < Y.size(); ++t)
        for (int s = 0; s < Y.size(); ++s) Z.twist[nx + t][nx + s] = Y.twist[t][s];
    return Z;
}

/// Verifies strict triangularity, degree bookkeeping and Maurer-Cartan; the
/// empty string means the twist is valid.
template <class K, class Cat>
std::string mc_defect(const Cat& C, const TwistedComplex<K>& X) {
    int m = X.size();
    for (int t = 0; t < m; ++t)
        for (int s = 0; s < m; ++s) {
            if (lc_is_zero(X.twist[t][s])) continue;
            if (t >= s) return "twist not strictly triangular at (" + std::to_string(t) + "," +
                               std::to_string(s) + ")";
            int src = X.entries[s].obj, tgt = X.entries[t].obj;
            for (const auto& [idx, c] : X.twist[t][s]) {
                int want = 1 - X.entries[s].shift + X.entries[t].shift;
                if (C.basis_degree(src, tgt, idx) != want)
                    return "twist component not of total degree 1 at (" + std::to_string(t) +
                           "," + std::to_string(s) + ")";
            }
        }
    for (int t = 0; t < m; ++t)
        for (int s = 0; s < m; ++s) {
            int src = X.entries[s].obj, tgt = X.entries[t].obj;
            LinComb<K> defect = lc_scaled(C.d_lc(src, tgt, X.twist[t][s]),
                                          K(parity_sign(X.entries[t].shift)));
            for (int mid = 0; mid < m; ++mid)
                lc_add_scaled(defect,
                              C.compose_lc(src, X.entries[mid].obj, tgt, X.twist[t][mid],
                                           X.twist[mid][s]),
                              K(1));
            if (!lc_is_zero(defect))
                return "Maurer-Cartan fails at (" + std::to_string(t) + "," +
                       std::to_string(s) + ")";
        }
    return "";
}

/// Hom complex between twisted complexes, on the flat basis (i, j, e) with
/// total degree deg(e) + r_i - s_j. The differential is
///   D(phi) = (-1)^{s_j} d(phi) + alpha_Y . phi - (-1)^{|phi|} phi . alpha_X.
template <class K>
struct TCHomComplex {
    FlatComplex<K> flat;
    std::vector<std::array<int, 3>> coord;       // flat index -> (i, j, elt)
    std::map<std::array<int, 3>, int> index;     // (i, j, elt) -> flat index
};

template <class K, class Cat>
TCHomComplex<K> tc_hom(const Cat& C, const TwistedComplex<K>& X, const TwistedComplex<K>& Y) {
    TCHomComplex<K> H;
    for (int i = 0; i < X.size(); ++i)
        for (int j = 0; j < Y.size(); ++j) {
            int src = X.entries[i].obj, tgt = Y.entries[j].obj;
            for (int e = 0; e < C.hom_dim(src, tgt); ++e) {
                int n = C.basis_degree(src, tgt, e) + X.entries[i].shift - Y.entries[j].shift;
                if (n < -512 || n > 512) throw WindowError("hom complex degree overflow");
                H.index[{i, j, e}] = H.flat.dim();
                H.coord.push_back({i, j, e});
                H.flat.add(n);
            }
        }
    for (int f = 0; f < H.flat.dim(); ++f) {
        auto [i, j, e] = H.coord[f];
        int n = H.flat.degrees[f];
        int src = X.entries[i].obj, tgt = Y.entries[j].obj;
        LinComb<K> out;
        auto push = [&](int ii, int jj, const LinComb<K>& val, const K& scale) {
            for (const auto& [idx, c] : val)
                lc_add_scaled(out, lc_single(H.index.at({ii, jj, idx}), K(1)), c * scale);
        };
        push(i, j, C.d_basis(src, tgt, e), K(parity_sign(Y.entries[j].shift)));
        for (int jj = 0; jj < Y.size(); ++jj) {
            if (lc_is_zero(Y.twist[jj][j])) continue;
            push(i, jj,
                 C.compose_lc(src, tgt, Y.entries[jj].obj, Y.twist[jj][j], lc_single(e, K(1))),
                 K(1));
        }
        for (int ii = 0; ii < X.size(); ++ii) {
            if (lc_is_zero(X.twist[i][ii])) continue;
            push(ii, j,
                 C.compose_lc(X.entries[ii].obj, src, tgt, lc_single(e, K(1)), X.twist[i][ii]),
                 K(-parity_sign(n)));
        }
        H.flat.diff[f] = std::move(out);
    }
    return H;
}

/// Degree-0 morphism of twisted complexes: components[t][s] from X-entry s to
/// Y-entry t, each of total degree 0.
template <class K>
struct PerfMorphism {
    std::vector<std::vector<LinComb<K>>> comp;  // [Y entry][X entry]

    static PerfMorphism zero(int y_size, int x_size) {
        PerfMorphism f;
        f.comp.assign(y_size, std::vector<LinComb<K>>(x_size));
        return f;
    }
};

template <class K>
PerfMorphism<K> morphism_from_cocycle(const TCHomComplex<K>& H, const LinComb<K>& z,
                                      int x_size, int y_size) {
    PerfMorphism<K> f = PerfMorphism<K>::zero(y_size, x_size);
    for (const auto& [idx, c] : z) {
        auto [i, j, e] = H.coord[idx];
        lc_add_scaled(f.comp[j][i], lc_single(e, K(1)), c);
    }
    return f;
}

template <class K, class Cat>
bool is_closed(const Cat& C, const TwistedComplex<K>& X, const TwistedComplex<K>& Y,
               const PerfMorphism<K>& f) {
    TCHomComplex<K> H = tc_hom(C, X, Y);
    LinComb<K> z;
    for (int t = 0; t < Y.size(); ++t)
        for (int s = 0; s < X.size(); ++s)
            for (const auto& [idx, c] : f.comp[t][s]) {
                if (H.flat.degrees[H.index.at({s, t, idx})] != 0) return false;
                lc_add_scaled(z, lc_single(H.index.at({s, t, idx}), K(1)), c);
            }
    return lc_is_zero(H.flat.d_of(z));
}

/// Cone of a closed degree-0 morphism: entries of Y then entries of X shifted
/// by one, twist [[alpha_Y, f], [0, -alpha_X]]. Throws when the result fails
/// Maurer-Cartan, which pinpoints a non-closed f.
template <class K, class Cat>
TwistedComplex<K> cone(const Cat& C, const PerfMorphism<K>& f, const TwistedComplex<K>& X,
                       const TwistedComplex<K>& Y) {
    TwistedComplex<K> Z;
    Z.entries = Y.entries;
    for (const auto& e : X.entries) Z.entries.push_back({e.obj, e.shift + 1});
    Z.reshape();
    int ny = Y.size();
    for (int t = 0; t < ny; ++t)
        for (int s = 0; s < ny; ++s) Z.twist[t][s] = Y.twist[t][s];
    for (int t = 0; t < X.size(); ++t)
        for (int s = 0; s < X.size(); ++s)
            Z.twist[ny + t][ny + s] = lc_scaled(X.twist[t][s], K(-1));
    for (int t = 0; t < ny; ++t)
        for (int s = 0; s < X.size(); ++s) Z.twist[t][ny + s] = f.comp[t][s];
    std::string defect = mc_defect(C, Z);
    if (!defect.empty())
        throw StructureError("cone: " + defect + " (morphism not closed?)");
    return Z;
}

template <class K, class Cat>
long long chi(const Cat& C, const TwistedComplex<K>& X, const TwistedComplex<K>& Y) {
    TCHomComplex<K> H = tc_hom(C, X, Y);
    long long v = 0;
    for (int d : H.flat.degrees) v += parity_sign(d);
    return v;
}

/// Quasi-isomorphisms are detected levelwise: the cone must have acyclic hom
/// complexes from every representable.
template <class K, class Cat>
bool is_quasi_iso(const Cat& C, const TwistedComplex<K>& X, const TwistedComplex<K>& Y,
                  const PerfMorphism<K>& f) {
    TwistedComplex<K> cn = cone(C, f, X, Y);
    for (int a = 0; a < C.n_objects(); ++a) {
        TCHomComplex<K> H = tc_hom(C, tc_representable<K>(C, a), cn);
        if (!flat_is_acyclic(H.flat)) return false;
    }
    return true;
}

/// Transport along a DG functor: relabel entries and push the twist through
/// the functor's hom maps. Maurer-Cartan is re-verified in the target.
template <class K, class SrcCat, class TgtCat>
TwistedComplex<K> extend_scalars(const SrcCat& S, const TgtCat& T, const DGFunctor<K>& F,
                                 const TwistedComplex<K>& X) {
    TwistedComplex<K> Y;
    for (const auto& e : X.entries) Y.entries.push_back({F(e.obj), e.shift});
    Y.reshape();
    int n = S.n_objects();
    for (int t = 0; t < X.size(); ++t)
        for (int s = 0; s < X.size(); ++s) {
            if (lc_is_zero(X.twist[t][s])) continue;
            Y.twist[t][s] = F.apply(n, X.entries[s].obj, X.entries[t].obj, X.twist[t][s]);
        }
    std::string defect = mc_defect(T, Y);
    if (!defect.empty()) throw StructureError("extend_scalars: " + defect);
    return Y;
}

}  // namespace knum
