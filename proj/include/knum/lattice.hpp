#pragma once

#include <optional>
#include <vector>

#include "knum/int_matrix.hpp"
#include "knum/smith.hpp"

namespace knum {

/// Column Hermite normal form of the column span. Pivots are positive, sit in
/// strictly increasing rows left to right, entries to the left of a pivot in
/// its row are reduced into [0, pivot), and zero columns are dropped. Two
/// integer matrices span the same lattice iff their forms are identical.
inline IntMatrix hermite_columns(IntMatrix B) {
    int m = B.rows, ncols = B.cols;
    int r = 0;
    for (int i = 0; i < m && r < ncols; ++i) {
        // gcd all entries of row i in columns >= r into column r
        for (;;) {
            int sel = -1;
            Int best = 0;
            for (int j = r; j < ncols; ++j) {
                const Int& x = B.at(i, j);
                if (x == 0) continue;
                Int ax = x < 0 ? -x : x;
                if (sel < 0 || ax < best) { best = ax; sel = j; }
            }
            if (sel < 0) break;
            if (sel != r)
                for (int k = 0; k < m; ++k) std::swap(B.at(k, r), B.at(k, sel));
            bool clean = true;
            for (int j = r + 1; j < ncols; ++j) {
                if (B.at(i, j) == 0) continue;
                Int q = B.at(i, j) / B.at(i, r);
                if (q != 0)
                    for (int k = 0; k < m; ++k) B.at(k, j) -= q * B.at(k, r);
                if (B.at(i, j) != 0) clean = false;
            }
            if (clean) break;
        }
        if (B.at(i, r) == 0) continue;
        if (B.at(i, r) < 0)
            for (int k = 0; k < m; ++k) B.at(k, r) = -B.at(k, r);
        // normalize earlier columns at this pivot row: 0 <= entry < pivot
        for (int j = 0; j < r; ++j) {
            Int q = B.at(i, j) / B.at(i, r);
            if (B.at(i, j) - q * B.at(i, r) < 0) q -= 1;  // floor division
            if (q != 0)
                for (int k = 0; k < m; ++k) B.at(k, j) -= q * B.at(k, r);
        }
        ++r;
    }
    IntMatrix H(m, r);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < r; ++j) H.at(i, j) = B.at(i, j);
    return H;
}

/// A sublattice of Z^ambient, stored as the column Hermite form of a basis so
/// that equality of sublattices is a literal comparison.
struct Sublattice {
    int ambient = 0;
    IntMatrix basis;  // ambient x rank, Hermite-normalized

    Sublattice() = default;
    Sublattice(int amb, IntMatrix gens) : ambient(amb) {
        if (gens.rows != amb) throw InputError("Sublattice: generator rows != ambient rank");
        basis = hermite_columns(std::move(gens));
    }

    static Sublattice zero(int amb) { return Sublattice(amb, IntMatrix(amb, 0)); }
    static Sublattice full(int amb) { return Sublattice(amb, IntMatrix::identity(amb)); }

    int rank() const { return basis.cols; }

    bool operator==(const Sublattice& o) const {
        return ambient == o.ambient && basis == o.basis;
    }

    /// Membership via back-substitution along the pivot rows.
    bool contains(const std::vector<Int>& v) const {
        if (static_cast<int>(v.size()) != ambient)
            throw InputError("Sublattice::contains: vector length mismatch");
        std::vector<Int> w = v;
        for (int j = 0; j < basis.cols; ++j) {
            int p = -1;
            for (int i = 0; i < ambient; ++i)
                if (basis.at(i, j) != 0) { p = i; break; }
            Int q = w[p] / basis.at(p, j);
            if (w[p] - q * basis.at(p, j) != 0) return false;
            for (int i = 0; i < ambient; ++i) w[i] -= q * basis.at(i, j);
        }
        for (const auto& x : w)
            if (x != 0) return false;
        return true;
    }

    bool contains_lattice(const Sublattice& o) const {
        if (ambient != o.ambient) throw InputError("Sublattice: ambient rank mismatch");
        for (int j = 0; j < o.basis.cols; ++j)
            if (!contains(o.basis.col(j))) return false;
        return true;
    }
};

/// Z-basis of {v : Mv = 0}. Kernels of integer matrices are saturated, so the
/// returned lattice is primitive in the ambient Z^cols.
inline Sublattice integer_kernel(const IntMatrix& M) {
    SmithResult s = smith_normal_form(M);
    // Mx = 0  <=>  D y = 0 with x = V y; kernel columns of D are those with
    // zero diagonal entry (or beyond the diagonal range).
    std::vector<int> free_cols;
    int n = M.rows < M.cols ? M.rows : M.cols;
    for (int j = 0; j < M.cols; ++j)
        if (j >= n || s.D.at(j, j) == 0) free_cols.push_back(j);
    IntMatrix gens(M.cols, static_cast<int>(free_cols.size()));
    for (size_t k = 0; k < free_cols.size(); ++k)
        for (int i = 0; i < M.cols; ++i) gens.at(i, static_cast<int>(k)) = s.V.at(i, free_cols[k]);
    return Sublattice(M.cols, std::move(gens));
}

/// Hermite-normalized basis of the column span over Z.
inline Sublattice image_lattice(const IntMatrix& M) {
    return Sublattice(M.rows, M);
}

/// Image of a sublattice under an integer map.
inline Sublattice apply_map(const IntMatrix& f, const Sublattice& S) {
    if (f.cols != S.ambient) throw InputError("apply_map: shape mismatch");
    return Sublattice(f.rows, f.mul(S.basis));
}

/// Intersection via the kernel of the stacked-basis matrix [B1 | -B2].
inline Sublattice intersect(const Sublattice& S1, const Sublattice& S2) {
    if (S1.ambient != S2.ambient) throw InputError("intersect: ambient rank mismatch");
    int r1 = S1.rank(), r2 = S2.rank();
    IntMatrix stacked(S1.ambient, r1 + r2);
    for (int i = 0; i < S1.ambient; ++i) {
        for (int j = 0; j < r1; ++j) stacked.at(i, j) = S1.basis.at(i, j);
        for (int j = 0; j < r2; ++j) stacked.at(i, r1 + j) = -S2.basis.at(i, j);
    }
    Sublattice ker = integer_kernel(stacked);
    IntMatrix gens(S1.ambient, ker.rank());
    for (int k = 0; k < ker.rank(); ++k)
        for (int i = 0; i < S1.ambient; ++i) {
            Int acc = 0;
            for (int j = 0; j < r1; ++j) acc += S1.basis.at(i, j) * ker.basis.at(j, k);
            gens.at(i, k) = acc;
        }
    return Sublattice(S1.ambient, std::move(gens));
}

inline Sublattice lattice_sum(const Sublattice& S1, const Sublattice& S2) {
    if (S1.ambient != S2.ambient) throw InputError("lattice_sum: ambient rank mismatch");
    return Sublattice(S1.ambient, S1.basis.hcat(S2.basis));
}

/// Index [outer : inner] for inner <= outer of equal rank; nullopt when the
/// ranks differ (infinite index) or inner is not contained in outer.
inline std::optional<Int> lattice_index(const Sublattice& outer, const Sublattice& inner) {
    if (outer.ambient != inner.ambient) throw InputError("lattice_index: ambient mismatch");
    if (!outer.contains_lattice(inner)) return std::nullopt;
    if (outer.rank() != inner.rank()) return std::nullopt;
    // Solve outer.basis * C = inner.basis; C is integral by containment.
    int r = outer.rank();
    IntMatrix C(r, r);
    for (int j = 0; j < r; ++j) {
        std::vector<Int> w = inner.basis.col(j);
        for (int jj = 0; jj < r; ++jj) {
            int p = -1;
            for (int i = 0; i < outer.ambient; ++i)
                if (outer.basis.at(i, jj) != 0) { p = i; break; }
            Int q = w[p] / outer.basis.at(p, jj);
            C.at(jj, j) = q;
            for (int i = 0; i < outer.ambient; ++i) w[i] -= q * outer.basis.at(i, jj);
        }
    }
    Int d = det(C);
    return d < 0 ? -d : d;
}

}  // namespace knum
