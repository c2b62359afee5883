#pragma once

#include <vector>

#include "knum/int_matrix.hpp"

namespace knum {

/// Result of Smith normalization: D = U * M * V with U, V unimodular and D
/// diagonal, d1 | d2 | ..., all di >= 0.
struct SmithResult {
    IntMatrix U, D, V;

    std::vector<Int> diagonal() const {
        std::vector<Int> d;
        int n = D.rows < D.cols ? D.rows : D.cols;
        for (int i = 0; i < n; ++i) d.push_back(D.at(i, i));
        return d;
    }
};

namespace detail {

inline void swap_rows(IntMatrix& m, int i, int j) {
    for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
}
inline void swap_cols(IntMatrix& m, int i, int j) {
    for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
}
inline void add_row(IntMatrix& m, int dst, int src, const Int& f) {
    for (int c = 0; c < m.cols; ++c) m.at(dst, c) += f * m.at(src, c);
}
inline void add_col(IntMatrix& m, int dst, int src, const Int& f) {
    for (int r = 0; r < m.rows; ++r) m.at(r, dst) += f * m.at(r, src);
}
inline void negate_row(IntMatrix& m, int i) {
    for (int c = 0; c < m.cols; ++c) m.at(i, c) = -m.at(i, c);
}

}  // namespace detail

/// Smith normal form. Pivot selection is the minimal nonzero absolute value
/// in the working submatrix, ties broken by (row, col) order, so the sequence
/// of operations (hence U and V) is deterministic.
inline SmithResult smith_normal_form(const IntMatrix& M) {
    using namespace detail;
    IntMatrix A = M;
    IntMatrix U = IntMatrix::identity(M.rows);
    IntMatrix V = IntMatrix::identity(M.cols);
    int n = M.rows < M.cols ? M.rows : M.cols;

    for (int t = 0; t < n; ++t) {
        for (;;) {
            // pick pivot: minimal |entry| != 0 in A[t.., t..]
            int pi = -1, pj = -1;
            Int best = 0;
            for (int i = t; i < A.rows; ++i)
                for (int j = t; j < A.cols; ++j) {
                    const Int& x = A.at(i, j);
                    if (x == 0) continue;
                    Int ax = x < 0 ? -x : x;
                    if (pi < 0 || ax < best) { best = ax; pi = i; pj = j; }
                }
            if (pi < 0) { pi = -1; break; }
            if (pi != t) { swap_rows(A, t, pi); swap_rows(U, t, pi); }
            if (pj != t) { swap_cols(A, t, pj); swap_cols(V, t, pj); }

            bool clean = true;
            for (int i = t + 1; i < A.rows; ++i) {
                if (A.at(i, t) == 0) continue;
                Int q = A.at(i, t) / A.at(t, t);  // truncated; remainder smaller than pivot
                if (q != 0) { add_row(A, i, t, -q); add_row(U, i, t, -q); }
                if (A.at(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < A.cols; ++j) {
                if (A.at(t, j) == 0) continue;
                Int q = A.at(t, j) / A.at(t, t);
                if (q != 0) { add_col(A, j, t, -q); add_col(V, j, t, -q); }
                if (A.at(t, j) != 0) clean = false;
            }
            if (!clean) continue;  // a smaller remainder exists; re-pick pivot

            // pivot must divide every remaining entry before we move on
            bool divides = true;
            for (int i = t + 1; i < A.rows && divides; ++i)
                for (int j = t + 1; j < A.cols && divides; ++j)
                    if (A.at(i, j) % A.at(t, t) != 0) {
                        add_row(A, t, i, 1);
                        add_row(U, t, i, 1);
                        divides = false;
                    }
            if (divides) break;
        }
        if (A.at(t, t) == 0) break;  // rest of the submatrix is zero
        if (A.at(t, t) < 0) { negate_row(A, t); negate_row(U, t); }
    }
    return SmithResult{U, A, V};
}

/// Diagonal of the Smith form (invariant factors, with trailing zeros when
/// the rank is deficient).
inline std::vector<Int> invariant_factors(const IntMatrix& M) {
    return smith_normal_form(M).diagonal();
}

}  // namespace knum
