#pragma once

#include <optional>
#include <string>
#include <vector>

#include "knum/errors.hpp"
#include "knum/fields.hpp"
#include "knum/linalg.hpp"

namespace knum {

/// Dense integer matrix with arbitrary-precision entries. Everything in the
/// toolkit that touches K-groups goes through this type; no floating point.
struct IntMatrix {
    int rows = 0, cols = 0;
    std::vector<Int> a;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
    IntMatrix(int r, int c, std::vector<Int> entries) : rows(r), cols(c), a(std::move(entries)) {
        if (a.size() != static_cast<size_t>(r) * c)
            throw InputError("IntMatrix: entry count does not match shape");
    }

    Int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Int& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static IntMatrix identity(int n) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static IntMatrix zero(int r, int c) { return IntMatrix(r, c); }

    bool is_zero() const {
        for (const auto& x : a)
            if (x != 0) return false;
        return true;
    }

    bool operator==(const IntMatrix& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    IntMatrix mul(const IntMatrix& o) const {
        if (cols != o.rows) throw InputError("IntMatrix::mul: shape mismatch");
        IntMatrix r(rows, o.cols);
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k) {
                if (at(i, k) == 0) continue;
                for (int j = 0; j < o.cols; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
            }
        return r;
    }

    std::vector<Int> apply(const std::vector<Int>& v) const {
        if (static_cast<int>(v.size()) != cols) throw InputError("IntMatrix::apply: shape mismatch");
        std::vector<Int> r(rows, Int(0));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) r[i] += at(i, j) * v[j];
        return r;
    }

    std::vector<Int> col(int j) const {
        std::vector<Int> v(rows);
        for (int i = 0; i < rows; ++i) v[i] = at(i, j);
        return v;
    }

    /// Stacks columns of o to the right of *this.
    IntMatrix hcat(const IntMatrix& o) const {
        if (rows != o.rows) throw InputError("IntMatrix::hcat: row mismatch");
        IntMatrix r(rows, cols + o.cols);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) r.at(i, j) = at(i, j);
            for (int j = 0; j < o.cols; ++j) r.at(i, cols + j) = o.at(i, j);
        }
        return r;
    }

    FieldMatrix<Rat> to_rational() const {
        FieldMatrix<Rat> m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(i, j) = Rat(at(i, j));
        return m;
    }

    int rank() const { return to_rational().rank(); }

    std::string to_string() const {
        std::string s = "[";
        for (int i = 0; i < rows; ++i) {
            s += "[";
            for (int j = 0; j < cols; ++j) {
                s += at(i, j).str();
                if (j + 1 < cols) s += ", ";
            }
            s += "]";
            if (i + 1 < rows) s += ", ";
        }
        return s + "]";
    }
};

/// Exact determinant by fraction-free Bareiss elimination.
inline Int det(const IntMatrix& m) {
    if (m.rows != m.cols) throw InputError("det: matrix not square");
    int n = m.rows;
    if (n == 0) return 1;
    IntMatrix w = m;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (w.at(k, k) == 0) {
            int sel = -1;
            for (int i = k + 1; i < n; ++i)
                if (w.at(i, k) != 0) { sel = i; break; }
            if (sel < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(sel, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                w.at(i, j) = (w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j)) / prev;
        prev = w.at(k, k);
    }
    return sign > 0 ? w.at(n - 1, n - 1) : -w.at(n - 1, n - 1);
}

/// Inverse of an integrally invertible matrix (|det| = 1 not required; returns
/// nullopt when the rational inverse is not integral or the matrix is singular).
inline std::optional<IntMatrix> integral_inverse(const IntMatrix& m) {
    if (m.rows != m.cols) throw InputError("integral_inverse: matrix not square");
    int n = m.rows;
    FieldMatrix<Rat> aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = Rat(m.at(i, j));
        aug.at(i, n + i) = Rat(1);
    }
    auto pivots = aug.rref();
    if (static_cast<int>(pivots.size()) != n) return std::nullopt;
    if (n > 0 && pivots.back() != n - 1) return std::nullopt;
    IntMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Rat& x = aug.at(i, n + j);
            if (boost::multiprecision::denominator(x) != 1) return std::nullopt;
            inv.at(i, j) = boost::multiprecision::numerator(x);
        }
    return inv;
}

}  // namespace knum
