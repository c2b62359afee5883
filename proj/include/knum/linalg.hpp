#pragma once

#include <algorithm>
#include <map>
#include <type_traits>
#include <optional>
#include <utility>
#include <vector>

#include "knum/fields.hpp"

namespace knum {

/// Sparse linear combination of basis elements, kept sorted by index with no
/// zero coefficients. The canonical form makes equality a plain comparison.
template <class K>
using LinComb = std::vector<std::pair<int, K>>;

template <class K>
LinComb<K> lc_single(int idx, const K& c) {
    if (is_zero(c)) return {};
    return {{idx, c}};
}

template <class K>
void lc_add_scaled(LinComb<K>& dst, const LinComb<K>& src, const std::type_identity_t<K>& scale) {
    if (is_zero(scale) || src.empty()) return;
    LinComb<K> out;
    out.reserve(dst.size() + src.size());
    size_t i = 0, j = 0;
    while (i < dst.size() || j < src.size()) {
        if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
            out.push_back(dst[i++]);
        } else if (i == dst.size() || src[j].first < dst[i].first) {
            K c = src[j].second * scale;
            if (!is_zero(c)) out.emplace_back(src[j].first, c);
            ++j;
        } else {
            K c = dst[i].second + src[j].second * scale;
            if (!is_zero(c)) out.emplace_back(dst[i].first, c);
            ++i; ++j;
        }
    }
    dst = std::move(out);
}

template <class K>
LinComb<K> lc_scaled(const LinComb<K>& src, const std::type_identity_t<K>& scale) {
    LinComb<K> out;
    lc_add_scaled(out, src, scale);
    return out;
}

template <class K>
bool lc_is_zero(const LinComb<K>& a) { return a.empty(); }

template <class K>
bool lc_equal(const LinComb<K>& a, const LinComb<K>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].first != b[i].first || !(a[i].second == b[i].second)) return false;
    return true;
}

/// Dense matrix over an exact field. Row-major; all elimination is exact.
template <class K>
struct FieldMatrix {
    int rows = 0, cols = 0;
    std::vector<K> a;

    FieldMatrix() = default;
    FieldMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    K& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const K& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static FieldMatrix identity(int n) {
        FieldMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = K(1);
        return m;
    }

    bool is_zero() const {
        for (const auto& x : a)
            if (!knum::is_zero(x)) return false;
        return true;
    }

    FieldMatrix mul(const FieldMatrix& o) const {
        FieldMatrix r(rows, o.cols);
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k) {
                if (knum::is_zero(at(i, k))) continue;
                for (int j = 0; j < o.cols; ++j) {
                    K prod = at(i, k) * o.at(k, j);
                    if (!knum::is_zero(prod)) r.at(i, j) += prod;
                }
            }
        return r;
    }

    std::vector<K> apply(const std::vector<K>& v) const {
        std::vector<K> r(rows, K(0));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (!knum::is_zero(at(i, j)) && !knum::is_zero(v[j])) r[i] += at(i, j) * v[j];
        return r;
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    std::vector<int> rref() {
        std::vector<int> pivots;
        int r = 0;
        for (int c = 0; c < cols && r < rows; ++c) {
            int sel = -1;
            for (int i = r; i < rows; ++i)
                if (!knum::is_zero(at(i, c))) { sel = i; break; }
            if (sel < 0) continue;
            if (sel != r)
                for (int j = 0; j < cols; ++j) std::swap(at(sel, j), at(r, j));
            K inv = field_inverse(at(r, c));
            for (int j = c; j < cols; ++j) at(r, j) = at(r, j) * inv;
            for (int i = 0; i < rows; ++i) {
                if (i == r || knum::is_zero(at(i, c))) continue;
                K f = at(i, c);
                for (int j = c; j < cols; ++j) at(i, j) -= f * at(r, j);
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    int rank() const {
        FieldMatrix copy = *this;
        return static_cast<int>(copy.rref().size());
    }

    /// Basis of the right kernel {v : Mv = 0}, one vector per free column.
    std::vector<std::vector<K>> kernel_basis() const {
        FieldMatrix copy = *this;
        std::vector<int> pivots = copy.rref();
        std::vector<bool> is_pivot(cols, false);
        for (int p : pivots) is_pivot[p] = true;
        std::vector<std::vector<K>> basis;
        for (int c = 0; c < cols; ++c) {
            if (is_pivot[c]) continue;
            std::vector<K> v(cols, K(0));
            v[c] = K(1);
            for (size_t r = 0; r < pivots.size(); ++r)
                v[pivots[r]] = -copy.at(static_cast<int>(r), c);
            basis.push_back(std::move(v));
        }
        return basis;
    }
};

/// Incremental row space: tracks a set of vectors in echelon form, used to
/// extend bases and compute quotient representatives.
template <class K>
struct Span {
    std::vector<std::vector<K>> rows;  // echelonized
    std::vector<int> lead;

    /// Reduces v against the span; returns the residue.
    std::vector<K> reduce(std::vector<K> v) const {
        for (size_t i = 0; i < rows.size(); ++i) {
            int l = lead[i];
            if (!knum::is_zero(v[l])) {
                K f = v[l];
                for (size_t j = 0; j < v.size(); ++j) v[j] -= f * rows[i][j];
            }
        }
        return v;
    }

    bool contains(const std::vector<K>& v) const {
        auto r = reduce(v);
        for (const auto& x : r)
            if (!knum::is_zero(x)) return false;
        return true;
    }

    /// Adds v if independent; returns true when the span grew.
    bool add(std::vector<K> v) {
        v = reduce(std::move(v));
        int l = -1;
        for (size_t j = 0; j < v.size(); ++j)
            if (!knum::is_zero(v[j])) { l = static_cast<int>(j); break; }
        if (l < 0) return false;
        K inv = field_inverse(v[l]);
        for (auto& x : v) x = x * inv;
        // back-substitute into existing rows so lookups stay cheap
        for (size_t i = 0; i < rows.size(); ++i) {
            if (!knum::is_zero(rows[i][l])) {
                K f = rows[i][l];
                for (size_t j = 0; j < v.size(); ++j) rows[i][j] -= f * v[j];
            }
        }
        rows.push_back(std::move(v));
        lead.push_back(l);
        return true;
    }

    int dim() const { return static_cast<int>(rows.size()); }
};

}  // namespace knum
