#pragma once

#include <string>
#include <vector>

#include "knum/errors.hpp"
#include "knum/linalg.hpp"

namespace knum {

/// Finite cochain complex over an exact field on a bounded degree window.
/// dims[i] is the dimension in degree lo + i; d[i] maps degree lo+i to
/// degree lo+i+1 (rows = dim above, cols = dim here).
template <class K>
struct Complex {
    int lo = 0;
    std::vector<int> dims;
    std::vector<FieldMatrix<K>> d;

    Complex() = default;
    Complex(int lo_, std::vector<int> dims_) : lo(lo_), dims(std::move(dims_)) {
        for (size_t i = 0; i + 1 < dims.size(); ++i)
            d.emplace_back(dims[i + 1], dims[i]);
    }

    int hi() const { return lo + static_cast<int>(dims.size()) - 1; }
    bool in_window(int n) const { return n >= lo && n <= hi(); }
    int dim(int n) const { return in_window(n) ? dims[n - lo] : 0; }

    /// Differential out of degree n (zero matrix outside the window).
    FieldMatrix<K> diff(int n) const {
        int i = n - lo;
        if (i >= 0 && i + 1 < static_cast<int>(dims.size())) return d[i];
        return FieldMatrix<K>(dim(n + 1), dim(n));
    }

    FieldMatrix<K>& diff_ref(int n) { return d[n - lo]; }

    bool d_squared_zero() const {
        for (size_t i = 0; i + 1 < d.size(); ++i)
            if (!d[i + 1].mul(d[i]).is_zero()) return false;
        return true;
    }

    long long total_dim() const {
        long long t = 0;
        for (int x : dims) t += x;
        return t;
    }
};

/// Cohomology in one degree: dimension together with representative cocycles
/// (coordinates in the degree-n component).
template <class K>
struct CohomologyResult {
    int dim = 0;
    std::vector<std::vector<K>> representatives;
};

template <class K>
CohomologyResult<K> cohomology(const Complex<K>& C, int n) {
    CohomologyResult<K> res;
    if (C.dim(n) == 0) return res;
    FieldMatrix<K> dn = C.diff(n);
    FieldMatrix<K> dprev = C.diff(n - 1);
    auto kernel = dn.kernel_basis();
    Span<K> image;
    for (int j = 0; j < dprev.cols; ++j) {
        std::vector<K> col(dprev.rows);
        for (int i = 0; i < dprev.rows; ++i) col[i] = dprev.at(i, j);
        image.add(std::move(col));
    }
    Span<K> accumulated = image;
    for (auto& v : kernel) {
        if (accumulated.add(v)) {
            res.representatives.push_back(v);
            ++res.dim;
        }
    }
    return res;
}

template <class K>
int cohomology_dim(const Complex<K>& C, int n) {
    if (C.dim(n) == 0) return 0;
    FieldMatrix<K> dn = C.diff(n);
    int ker = C.dim(n) - dn.rank();
    return ker - C.diff(n - 1).rank();
}

inline int parity_sign(int n) { return ((n % 2) + 2) % 2 == 0 ? 1 : -1; }

/// Alternating sum of component dimensions; equals the alternating sum of
/// cohomology dimensions for any bounded complex with d^2 = 0.
template <class K>
long long euler_char(const Complex<K>& C) {
    long long chi = 0;
    for (size_t i = 0; i < C.dims.size(); ++i)
        chi += parity_sign(C.lo + static_cast<int>(i)) * static_cast<long long>(C.dims[i]);
    return chi;
}

template <class K>
long long euler_char_from_cohomology(const Complex<K>& C) {
    long long chi = 0;
    for (int n = C.lo; n <= C.hi(); ++n)
        chi += parity_sign(n) * static_cast<long long>(cohomology_dim(C, n));
    return chi;
}

template <class K>
bool is_acyclic(const Complex<K>& C) {
    for (int n = C.lo; n <= C.hi(); ++n)
        if (cohomology_dim(C, n) != 0) return false;
    return true;
}

}  // namespace knum
