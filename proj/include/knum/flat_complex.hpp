#pragma once

#include <map>
#include <vector>

#include "knum/complex.hpp"
#include "knum/linalg.hpp"

namespace knum {

/// A complex presented on a flat basis: every basis element carries a degree
/// and the differential is a linear combination of elements one degree up.
/// Hom complexes, module fibers and xi-path spaces all take this shape.
template <class K>
struct FlatComplex {
    std::vector<int> degrees;
    std::vector<LinComb<K>> diff;

    int dim() const { return static_cast<int>(degrees.size()); }

    void add(int degree, LinComb<K> d = {}) {
        degrees.push_back(degree);
        diff.push_back(std::move(d));
    }

    LinComb<K> d_of(const LinComb<K>& x) const {
        LinComb<K> out;
        for (const auto& [i, c] : x) lc_add_scaled(out, diff[i], c);
        return out;
    }

    bool d_squared_zero() const {
        for (int i = 0; i < dim(); ++i)
            if (!lc_is_zero(d_of(diff[i]))) return false;
        return true;
    }

    struct Organized {
        Complex<K> cx;
        int lo = 0;
        std::vector<std::vector<int>> flat_of;   // [deg - lo][slot] -> flat index
        std::vector<std::pair<int, int>> pos_of; // flat -> (deg - lo, slot)
    };

    /// Slices the flat basis by degree and assembles the matrix form.
    Organized organize() const {
        Organized o;
        if (degrees.empty()) return o;
        int lo = degrees[0], hi = degrees[0];
        for (int d : degrees) { lo = std::min(lo, d); hi = std::max(hi, d); }
        o.lo = lo;
        o.flat_of.assign(hi - lo + 1, {});
        o.pos_of.assign(degrees.size(), {0, 0});
        for (int i = 0; i < dim(); ++i) {
            auto& slot = o.flat_of[degrees[i] - lo];
            o.pos_of[i] = {degrees[i] - lo, static_cast<int>(slot.size())};
            slot.push_back(i);
        }
        std::vector<int> dims;
        for (const auto& s : o.flat_of) dims.push_back(static_cast<int>(s.size()));
        o.cx = Complex<K>(lo, dims);
        for (int i = 0; i < dim(); ++i) {
            auto [di, si] = o.pos_of[i];
            for (const auto& [j, c] : diff[i]) {
                auto [dj, sj] = o.pos_of[j];
                if (dj != di + 1)
                    throw StructureError("flat differential is not of degree +1");
                o.cx.diff_ref(degrees[i]).at(sj, si) += c;
            }
        }
        return o;
    }
};

template <class K>
struct FlatCohomology {
    int dim = 0;
    std::vector<LinComb<K>> representatives;  // cocycles on the flat basis
};

template <class K>
FlatCohomology<K> flat_cohomology(const FlatComplex<K>& F, int n) {
    FlatCohomology<K> out;
    bool any = false;
    for (int d : F.degrees)
        if (d == n) any = true;
    if (!any) return out;
    auto org = F.organize();
    auto coh = cohomology(org.cx, n);
    out.dim = coh.dim;
    for (const auto& rep : coh.representatives) {
        LinComb<K> x;
        const auto& slots = org.flat_of[n - org.lo];
        for (size_t s = 0; s < slots.size(); ++s)
            if (!is_zero(rep[s])) lc_add_scaled(x, lc_single(slots[s], K(1)), rep[s]);
        out.representatives.push_back(std::move(x));
    }
    return out;
}

template <class K>
int flat_cohomology_dim(const FlatComplex<K>& F, int n) {
    bool any = false;
    for (int d : F.degrees)
        if (d == n || d == n - 1 || d == n + 1) any = true;
    if (!any) return 0;
    auto org = F.organize();
    return cohomology_dim(org.cx, n);
}

template <class K>
bool flat_is_acyclic(const FlatComplex<K>& F) {
    if (F.dim() == 0) return true;
    auto org = F.organize();
    return is_acyclic(org.cx);
}

/// Mapping cone of a chain map u : C -> D between flat complexes. The C-part
/// sits with degrees lowered by one; d(x, m) = (-d_C x, u(x) + d_D m).
template <class K>
FlatComplex<K> flat_cone(const FlatComplex<K>& C, const FlatComplex<K>& D,
                         const std::vector<LinComb<K>>& u) {
    FlatComplex<K> R;
    int nc = C.dim();
    for (int i = 0; i < nc; ++i) {
        LinComb<K> total = lc_scaled(C.diff[i], K(-1));  // C-part keeps its indices
        for (const auto& [j, c] : u[i]) lc_add_scaled(total, lc_single(nc + j, K(1)), c);
        R.add(C.degrees[i] - 1, std::move(total));
    }
    for (int i = 0; i < D.dim(); ++i) {
        LinComb<K> d;
        for (const auto& [j, c] : D.diff[i]) lc_add_scaled(d, lc_single(nc + j, K(1)), c);
        R.add(D.degrees[i], std::move(d));
    }
    return R;
}

}  // namespace knum
