#pragma once

#include <optional>
#include <string>
#include <vector>

#include "knum/lattice.hpp"
#include "knum/smith.hpp"

namespace knum {

/// Finitely generated abelian group given by generators and a relation matrix
/// whose columns are the relations. Invariant factors are normalized on
/// construction, so equality of presentations is decidable by comparison.
struct AbGroupPresentation {
    int generators = 0;
    IntMatrix relations;          // generators x (number of relations)
    std::vector<Int> torsion;     // invariant factors > 1, in divisibility order
    int free_rank = 0;

    AbGroupPresentation() = default;
    AbGroupPresentation(int gens, IntMatrix rel) : generators(gens), relations(std::move(rel)) {
        if (relations.rows != gens)
            throw InputError("AbGroupPresentation: relation rows != generator count");
        auto d = invariant_factors(relations);
        int nonzero = 0;
        for (const auto& x : d) {
            if (x == 0) continue;
            ++nonzero;
            if (x > 1) torsion.push_back(x);
        }
        free_rank = generators - nonzero;
    }

    static AbGroupPresentation free_group(int rank) {
        return AbGroupPresentation(rank, IntMatrix(rank, 0));
    }

    /// Normalized invariant factor list: torsion factors then one 0 per free
    /// generator (free rank = number of zeros).
    std::vector<Int> invariants() const {
        std::vector<Int> v = torsion;
        for (int i = 0; i < free_rank; ++i) v.push_back(0);
        return v;
    }

    bool torsion_free() const { return torsion.empty(); }

    bool operator==(const AbGroupPresentation& o) const {
        return free_rank == o.free_rank && torsion == o.torsion;
    }

    std::string to_string() const {
        if (free_rank == 0 && torsion.empty()) return "0";
        std::string s;
        if (free_rank == 1) s = "Z";
        else if (free_rank > 1) s = "Z^" + std::to_string(free_rank);
        for (const auto& t : torsion) {
            if (!s.empty()) s += " (+) ";
            s += "Z/" + t.str();
        }
        return s;
    }
};

/// Presentation of Z^ambient / S.
inline AbGroupPresentation quotient_presentation(int ambient_rank, const Sublattice& S) {
    if (S.ambient != ambient_rank)
        throw InputError("quotient_presentation: sublattice lives in rank " +
                         std::to_string(S.ambient) + ", not " + std::to_string(ambient_rank));
    return AbGroupPresentation(ambient_rank, S.basis);
}

inline bool is_torsion_free(const AbGroupPresentation& P) { return P.torsion_free(); }

/// Exactness data for a composable pair f, g (checking ... -> Z^m -> Z^q at
/// the middle). Distinguishes image-equals-kernel from finite index and
/// reports the index, since the torsion-freeness corollary turns on exactly
/// that distinction.
struct ExactnessReport {
    bool composite_zero = false;
    bool image_subset_kernel = false;
    bool image_equals_kernel = false;
    std::optional<Int> index;                // [Ker(g) : Im(f)] when finite
    bool surjective = false;                 // onto the declared target
    std::optional<std::vector<Int>> witness; // vector in Ker(g) \ Im(f)
    Sublattice image, kernel;

    bool exact() const { return composite_zero && image_equals_kernel && surjective; }
};

/// Checks exactness of Z^p --f--> Z^m --g--> (Z^q / target relations).
/// When no target presentation is supplied the target is the free group Z^q.
inline ExactnessReport check_exact_at(const IntMatrix& f, const IntMatrix& g,
                                      const std::optional<AbGroupPresentation>& target = {}) {
    if (f.rows != g.cols) throw InputError("check_exact_at: shapes not composable");
    ExactnessReport rep;
    rep.composite_zero = g.mul(f).is_zero();
    rep.image = image_lattice(f);
    rep.kernel = integer_kernel(g);
    rep.image_subset_kernel = rep.kernel.contains_lattice(rep.image);
    rep.image_equals_kernel = rep.image_subset_kernel && rep.image == rep.kernel;
    if (rep.image_subset_kernel) rep.index = lattice_index(rep.kernel, rep.image);
    if (!rep.image_equals_kernel) {
        for (int j = 0; j < rep.kernel.basis.cols; ++j) {
            auto v = rep.kernel.basis.col(j);
            if (!rep.image.contains(v)) { rep.witness = v; break; }
        }
    }
    // surjectivity onto the presented target: columns of g together with the
    // target relations must generate Z^q
    IntMatrix gen = g;
    if (target) {
        if (target->generators != g.rows)
            throw InputError("check_exact_at: target presentation rank mismatch");
        gen = g.hcat(target->relations);
    }
    AbGroupPresentation coker(g.rows, gen);
    rep.surjective = (coker.free_rank == 0 && coker.torsion.empty());
    return rep;
}

}  // namespace knum
