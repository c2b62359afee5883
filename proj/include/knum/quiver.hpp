#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "knum/dgcat.hpp"

namespace knum {

/// Quiver with relations. Relations are linear combinations of parallel paths
/// of equal length (length-homogeneous), so the relation ideal is graded by
/// path length and bounded enumeration computes hom spaces exactly.
template <class K>
struct QuiverPresentation {
    std::vector<std::string> vertices;
    struct Arrow {
        std::string name;
        int src, tgt;
    };
    std::vector<Arrow> arrows;
    struct Relation {
        // terms: coefficient * path; a path lists arrow indices in traversal
        // order (first arrow applied first)
        std::vector<std::pair<K, std::vector<int>>> terms;
    };
    std::vector<Relation> relations;
    int path_length_cap = 24;

    bool acyclic() const {
        int n = static_cast<int>(vertices.size());
        std::vector<std::vector<int>> adj(n);
        for (const auto& ar : arrows) adj[ar.src].push_back(ar.tgt);
        std::vector<int> state(n, 0);
        bool cycle = false;
        auto dfs = [&](auto&& self, int v) -> void {
            state[v] = 1;
            for (int w : adj[v]) {
                if (state[w] == 1) cycle = true;
                else if (state[w] == 0) self(self, w);
            }
            state[v] = 2;
        };
        for (int v = 0; v < n && !cycle; ++v)
            if (state[v] == 0) dfs(dfs, v);
        return !cycle;
    }
};

namespace detail {

template <class K>
void validate_quiver(const QuiverPresentation<K>& Q) {
    int n = static_cast<int>(Q.vertices.size());
    for (const auto& ar : Q.arrows)
        if (ar.src < 0 || ar.src >= n || ar.tgt < 0 || ar.tgt >= n)
            throw InputError("quiver arrow '" + ar.name + "' has an unknown endpoint");
    for (const auto& rel : Q.relations) {
        if (rel.terms.empty()) throw InputError("empty quiver relation");
        int src = -1, tgt = -1;
        size_t len = 0;
        bool first = true;
        for (const auto& [coef, path] : rel.terms) {
            if (path.empty()) throw InputError("quiver relation contains a length-0 path");
            int s = Q.arrows[path.front()].src;
            int t = Q.arrows[path.back()].tgt;
            for (size_t i = 0; i + 1 < path.size(); ++i)
                if (Q.arrows[path[i]].tgt != Q.arrows[path[i + 1]].src)
                    throw InputError("quiver relation path is not composable");
            if (first) {
                src = s; tgt = t; len = path.size(); first = false;
            } else {
                if (s != src || t != tgt)
                    throw InputError("quiver relation mixes non-parallel paths");
                if (path.size() != len)
                    throw InputError("quiver relation is not length-homogeneous");
            }
        }
    }
}

}  // namespace detail

/// Path category of a quiver modulo its relation ideal, as a DG category
/// concentrated in degree 0. Homs are spans of surviving paths; composition is
/// concatenation followed by reduction modulo the ideal. Throws when hom
/// dimensions fail to stabilize before the declared path-length cap.
template <class K>
DGCategory<K> from_quiver(const QuiverPresentation<K>& Q, int characteristic = 0) {
    detail::validate_quiver(Q);
    int n = static_cast<int>(Q.vertices.size());

    using Path = std::vector<int>;  // arrow indices, traversal order
    // paths_by_len[len][pair] -> ordered list of paths
    std::vector<std::vector<std::vector<Path>>> paths_by_len;
    // reduction of every enumerated path to surviving basis paths of its pair
    std::map<std::pair<int, Path>, LinComb<K>> reduce_map;  // key (pair, path)
    // surviving basis paths per pair, in enumeration order
    std::vector<std::vector<Path>> basis(static_cast<size_t>(n) * n);

    auto pair_of = [&](const Path& p) {
        if (p.empty()) throw InputError("internal: pair_of on empty path");
        return Q.arrows[p.front()].src * n + Q.arrows[p.back()].tgt;
    };

    // length 0: identities, one per vertex, never reducible
    {
        std::vector<std::vector<Path>> level(static_cast<size_t>(n) * n);
        for (int v = 0; v < n; ++v) {
            level[v * n + v].push_back({});
            basis[v * n + v].push_back({});
            reduce_map[{v * n + v, {}}] = lc_single(0, K(1));
        }
        paths_by_len.push_back(std::move(level));
    }

    int stabilized_at = -1;
    for (int len = 1; len <= Q.path_length_cap; ++len) {
        std::vector<std::vector<Path>> level(static_cast<size_t>(n) * n);
        long long count = 0;
        for (int pr = 0; pr < n * n; ++pr) {
            int at = pr % n;  // current endpoint of every path in this pair
            for (const auto& prefix : paths_by_len[len - 1][pr]) {
                for (size_t ai = 0; ai < Q.arrows.size(); ++ai) {
                    if (Q.arrows[ai].src != at) continue;
                    Path p = prefix;
                    p.push_back(static_cast<int>(ai));
                    level[(pr / n) * n + Q.arrows[ai].tgt].push_back(p);
                    ++count;
                }
            }
        }
        for (auto& v : level) std::sort(v.begin(), v.end());
        if (count == 0) { stabilized_at = len; break; }
        if (count > 200000)
            throw InputError("quiver path enumeration exploded; tighten relations or cap");

        // ideal elements of this length: u . r . v with matching endpoints
        bool any_alive = false;
        for (int pr = 0; pr < n * n; ++pr) {
            const auto& plist = level[pr];
            if (plist.empty()) continue;
            std::map<Path, int> pos;
            for (size_t i = 0; i < plist.size(); ++i) pos[plist[i]] = static_cast<int>(i);
            Span<K> ideal;
            auto add_ideal_element = [&](const typename QuiverPresentation<K>::Relation& rel,
                                         const Path& v, const Path& u) {
                std::vector<K> row(plist.size(), K(0));
                for (const auto& [coef, mid] : rel.terms) {
                    Path whole = v;
                    whole.insert(whole.end(), mid.begin(), mid.end());
                    whole.insert(whole.end(), u.begin(), u.end());
                    row[pos.at(whole)] += coef;
                }
                ideal.add(std::move(row));
            };
            for (const auto& rel : Q.relations) {
                int rsrc = Q.arrows[rel.terms[0].second.front()].src;
                int rtgt = Q.arrows[rel.terms[0].second.back()].tgt;
                int rlen = static_cast<int>(rel.terms[0].second.size());
                for (int lv = 0; lv + rlen <= len; ++lv) {
                    int lu = len - rlen - lv;
                    // v: (pr/n) -> rsrc of length lv; u: rtgt -> (pr%n) of length lu
                    for (const auto& v : paths_by_len[lv][(pr / n) * n + rsrc])
                        for (const auto& u : paths_by_len[lu][rtgt * n + (pr % n)])
                            add_ideal_element(rel, v, u);
                }
            }
            // RREF rows of `ideal` give reductions: pivot path = -sum(rest)
            std::vector<bool> reducible(plist.size(), false);
            for (size_t ri = 0; ri < ideal.rows.size(); ++ri) {
                int piv = ideal.lead[ri];
                reducible[piv] = true;
            }
            for (size_t i = 0; i < plist.size(); ++i) {
                if (!reducible[i]) {
                    int new_idx = static_cast<int>(basis[pr].size());
                    basis[pr].push_back(plist[i]);
                    reduce_map[{pr, plist[i]}] = lc_single(new_idx, K(1));
                    any_alive = true;
                }
            }
            // second pass now that surviving indices are known
            for (size_t ri = 0; ri < ideal.rows.size(); ++ri) {
                int piv = ideal.lead[ri];
                LinComb<K> red;
                for (size_t j = 0; j < plist.size(); ++j) {
                    if (static_cast<int>(j) == piv || is_zero(ideal.rows[ri][j])) continue;
                    if (reducible[j])
                        throw InputError("internal: RREF row references a reducible path");
                    lc_add_scaled(red, reduce_map.at({pr, plist[j]}), -ideal.rows[ri][j]);
                }
                reduce_map[{pr, plist[piv]}] = std::move(red);
            }
        }
        paths_by_len.push_back(std::move(level));
        if (!any_alive) { stabilized_at = len; break; }
    }
    if (stabilized_at < 0)
        throw InputError("infinite-dimensional hom detected: path length exceeded cap " +
                         std::to_string(Q.path_length_cap) + " without stabilizing");

    // assemble the category
    DGCategory<K> C;
    C.objects = Q.vertices;
    C.window_lo = 0;
    C.window_hi = 0;
    C.characteristic = characteristic;
    C.from_acyclic_quiver = Q.acyclic();
    C.init_tables();
    auto path_name = [&](const Path& p, int vertex) {
        if (p.empty()) return "id_" + Q.vertices[vertex];
        std::string s;
        for (auto it = p.rbegin(); it != p.rend(); ++it) {
            if (!s.empty()) s += "*";
            s += Q.arrows[*it].name;
        }
        return s;
    };
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            for (const auto& p : basis[s * n + t]) C.hom(s, t).add(path_name(p, s), 0);
    for (int v = 0; v < n; ++v) C.ids[v] = lc_single(0, K(1));
    C.init_composition();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const auto& gb = basis[b * n + c];
                const auto& fb = basis[a * n + b];
                for (size_t g = 0; g < gb.size(); ++g)
                    for (size_t f = 0; f < fb.size(); ++f) {
                        Path whole = fb[f];
                        whole.insert(whole.end(), gb[g].begin(), gb[g].end());
                        LinComb<K> red;
                        if (static_cast<int>(whole.size()) >= stabilized_at) {
                            // all paths at/after the stabilization length lie
                            // in the ideal (graded ideal, every long path has a
                            // reducible subpath), so the composite vanishes --
                            // unless the length was never enumerated because no
                            // paths existed, in which case it cannot arise.
                            auto it = reduce_map.find({a * n + c, whole});
                            red = (it == reduce_map.end()) ? LinComb<K>{} : it->second;
                        } else {
                            red = reduce_map.at({a * n + c, whole});
                        }
                        C.set_composition(a, b, c, static_cast<int>(g), static_cast<int>(f),
                                          std::move(red));
                    }
            }
    return C;
}

}  // namespace knum
