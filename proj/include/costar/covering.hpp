#pragma once

// Covering machinery for star-free bipartite graphs.
//
// In a graph with no n disjoint stars K_{1,k} centred in A, a small set of
// A-vertices almost-covers every neighbourhood: there is S ⊆ A with
// |S| ≤ n-1 such that every a ∈ A has fewer than k neighbours outside N(S).
// Repeating the selection r times on disjoint pools yields a set W of
// (n-1)r vertices and a core Bc ⊆ B in which every vertex has at least r
// neighbours in W, while every vertex of A \ W has fewer than kr neighbours
// outside Bc.  These structures drive the d-template construction.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "costar/arith.hpp"
#include "costar/bits.hpp"
#include "costar/errors.hpp"
#include "costar/graph.hpp"

namespace costar {

namespace detail {

// Neighbourhood union over B of a set of A-vertices.
inline Bits neighbourhood_union(const BipartiteGraph& b, const std::vector<int>& as) {
    Bits acc(b.b_size());
    for (int a : as) acc |= b.row(a);
    return acc;
}

// Exhaustive max-coverage selection: among all m-subsets of `pool`, return
// the lexicographically first one whose neighbourhood union is largest.
// `pool` must be sorted ascending.  If |pool| <= m the whole pool is returned.
inline std::vector<int> max_coverage_subset_exact(const BipartiteGraph& b,
                                                  const std::vector<int>& pool, int m) {
    if (static_cast<int>(pool.size()) <= m) return pool;
    if (m == 0) return {};
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::vector<int> best;
    int best_cover = -1;
    const int p = static_cast<int>(pool.size());
    for (;;) {
        Bits acc(b.b_size());
        for (int i : idx) acc |= b.row(pool[static_cast<std::size_t>(i)]);
        const int cover = acc.count();
        if (cover > best_cover) {
            best_cover = cover;
            best.clear();
            for (int i : idx) best.push_back(pool[static_cast<std::size_t>(i)]);
        }
        // Advance to the next combination in lexicographic order.
        int j = m - 1;
        while (j >= 0 && idx[static_cast<std::size_t>(j)] == p - m + j) --j;
        if (j < 0) break;
        ++idx[static_cast<std::size_t>(j)];
        for (int h = j + 1; h < m; ++h)
            idx[static_cast<std::size_t>(h)] = idx[static_cast<std::size_t>(h - 1)] + 1;
    }
    return best;
}

// Greedy fallback: repeatedly take the pool vertex adding the most new
// coverage (ties to the lowest id).  Cheaper than the exhaustive scan but
// does not carry the selection guarantee; callers re-verify downstream.
inline std::vector<int> max_coverage_subset_greedy(const BipartiteGraph& b,
                                                   const std::vector<int>& pool, int m) {
    if (static_cast<int>(pool.size()) <= m) return pool;
    std::vector<int> chosen;
    std::vector<char> used(pool.size(), 0);
    Bits acc(b.b_size());
    for (int step = 0; step < m; ++step) {
        int best = -1, best_gain = -1;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (used[i]) continue;
            Bits gain = b.row(pool[i]);
            gain.remove(acc);
            const int g = gain.count();
            if (g > best_gain) {
                best_gain = g;
                best = static_cast<int>(i);
            }
        }
        used[static_cast<std::size_t>(best)] = 1;
        chosen.push_back(pool[static_cast<std::size_t>(best)]);
        acc |= b.row(pool[static_cast<std::size_t>(best)]);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

inline std::vector<int> max_coverage_subset(const BipartiteGraph& b, const std::vector<int>& pool,
                                            int m, bool greedy) {
    return greedy ? max_coverage_subset_greedy(b, pool, m)
                  : max_coverage_subset_exact(b, pool, m);
}

}  // namespace detail

// A set S ⊆ A of at most n-1 vertices maximizing |N(S)|.  When the host has
// no n disjoint K_{1,k} centred in A, every a ∈ A then has |N(a) \ N(S)| < k.
// If |A| <= n-1 the whole side is returned.  The exhaustive selection is the
// default; `greedy` trades the guarantee for speed (results are re-verified
// by callers in that mode).
inline std::vector<int> lambda_cover_set(const BipartiteGraph& b, int n, int k,
                                         bool greedy = false) {
    if (n < 1) throw argument_error("lambda_cover_set: n must be >= 1");
    if (k < 1) throw argument_error("lambda_cover_set: k must be >= 1");
    std::vector<int> pool(static_cast<std::size_t>(b.a_size()));
    for (int a = 0; a < b.a_size(); ++a) pool[static_cast<std::size_t>(a)] = a;
    return detail::max_coverage_subset(b, pool, n - 1, greedy);
}

// Result of the r-round covering selection.
struct CoverStructure {
    std::vector<std::vector<int>> rounds;  // S_1..S_r, disjoint (n-1)-subsets of A
    std::vector<int> w;                    // union of the rounds, sorted
    std::vector<int> w_prime;              // the final round S_r
    std::vector<int> covered;              // Bc = vertices of B with >= r neighbours in W
};

// Select r disjoint max-coverage (n-1)-subsets S_1..S_r of A and intersect
// their neighbourhoods.  Guarantees (for hosts with no n disjoint K_{1,k}
// centred in A): every b in `covered` has >= r neighbours in `w`; every
// a ∈ A \ w has < kr neighbours outside `covered`; `w_prime` covers
// `covered` and each of its vertices has <= kr neighbours outside it.
inline CoverStructure r_cover_structure(const BipartiteGraph& b, int n, int k, int r,
                                        bool greedy = false) {
    if (n < 1) throw argument_error("r_cover_structure: n must be >= 1");
    if (k < 1) throw argument_error("r_cover_structure: k must be >= 1");
    if (r < 1) throw argument_error("r_cover_structure: r must be >= 1");
    const long long need = static_cast<long long>(n - 1) * r;
    if (b.a_size() < need)
        throw size_error("r_cover_structure: side A has " + std::to_string(b.a_size()) +
                         " vertices, fewer than (n-1)r = " + std::to_string(need));
    CoverStructure out;
    Bits used(b.a_size());
    Bits core(b.b_size());
    for (int j = 0; j < b.b_size(); ++j) core.set(j);
    for (int h = 0; h < r; ++h) {
        std::vector<int> pool;
        for (int a = 0; a < b.a_size(); ++a)
            if (!used.test(a)) pool.push_back(a);
        std::vector<int> s = detail::max_coverage_subset(b, pool, n - 1, greedy);
        for (int a : s) used.set(a);
        core &= detail::neighbourhood_union(b, s);
        out.rounds.push_back(std::move(s));
    }
    out.w = used.to_vector();
    out.w_prime = out.rounds.back();
    out.covered = core.to_vector();
    return out;
}

// All A-vertices of degree at least k, under the promise that every B-vertex
// has degree at most bound_d (violations are reported as contract errors).
// For hosts with no n disjoint K_{1,k} centred in A the result has at most
// n*k*bound_d^2 elements; callers assert that bound.
inline std::vector<int> high_degree_vertices(const BipartiteGraph& b, int k, int bound_d) {
    if (k < 1) throw argument_error("high_degree_vertices: k must be >= 1");
    if (bound_d < 0) throw argument_error("high_degree_vertices: bound_d must be >= 0");
    for (int j = 0; j < b.b_size(); ++j)
        if (b.deg_b(j) > bound_d)
            throw contract_error("high_degree_vertices: B-vertex " + std::to_string(j) +
                                 " has degree " + std::to_string(b.deg_b(j)) +
                                 " exceeding the promised bound " + std::to_string(bound_d));
    std::vector<int> out;
    for (int a = 0; a < b.a_size(); ++a)
        if (b.deg_a(a) >= k) out.push_back(a);
    return out;
}

// Closed-form size bound asserted against high_degree_vertices results.
inline std::uint64_t high_degree_bound(int n, int k, int d) {
    return sat_mul(sat_mul(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)),
                   sat_mul(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(d)));
}

}  // namespace costar
