#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "costar/arith.hpp"
#include "costar/chain.hpp"
#include "costar/errors.hpp"
#include "costar/graph.hpp"
#include "costar/partition.hpp"
#include "costar/patterns.hpp"

namespace costar {

/// Worst-case block count of cochromatic_matching.
inline std::uint64_t z_bound(int n, int m) {
  return sat_mul(3, sat_pow(6, static_cast<std::uint64_t>(n - 2) + (m - 2)));
}

/// Worst-case per-side block count of bipartite_matching_partition.
inline std::uint64_t f_bound(int n, int m) {
  if (n <= 2 || m <= 2) return 1;
  const std::uint64_t q2 = 2ull * (n - 1) * (m - 1);
  const std::uint64_t child = std::max(f_bound(n - 1, m), f_bound(n, m - 1));
  return sat_mul(q2, sat_pow(child, q2));
}

/// Worst-case block count of matching_partition.
inline std::uint64_t t_bound(int n) {
  const std::uint64_t z = z_bound(n, n);
  return sat_mul(z, sat_pow(f_bound(n, n), z));
}

namespace detail {

/// Rethrows class_violation with witness ids translated from a subgraph's
/// local ids back to the caller's (map_b for the bottom side when the
/// subgraph was bipartite; otherwise both sides use map_a).
template <class Fn>
auto with_id_map(const std::vector<int>& map_a, const std::vector<int>* map_b, Fn&& fn) {
  try {
    return fn();
  } catch (class_violation& e) {
    for (auto& v : e.witness) v = map_a[v];
    for (auto& v : e.witness_a) v = map_a[v];
    for (auto& v : e.witness_b) v = map_b ? (*map_b)[v] : map_a[v];
    throw;
  }
}

/// Exact maximum independent set, preferring the branch that keeps the
/// lowest-id vertex, so the result is the lexicographically least maximum.
inline void max_independent_set(const Graph& g, Bits cand, std::vector<int>& cur,
                                std::vector<int>& best) {
  if (static_cast<int>(cur.size()) + cand.count() <= static_cast<int>(best.size())) return;
  const int v = cand.find_first();
  if (v < 0) {
    if (cur.size() > best.size()) best = cur;
    return;
  }
  Bits taken = cand;
  taken.reset(v);
  taken.remove(g.neighbours(v));
  cur.push_back(v);
  max_independent_set(g, taken, cur, best);
  cur.pop_back();
  cand.reset(v);
  max_independent_set(g, cand, cur, best);
}

}  // namespace detail

/// Partition of a graph with no induced 2K2 and no induced C4 into at most
/// three blocks: a maximum independent set X, the clique of vertices with
/// exactly one X-neighbour, and the clique of vertices with two or more.
inline LabelledPartition cochromatic_2k2_c4(const Graph& g) {
  if (auto w = find_induced(g, {PatternFamily::matching, 2, 1}))
    throw class_violation(format_pattern({PatternFamily::matching, 2, 1}), *w);
  if (auto w = find_induced(g, {PatternFamily::co_matching, 2, 1}))
    throw class_violation(format_pattern({PatternFamily::co_matching, 2, 1}), *w);

  Bits cand(g.n());
  for (int v = 0; v < g.n(); ++v) cand.set(v);
  std::vector<int> cur, x;
  detail::max_independent_set(g, cand, cur, x);

  Bits in_x = Bits::from_vector(g.n(), x);
  std::vector<int> y, z;
  for (int v = 0; v < g.n(); ++v) {
    if (in_x.test(v)) continue;
    Bits common = g.neighbours(v);
    common &= in_x;
    (common.count() == 1 ? y : z).push_back(v);
  }
  if (!g.is_independent(x) || !g.is_clique(y) || !g.is_clique(z))
    throw contract_error("three-block split produced a wrong kind");

  LabelledPartition p;
  if (!x.empty()) p.blocks.push_back({BlockKind::independent, Side::general, x});
  if (!y.empty()) p.blocks.push_back({BlockKind::clique, Side::general, y});
  if (!z.empty()) p.blocks.push_back({BlockKind::clique, Side::general, z});
  return p;
}

namespace detail {

/// The six-bag split around a 4-cycle p0-p2-p1-p3 of h (p0p1 and p2p3 are
/// the diagonals, i.e. non-edges). Bags, in eligibility order: joined to
/// {p0,p1}; joined to {p2,p3}; co-joined to {p0,p2}, {p2,p1}, {p1,p3},
/// {p3,p0}. Every vertex lands in its first eligible bag.
inline std::array<std::vector<int>, 6> six_bags(const Graph& h, int p0, int p1, int p2, int p3) {
  std::array<std::vector<int>, 6> bags;
  for (int v = 0; v < h.n(); ++v) {
    const bool a0 = h.has_edge(v, p0) || v == p0;
    const bool a1 = h.has_edge(v, p1) || v == p1;
    const bool a2 = h.has_edge(v, p2) || v == p2;
    const bool a3 = h.has_edge(v, p3) || v == p3;
    if (h.has_edge(v, p0) && h.has_edge(v, p1))
      bags[0].push_back(v);
    else if (h.has_edge(v, p2) && h.has_edge(v, p3))
      bags[1].push_back(v);
    else if (!a0 && !a2)
      bags[2].push_back(v);
    else if (!a2 && !a1)
      bags[3].push_back(v);
    else if (!a1 && !a3)
      bags[4].push_back(v);
    else if (!a3 && !a0)
      bags[5].push_back(v);
    else
      throw contract_error("vertex fits no bag around the chosen 4-cycle");
  }
  return bags;
}

}  // namespace detail

/// Splits a graph without induced nK2 and co-mK2 (plain complement) into
/// cliques and independent sets, recursing on the six-bag split around an
/// induced C4 (shrinks m) or 2K2 (shrinks n) until the base class is reached.
inline LabelledPartition cochromatic_matching(const Graph& g, int n, int m) {
  if (n < 1 || m < 1) throw argument_error("multiplicities must be at least 1");
  LabelledPartition p;
  if (n == 1) {
    if (auto w = find_induced(g, {PatternFamily::matching, 1, 1}))
      throw class_violation(format_pattern({PatternFamily::matching, 1, 1}), *w);
    std::vector<int> all(g.n());
    for (int v = 0; v < g.n(); ++v) all[v] = v;
    if (!all.empty()) p.blocks.push_back({BlockKind::independent, Side::general, all});
    return p;
  }
  if (m == 1) {
    if (auto w = find_induced(g, {PatternFamily::co_matching, 1, 1}))
      throw class_violation(format_pattern({PatternFamily::co_matching, 1, 1}), *w);
    std::vector<int> all(g.n());
    for (int v = 0; v < g.n(); ++v) all[v] = v;
    if (!all.empty()) p.blocks.push_back({BlockKind::clique, Side::general, all});
    return p;
  }

  auto c4 = find_induced(g, {PatternFamily::co_matching, 2, 1});
  std::optional<std::vector<int>> mk;
  if (!c4) {
    mk = find_induced(g, {PatternFamily::matching, 2, 1});
    if (!mk) return cochromatic_2k2_c4(g);
  }
  const bool via_c4 = c4.has_value();
  if (via_c4 && m <= 2)
    throw class_violation(format_pattern({PatternFamily::co_matching, 2, 1}), *c4);
  if (!via_c4 && n <= 2)
    throw class_violation(format_pattern({PatternFamily::matching, 2, 1}), *mk);

  // Both witnesses name two non-adjacent pairs of the host we bag around:
  // the C4's diagonals in g itself, the matching's edges in the complement.
  const std::vector<int>& e = via_c4 ? *c4 : *mk;
  const Graph h = via_c4 ? g : g.complement();
  auto bags = detail::six_bags(h, e[0], e[1], e[2], e[3]);

  for (std::size_t t = 0; t < bags.size(); ++t) {
    if (bags[t].empty()) continue;
    const bool joined_pair = t < 2;  // joined to a non-edge of h
    int cn = n, cm = m;
    if (via_c4 == joined_pair)
      --cm;  // the bag cannot extend a co-matching of g
    else
      --cn;  // the bag cannot extend a matching of g
    Graph sub = g.induced(bags[t]);
    LabelledPartition subp = detail::with_id_map(
        bags[t], nullptr, [&] { return cochromatic_matching(sub, cn, cm); });
    for (auto& blk : subp.blocks) {
      for (auto& v : blk.vertices) v = bags[t][v];
      p.blocks.push_back(std::move(blk));
    }
  }
  if (static_cast<std::uint64_t>(p.block_count()) > z_bound(n, m))
    throw contract_error("cochromatic split exceeded its block bound");
  return p;
}

/// Partitions both sides of a bipartite graph without side-respecting nK2
/// and bipartite co-mK2 so that every cross pair of blocks is 2K2-free:
/// chain template -> refinement -> collapse, then recursion per block pair
/// with the multiplicity the pair's classes lost, intersected per block.
inline LabelledPartition bipartite_matching_partition(const BipartiteGraph& g, int n, int m) {
  if (n < 2 || m < 2) throw argument_error("multiplicities must be at least 2");
  LabelledPartition out;
  if (n <= 2 || m <= 2) {
    // Nothing to split: such graphs are already 2K2-free (a bipartite
    // co-2K2 is again a 2K2 up to swapping the matched pairs).
    if (auto w = find_induced_bipartite(g, {PatternFamily::matching, n, 1}))
      throw class_violation(format_pattern({PatternFamily::matching, n, 1}), w->a, w->b);
    if (auto w = find_induced_bipartite(g, {PatternFamily::co_matching, m, 1}))
      throw class_violation(format_pattern({PatternFamily::co_matching, m, 1}), w->a, w->b);
    std::vector<int> as(g.a_size()), bs(g.b_size());
    for (int a = 0; a < g.a_size(); ++a) as[a] = a;
    for (int b = 0; b < g.b_size(); ++b) bs[b] = b;
    if (!as.empty()) out.blocks.push_back({BlockKind::unconstrained, Side::top, as});
    if (!bs.empty()) out.blocks.push_back({BlockKind::unconstrained, Side::bottom, bs});
    if (!as.empty() && !bs.empty())
      out.guarantees.push_back({0, 1, format_pattern({PatternFamily::matching, 2, 1})});
    return out;
  }

  const ChainTemplate t = refine_to_nm_template(g, n, m);
  const LabelledPartition coarse = collapse_template(t);
  const int per_side = 2 * t.q;
  std::vector<std::vector<int>> as(per_side), bs(per_side);
  for (int i = 0; i < per_side; ++i) as[i] = coarse.blocks[i].vertices;
  for (int j = 0; j < per_side; ++j) bs[j] = coarse.blocks[per_side + j].vertices;

  std::vector<std::vector<std::vector<int>>> labels_a(per_side), labels_b(per_side);
  for (int i = 0; i < per_side; ++i)
    for (int j = 0; j < per_side; ++j) {
      const bool same_parity = (i / t.q) == (j / t.q);
      const int cn = same_parity ? n - 1 : n;
      const int cm = same_parity ? m : m - 1;
      BipartiteGraph sub = g.induced(as[i], bs[j]);
      LabelledPartition subp = detail::with_id_map(
          as[i], &bs[j], [&] { return bipartite_matching_partition(sub, cn, cm); });
      std::vector<int> la(as[i].size(), 0), lb(bs[j].size(), 0);
      for (std::size_t blk = 0; blk < subp.blocks.size(); ++blk)
        for (int v : subp.blocks[blk].vertices)
          (subp.blocks[blk].side == Side::top ? la : lb)[v] = static_cast<int>(blk);
      labels_a[i].push_back(std::move(la));
      labels_b[j].push_back(std::move(lb));
    }

  std::vector<Block> a_blocks, b_blocks;
  auto emit = [](const std::vector<std::vector<int>>& groups,
                 const std::vector<std::vector<std::vector<int>>>& labels, Side side,
                 std::vector<Block>& sink) {
    for (std::size_t i = 0; i < groups.size(); ++i) {
      const auto cells = intersect_labelings(labels[i], static_cast<int>(groups[i].size()));
      int ncells = 0;
      for (int c : cells) ncells = std::max(ncells, c + 1);
      std::vector<Block> local(ncells);
      for (std::size_t v = 0; v < groups[i].size(); ++v)
        local[cells[v]].vertices.push_back(groups[i][v]);
      for (auto& blk : local) {
        blk.kind = BlockKind::unconstrained;
        blk.side = side;
        sink.push_back(std::move(blk));
      }
    }
  };
  emit(as, labels_a, Side::top, a_blocks);
  emit(bs, labels_b, Side::bottom, b_blocks);

  for (auto& blk : a_blocks) out.blocks.push_back(std::move(blk));
  const int a_count = static_cast<int>(a_blocks.size());
  for (auto& blk : b_blocks) out.blocks.push_back(std::move(blk));
  for (int i = 0; i < a_count; ++i)
    for (int j = a_count; j < out.block_count(); ++j)
      out.guarantees.push_back({i, j, format_pattern({PatternFamily::matching, 2, 1})});

  if (static_cast<std::uint64_t>(out.block_count()) > sat_mul(2, f_bound(n, m)))
    throw contract_error("bipartite refinement exceeded its block bound");
  return out;
}

/// Full partition for graphs avoiding all eight star-forest variants with
/// star size 1 (matchings, their clique-augmented versions, and all four
/// complements): cochromatic split, then pairwise bipartite refinement so
/// every block pair is 2K2-free across.
inline LabelledPartition matching_partition(const Graph& g, int n) {
  if (n < 2) throw argument_error("multiplicity must be at least 2");
  for (PatternFamily f : {PatternFamily::g1, PatternFamily::g2, PatternFamily::g3,
                          PatternFamily::g4, PatternFamily::h1, PatternFamily::h2,
                          PatternFamily::h3, PatternFamily::h4}) {
    PatternSpec spec{f, n, 1};
    if (auto w = find_induced(g, spec)) throw class_violation(format_pattern(spec), *w);
  }

  const LabelledPartition base = cochromatic_matching(g, n, n);
  const int z = base.block_count();
  std::vector<std::vector<std::vector<int>>> labels(z);
  for (int i = 0; i < z; ++i)
    for (int j = i + 1; j < z; ++j) {
      const auto& vi = base.blocks[i].vertices;
      const auto& vj = base.blocks[j].vertices;
      BipartiteGraph cross = BipartiteGraph::from_graph(g, vi, vj);
      LabelledPartition subp = detail::with_id_map(
          vi, &vj, [&] { return bipartite_matching_partition(cross, n, n); });
      std::vector<int> la(vi.size(), 0), lb(vj.size(), 0);
      for (std::size_t blk = 0; blk < subp.blocks.size(); ++blk)
        for (int v : subp.blocks[blk].vertices)
          (subp.blocks[blk].side == Side::top ? la : lb)[v] = static_cast<int>(blk);
      labels[i].push_back(std::move(la));
      labels[j].push_back(std::move(lb));
    }

  LabelledPartition out;
  for (int i = 0; i < z; ++i) {
    const auto& bag = base.blocks[i].vertices;
    const auto cells = intersect_labelings(labels[i], static_cast<int>(bag.size()));
    int ncells = 0;
    for (int c : cells) ncells = std::max(ncells, c + 1);
    std::vector<Block> local(ncells);
    for (std::size_t v = 0; v < bag.size(); ++v) local[cells[v]].vertices.push_back(bag[v]);
    for (auto& blk : local) {
      blk.kind = base.blocks[i].kind;
      blk.side = Side::general;
      out.blocks.push_back(std::move(blk));
    }
  }
  for (int i = 0; i < out.block_count(); ++i)
    for (int j = i + 1; j < out.block_count(); ++j)
      out.guarantees.push_back({i, j, format_pattern({PatternFamily::matching, 2, 1})});

  if (static_cast<std::uint64_t>(out.block_count()) > t_bound(n))
    throw contract_error("matching partition exceeded its block bound");
  return out;
}

}  // namespace costar
