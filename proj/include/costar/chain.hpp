#pragma once

#include <algorithm>
#include <vector>

#include "costar/errors.hpp"
#include "costar/graph.hpp"
#include "costar/partition.hpp"
#include "costar/patterns.hpp"

namespace costar {

/// One factor of a skew-join decomposition: a set of top and bottom ids.
struct BipartitePiece {
  std::vector<int> a, b;
};

/// A chain template: bags A_1..A_z / B_1..B_z (stored 0-based) such that
/// A_i is joined to B_j for j > i+1 and co-joined to B_j for j < i. All the
/// irregular structure lives on same-index and consecutive bag pairs.
/// `start[i]` marks bags that open a fresh factor of the underlying
/// skew-join decomposition; `residual[i]` marks the trailing edge-free scoop.
/// When refined, every bag additionally splits into exactly q pieces
/// (possibly empty) listed in pieces_a / pieces_b.
struct ChainTemplate {
  std::vector<std::vector<int>> bags_a, bags_b;
  std::vector<bool> start;
  std::vector<bool> residual;

  bool refined = false;
  int n = 0, m = 0, q = 0;
  std::vector<std::vector<std::vector<int>>> pieces_a, pieces_b;

  int z() const { return static_cast<int>(bags_a.size()); }
};

namespace detail {

struct ChainRun {
  std::vector<std::vector<int>> bags_a, bags_b;
  bool residual = false;
};

/// Repeated template passes over the remaining graph. Each pass grows bags
/// from a minimum-degree bottom vertex (B_{i+1} = new non-neighbours of A_i,
/// A_{i+1} = new neighbours of B_{i+1}) and what it collects is always
/// skew-joined to what remains: collected tops are joined to every remaining
/// bottom, collected bottoms co-joined to every remaining top. A remainder
/// with no cross edges is scooped whole as a final run.
inline std::vector<ChainRun> chain_runs(const BipartiteGraph& g) {
  std::vector<ChainRun> runs;
  Bits rem_a(g.a_size()), rem_b(g.b_size());
  for (int a = 0; a < g.a_size(); ++a) rem_a.set(a);
  for (int b = 0; b < g.b_size(); ++b) rem_b.set(b);

  while (rem_a.any() || rem_b.any()) {
    bool has_edge = false;
    for (int a = rem_a.find_first(); a >= 0 && !has_edge; a = rem_a.find_next(a))
      has_edge = g.row(a).intersects(rem_b);
    if (!has_edge) {
      ChainRun run;
      run.residual = true;
      run.bags_a.push_back(rem_a.to_vector());
      run.bags_b.push_back(rem_b.to_vector());
      runs.push_back(std::move(run));
      break;
    }

    int b1 = -1, best = -1;
    for (int b = rem_b.find_first(); b >= 0; b = rem_b.find_next(b)) {
      Bits nb = g.col(b);
      nb &= rem_a;
      int d = nb.count();
      if (b1 < 0 || d < best) {
        b1 = b;
        best = d;
      }
    }

    ChainRun run;
    Bits used_a(g.a_size()), used_b(g.b_size());
    Bits cur_a = g.col(b1);
    cur_a &= rem_a;
    run.bags_b.push_back({b1});
    run.bags_a.push_back(cur_a.to_vector());
    used_b.set(b1);
    used_a |= cur_a;

    while (true) {
      Bits next_b(g.b_size());
      for (int v = rem_b.find_first(); v >= 0; v = rem_b.find_next(v)) {
        if (used_b.test(v)) continue;
        Bits missing = cur_a;
        missing.remove(g.col(v));
        if (missing.any()) next_b.set(v);
      }
      if (next_b.none()) break;
      Bits next_a(g.a_size());
      for (int v = next_b.find_first(); v >= 0; v = next_b.find_next(v)) next_a |= g.col(v);
      next_a &= rem_a;
      next_a.remove(used_a);
      run.bags_b.push_back(next_b.to_vector());
      run.bags_a.push_back(next_a.to_vector());
      used_b |= next_b;
      used_a |= next_a;
      cur_a = next_a;
    }
    rem_a.remove(used_a);
    rem_b.remove(used_b);
    runs.push_back(std::move(run));
  }
  return runs;
}

}  // namespace detail

/// Splits the graph into pieces such that each earlier piece's top side is
/// joined to each later piece's bottom side, and each earlier piece's bottom
/// side is co-joined to each later piece's top side (the skew-join
/// reconstruction identity). Pieces come out in discovery order.
inline std::vector<BipartitePiece> skew_join_decompose(const BipartiteGraph& g) {
  std::vector<BipartitePiece> pieces;
  for (const auto& run : detail::chain_runs(g)) {
    BipartitePiece p;
    for (const auto& bag : run.bags_a) p.a.insert(p.a.end(), bag.begin(), bag.end());
    for (const auto& bag : run.bags_b) p.b.insert(p.b.end(), bag.begin(), bag.end());
    std::sort(p.a.begin(), p.a.end());
    std::sort(p.b.begin(), p.b.end());
    pieces.push_back(std::move(p));
  }
  return pieces;
}

/// Concatenates the per-run bags into one global chain template. Conditions
/// (joined beyond the next bag, co-joined before the own bag) hold across run
/// boundaries because consecutive runs are skew-joined.
inline ChainTemplate build_chain_template(const BipartiteGraph& g) {
  ChainTemplate t;
  for (const auto& run : detail::chain_runs(g)) {
    for (std::size_t i = 0; i < run.bags_a.size(); ++i) {
      t.bags_a.push_back(run.bags_a[i]);
      t.bags_b.push_back(run.bags_b[i]);
      t.start.push_back(i == 0);
      t.residual.push_back(run.residual);
    }
  }
  return t;
}

/// Minimal S among the top vertices of g with N(S) = N(A) (with `co`, using
/// non-neighbourhoods instead). One ascending removal pass: a vertex is
/// dropped iff everything it covers stays covered, which leaves every kept
/// vertex with a private target, so the result is minimal by inclusion.
inline std::vector<int> cover_set(const BipartiteGraph& g, bool co = false) {
  const int A = g.a_size(), B = g.b_size();
  std::vector<int> cnt(B, 0);
  std::vector<bool> kept(A, true);
  auto row_of = [&](int a) {
    Bits r = g.row(a);
    return co ? r.flipped() : r;
  };
  for (int a = 0; a < A; ++a) {
    Bits r = row_of(a);
    for (int b = r.find_first(); b >= 0; b = r.find_next(b)) ++cnt[b];
  }
  for (int a = 0; a < A; ++a) {
    Bits r = row_of(a);
    bool removable = true;
    for (int b = r.find_first(); b >= 0 && removable; b = r.find_next(b))
      removable = cnt[b] >= 2;
    if (!removable) continue;
    kept[a] = false;
    for (int b = r.find_first(); b >= 0; b = r.find_next(b)) --cnt[b];
  }
  std::vector<int> out;
  for (int a = 0; a < A; ++a)
    if (kept[a]) out.push_back(a);
  return out;
}

namespace detail {

/// Slices `bag` into pieces by the neighbourhoods (non-neighbourhoods with
/// `co`) of the picked vertices, each piece excluding everything sliced
/// before it. `picked` lists ids adjacent-row accessors are given for.
template <class RowFn>
std::vector<std::vector<int>> slice_by(const std::vector<int>& bag, const std::vector<int>& picked,
                                       RowFn reaches) {
  std::vector<std::vector<int>> pieces;
  std::vector<bool> taken(bag.size(), false);
  for (int p : picked) {
    std::vector<int> piece;
    for (std::size_t t = 0; t < bag.size(); ++t)
      if (!taken[t] && reaches(p, bag[t])) {
        taken[t] = true;
        piece.push_back(bag[t]);
      }
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

}  // namespace detail

/// Builds a chain template and refines every bag into q = (n-1)(m-1) pieces
/// so that same-index piece pairs avoid (n-1)K2 and the bipartite co-mK2
/// while consecutive piece pairs avoid nK2 and the bipartite co-(m-1)K2
/// (start-of-run bags, whose same-index pair is a trivial join, satisfy the
/// consecutive-pair classes instead; the edge-free residual pair satisfies
/// the same-index classes). Requires the graph to avoid the bipartite nK2
/// and co-mK2; a witness otherwise surfaces as class_violation.
inline ChainTemplate refine_to_nm_template(const BipartiteGraph& g, int n, int m) {
  if (n < 2 || m < 2) throw argument_error("refinement needs n, m >= 2");
  if (auto w = find_induced_bipartite(g, {PatternFamily::matching, n, 1}))
    throw class_violation(format_pattern({PatternFamily::matching, n, 1}), w->a, w->b);
  if (auto w = find_induced_bipartite(g, {PatternFamily::co_matching, m, 1}))
    throw class_violation(format_pattern({PatternFamily::co_matching, m, 1}), w->a, w->b);

  ChainTemplate t;
  t.refined = true;
  t.n = n;
  t.m = m;
  t.q = (n - 1) * (m - 1);

  for (const auto& run : detail::chain_runs(g)) {
    const int zl = static_cast<int>(run.bags_a.size());
    // Local piece lists for this run's bags, padded to q at the end.
    std::vector<std::vector<std::vector<int>>> pa(zl), pb(zl);

    if (run.residual) {
      pa[0].push_back(run.bags_a[0]);
      pb[0].push_back(run.bags_b[0]);
    } else {
      pa[0].push_back(run.bags_a[0]);
      pb[0].push_back(run.bags_b[0]);
      for (int i = 1; i < zl; ++i) {
        const auto& ai = run.bags_a[i];
        const auto& bi = run.bags_b[i];
        const auto& aprev = run.bags_a[i - 1];

        // Pieces of A_i: neighbourhood slices of a minimal subset of B_i
        // covering A_i. Feeds the consecutive pair (A_i, B_{i+1}).
        {
          BipartiteGraph sub = g.induced(ai, bi).swapped();  // B_i on top
          std::vector<int> picked_local = cover_set(sub, false);
          if (static_cast<int>(picked_local.size()) > n - 1)
            throw contract_error("covering subset larger than n-1 on a member input");
          std::vector<int> picked;
          for (int l : picked_local) picked.push_back(bi[l]);
          pa[i] = detail::slice_by(ai, picked, [&](int b, int a) { return g.has_edge(a, b); });
        }

        // Pieces of B_i: non-neighbourhood slices of a minimal subset of
        // A_{i-1} co-covering B_i. Feeds the same-index pair (A_i, B_i).
        {
          BipartiteGraph sub = g.induced(aprev, bi);  // A_{i-1} on top
          std::vector<int> picked_local = cover_set(sub, true);
          if (static_cast<int>(picked_local.size()) > m - 1)
            throw contract_error("co-covering subset larger than m-1 on a member input");
          std::vector<int> picked;
          for (int l : picked_local) picked.push_back(aprev[l]);
          pb[i] = detail::slice_by(bi, picked, [&](int a, int b) { return !g.has_edge(a, b); });
        }
      }

      // Extra split of the second bottom bag against A_1: neighbourhood
      // slices from within A_2 (every B_2 vertex has a neighbour there by
      // the minimum-degree choice of b_1), intersected with the slices
      // above. Feeds the consecutive pair (A_1, B_2).
      if (zl >= 2) {
        const auto& a2 = run.bags_a[1];
        const auto& b2 = run.bags_b[1];
        BipartiteGraph sub = g.induced(a2, b2);  // A_2 on top
        std::vector<int> picked_local = cover_set(sub, false);
        if (static_cast<int>(picked_local.size()) > n - 1)
          throw contract_error("covering subset larger than n-1 on a member input");
        std::vector<int> picked;
        for (int l : picked_local) picked.push_back(a2[l]);
        auto y = detail::slice_by(b2, picked, [&](int a, int b) { return g.has_edge(a, b); });
        for (int v : b2) {
          bool covered = false;
          for (const auto& piece : y) covered |= std::binary_search(piece.begin(), piece.end(), v);
          if (!covered) throw contract_error("second bottom bag not covered on a member input");
        }
        std::vector<std::vector<int>> refined;
        for (const auto& yp : y)
          for (const auto& bp : pb[1]) {
            std::vector<int> cell;
            std::set_intersection(yp.begin(), yp.end(), bp.begin(), bp.end(),
                                  std::back_inserter(cell));
            refined.push_back(std::move(cell));
          }
        pb[1] = std::move(refined);
      }
    }

    for (int i = 0; i < zl; ++i) {
      if (static_cast<int>(pa[i].size()) > t.q || static_cast<int>(pb[i].size()) > t.q)
        throw contract_error("bag split into more than q pieces on a member input");
      pa[i].resize(t.q);
      pb[i].resize(t.q);
      t.bags_a.push_back(run.bags_a[i]);
      t.bags_b.push_back(run.bags_b[i]);
      t.start.push_back(i == 0);
      t.residual.push_back(run.residual);
      t.pieces_a.push_back(pa[i]);
      t.pieces_b.push_back(pb[i]);
    }
  }
  return t;
}

/// Patterns every piece pair of bag pair (top bag i, bottom bag j) of a
/// refined template is free of. Empty for |i-j| > 1, where the pair is
/// complete (j > i+1) or empty (j < i) instead.
inline std::vector<PatternSpec> chain_pair_free(const ChainTemplate& t, int i, int j) {
  if (!t.refined) throw argument_error("template is not refined");
  const PatternSpec same_m = {PatternFamily::matching, t.n - 1, 1};
  const PatternSpec same_c = {PatternFamily::co_matching, t.m, 1};
  const PatternSpec next_m = {PatternFamily::matching, t.n, 1};
  const PatternSpec next_c = {PatternFamily::co_matching, t.m - 1, 1};
  if (j == i) {
    if (t.residual[i] || !t.start[i]) return {same_m, same_c};
    return {next_m, next_c};  // trivial join at a run start
  }
  if (j == i + 1) return {next_m, next_c};
  return {};
}

/// Collapses a refined template to 2q blocks per side: bags of equal index
/// parity contribute their piece number g to one union block. Equal-parity
/// block pairs inherit the same-index classes, mixed-parity pairs the
/// consecutive classes. Empty blocks are kept so indices stay predictable.
inline LabelledPartition collapse_template(const ChainTemplate& t) {
  if (!t.refined) throw argument_error("template is not refined");
  LabelledPartition p;
  auto unions = [&](const std::vector<std::vector<std::vector<int>>>& pieces, Side side) {
    for (int parity = 0; parity < 2; ++parity)
      for (int gpiece = 0; gpiece < t.q; ++gpiece) {
        Block blk;
        blk.kind = BlockKind::unconstrained;
        blk.side = side;
        for (int i = parity; i < t.z(); i += 2)
          blk.vertices.insert(blk.vertices.end(), pieces[i][gpiece].begin(),
                              pieces[i][gpiece].end());
        std::sort(blk.vertices.begin(), blk.vertices.end());
        p.blocks.push_back(std::move(blk));
      }
  };
  unions(t.pieces_a, Side::top);
  unions(t.pieces_b, Side::bottom);

  const int per_side = 2 * t.q;
  for (int ia = 0; ia < per_side; ++ia)
    for (int jb = 0; jb < per_side; ++jb) {
      const bool same_parity = (ia / t.q) == (jb / t.q);
      const int j = per_side + jb;
      if (same_parity) {
        p.guarantees.push_back({ia, j, format_pattern({PatternFamily::matching, t.n - 1, 1})});
        p.guarantees.push_back({ia, j, format_pattern({PatternFamily::co_matching, t.m, 1})});
      } else {
        p.guarantees.push_back({ia, j, format_pattern({PatternFamily::matching, t.n, 1})});
        p.guarantees.push_back({ia, j, format_pattern({PatternFamily::co_matching, t.m - 1, 1})});
      }
    }
  return p;
}

}  // namespace costar
