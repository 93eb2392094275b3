#pragma once

// Star-pattern partitioning: the either/or recursion on d-templates, the
// one-sided refinement that trades a star drop for a near-twin bound, the
// two-pass bipartite partition whose every pair of blocks drops both star
// orientations, the clique/independent front-end, and the main partition
// for plain graphs.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "dtemplate.hpp"
#include "matching.hpp"

namespace costar {

namespace detail {

/// Star sizes beyond this are refused with size_error before any work starts.
constexpr std::uint64_t star_size_cap = 100000000;

/// Symbolic copy of the per-level slack: d = (n - 1 + k) * r with r = k * n.
inline std::uint64_t either_slack_raw(int n, std::uint64_t k) {
  const std::uint64_t nn = static_cast<std::uint64_t>(n);
  const std::uint64_t r = sat_mul(k, nn);
  return sat_mul(sat_add(nn - 1, k), r);
}

/// Symbolic copy of refine_pi for a level with max multiplicity n and star
/// size k, without constructing StarParams (whose range checks would refuse
/// the large intermediate levels the recursion below walks through).
inline std::uint64_t either_pi_raw(int n, std::uint64_t k) {
  const std::uint64_t nn = static_cast<std::uint64_t>(n);
  const std::uint64_t r = sat_mul(k, nn);
  const std::uint64_t pi1 =
      sat_add(sat_binom(sat_mul(nn, k), k), sat_mul(nn, sat_pow(k, 5)));
  const std::uint64_t pi2 = sat_binom(sat_mul(nn - 1, r), r);
  const std::uint64_t pi3 = sat_mul(sat_mul(nn - 1, r), sat_add(k, 1));
  return std::max(pi1, std::max(pi2, pi3));
}

/// Blocks per side one induction step may produce: 4*pi^2 + 3nkd^2.
inline std::uint64_t either_step_bound_raw(int n, std::uint64_t k) {
  const std::uint64_t nn = static_cast<std::uint64_t>(n);
  const std::uint64_t pi = either_pi_raw(n, k);
  const std::uint64_t d = either_slack_raw(n, k);
  const std::uint64_t marked =
      sat_mul(sat_mul(3, sat_mul(nn, k)), sat_mul(d, d));
  return sat_add(sat_mul(4, sat_mul(pi, pi)), marked);
}

/// Star size the either/or recursion bottoms out at, starting from the four
/// multiplicities (n_up, n_lambda, m_up, m_lambda) and star size k.  Each
/// level passes k + 2d to three children, one per collapse tag; n_lambda is
/// never decremented, so only three coordinates shrink.  Values past
/// star_size_cap are reported as-is (still past the cap) without recursing
/// further.
inline std::uint64_t either_star_size_raw(int nu, int nl, int mu, int ml,
                                          std::uint64_t k) {
  if (std::min(std::min(nu, nl), std::min(mu, ml)) <= 2) return k;
  if (k > star_size_cap) return k;
  const int n = std::max(std::max(nu, nl), std::max(mu, ml));
  const std::uint64_t k2 = sat_add(k, sat_mul(2, either_slack_raw(n, k)));
  std::uint64_t best = either_star_size_raw(nu - 1, nl, mu, ml, k2);
  best = std::max(best, either_star_size_raw(nu, nl, mu - 1, ml, k2));
  return std::max(best, either_star_size_raw(nu, nl, mu, ml - 1, k2));
}

/// Blocks per side the either/or recursion may produce.  One level keeps at
/// most c = 4*pi^2 + 3nkd^2 blocks of its own and refines each by the child
/// partitions of its pairs, so the count is at most c * (worst child)^c.
inline std::uint64_t either_block_bound_raw(int nu, int nl, int mu, int ml,
                                            std::uint64_t k) {
  if (std::min(std::min(nu, nl), std::min(mu, ml)) <= 2) return 1;
  if (k > star_size_cap) return sat_max;
  const int n = std::max(std::max(nu, nl), std::max(mu, ml));
  const std::uint64_t c = either_step_bound_raw(n, k);
  const std::uint64_t k2 = sat_add(k, sat_mul(2, either_slack_raw(n, k)));
  std::uint64_t worst = either_block_bound_raw(nu - 1, nl, mu, ml, k2);
  worst = std::max(worst, either_block_bound_raw(nu, nl, mu - 1, ml, k2));
  worst = std::max(worst, either_block_bound_raw(nu, nl, mu, ml - 1, k2));
  return sat_mul(c, sat_pow(worst, c));
}

}  // namespace detail

/// Star size s such that partition_either tags every cross pair with a
/// pattern of size s.
inline std::uint64_t either_star_size(const StarParams& p) {
  return detail::either_star_size_raw(p.n_up, p.n_lambda, p.m_up, p.m_lambda,
                                      static_cast<std::uint64_t>(p.k));
}

/// Ceiling on the blocks per side partition_either may produce.
inline std::uint64_t either_block_bound(const StarParams& p) {
  return detail::either_block_bound_raw(p.n_up, p.n_lambda, p.m_up, p.m_lambda,
                                        static_cast<std::uint64_t>(p.k));
}

/// Ceiling on the top-side blocks of one orand_refine call: the marked
/// vertices split into at most 3nk(nks^2)^2 classes and the unmarked rest
/// stays whole.
inline std::uint64_t orand_block_bound(int n, int k, std::uint64_t s) {
  const std::uint64_t nn = static_cast<std::uint64_t>(n);
  const std::uint64_t kk = static_cast<std::uint64_t>(k);
  const std::uint64_t delta = sat_mul(sat_mul(nn, kk), sat_mul(s, s));
  return sat_add(sat_mul(sat_mul(3, sat_mul(nn, kk)), sat_mul(delta, delta)),
                 1);
}

/// Ceiling on the blocks per side of bipartite_star_partition: the either/or
/// partition refined by one orand pass at star size s and one at 2k - 1.
inline std::uint64_t bipartite_star_bound(const StarParams& p) {
  const std::uint64_t u1 = either_block_bound(p);
  const std::uint64_t s = either_star_size(p);
  const std::uint64_t phi1 = orand_block_bound(p.n(), p.k, s);
  const std::uint64_t u2 = sat_mul(u1, sat_pow(phi1, u1));
  const std::uint64_t phi2 =
      orand_block_bound(p.n(), p.k, 2 * static_cast<std::uint64_t>(p.k) - 1);
  return sat_mul(u2, sat_pow(phi2, u2));
}

/// Ceiling on the blocks of main_partition: z clique/independent blocks each
/// refined by the pairwise bipartite partitions.
inline std::uint64_t main_block_bound(std::uint64_t z, const StarParams& p) {
  return sat_mul(z, sat_pow(bipartite_star_bound(p), z));
}

/// One induction level: build the d-template, refine every same-index and
/// consecutive bag pair, collapse to 4q classes per side, and append the
/// marked vertices as extra blocks grouped by their trace intervals.
///
/// Block layout: per side the 4q collapse classes come first (indices
/// cls * q + g as in collapse_d_template) followed by the marked classes.
/// Every (collapse A, collapse B) pair keeps its collapse tag; every pair
/// touching a marked A class is 2Lambda_{2d}-free and every pair touching a
/// marked B class is 2Pi_{2d}-free, because a marked vertex pins all but 2d
/// of the opposite side against any would-be second star centre.
struct InductionStep {
  LabelledPartition partition;
  int coarse_per_side = 0;  ///< 4q collapse classes lead each side.
  int marked_a = 0;         ///< trailing marked classes on the top side
  int marked_b = 0;         ///< trailing marked classes on the bottom side
  int d = 0;                ///< slack of the underlying template
};

inline InductionStep star_induction_step(const BipartiteGraph& b,
                                         const StarParams& p,
                                         bool greedy = false) {
  if (std::min(std::min(p.n_up, p.n_lambda), std::min(p.m_up, p.m_lambda)) < 3)
    throw argument_error(
        "star_induction_step: all four multiplicities must be >= 3");
  DTemplate t = d_template_procedure(b, p, greedy);
  t = refine_consecutive(b, t, greedy);
  LabelledPartition coarse = collapse_d_template(t);
  const std::uint64_t cap = marked_class_bound(p);
  std::vector<std::vector<int>> cls_a = partition_marked(marked_traces_a(b, t), cap);
  std::vector<std::vector<int>> cls_b = partition_marked(marked_traces_b(b, t), cap);
  for (auto& c : cls_a) std::sort(c.begin(), c.end());
  for (auto& c : cls_b) std::sort(c.begin(), c.end());

  InductionStep out;
  out.coarse_per_side = 4 * std::max(t.q, 1);
  out.marked_a = static_cast<int>(cls_a.size());
  out.marked_b = static_cast<int>(cls_b.size());
  out.d = t.d;
  const int q4 = out.coarse_per_side;
  const int a_total = q4 + out.marked_a;
  const int b_total = q4 + out.marked_b;
  const int b_off = a_total;
  LabelledPartition& lp = out.partition;
  lp.blocks.reserve(a_total + b_total);
  for (int i = 0; i < q4; ++i) lp.blocks.push_back(coarse.blocks[i]);
  for (auto& c : cls_a)
    lp.blocks.push_back({BlockKind::unconstrained, Side::top, std::move(c)});
  for (int j = 0; j < q4; ++j) lp.blocks.push_back(coarse.blocks[q4 + j]);
  for (auto& c : cls_b)
    lp.blocks.push_back({BlockKind::unconstrained, Side::bottom, std::move(c)});

  for (const Guarantee& g : coarse.guarantees)
    lp.guarantees.push_back({g.i, g.j - q4 + b_off, g.pattern});
  const std::string lam =
      format_pattern({PatternFamily::lambda, 2, 2 * t.d});
  const std::string up = format_pattern({PatternFamily::up, 2, 2 * t.d});
  for (int x = 0; x < out.marked_a; ++x)
    for (int j = 0; j < b_total; ++j)
      lp.guarantees.push_back({q4 + x, b_off + j, lam});
  for (int y = 0; y < out.marked_b; ++y)
    for (int i = 0; i < a_total; ++i)
      lp.guarantees.push_back({i, b_off + q4 + y, up});

  const std::uint64_t bound = induction_block_bound(p);
  if (static_cast<std::uint64_t>(a_total) > bound ||
      static_cast<std::uint64_t>(b_total) > bound)
    throw contract_error(
        "star_induction_step: block count exceeds the guaranteed bound");
  return out;
}

/// Result of the either/or recursion: a partition whose every cross pair
/// carries exactly one guarantee, a 2Lambda_s or a 2Pi_s, at the common
/// star size s.
struct EitherResult {
  LabelledPartition partition;
  int s = 1;
};

inline EitherResult partition_either(const BipartiteGraph& b,
                                     const StarParams& p0, bool greedy = false);

namespace detail {

/// Groups the vertices of one side into cells by a combined labelling,
/// keeping cells inside their base block and leaving one empty cell for an
/// empty base block so block indices stay aligned with the base layout.
inline std::vector<std::vector<std::vector<int>>> cells_by_base(
    const std::vector<int>& labels, const std::vector<int>& base,
    int base_count) {
  std::vector<std::vector<std::vector<int>>> cells(base_count);
  std::map<int, std::pair<int, int>> seen;  // label -> (base, cell index)
  for (int v = 0; v < static_cast<int>(labels.size()); ++v) {
    auto it = seen.find(labels[v]);
    if (it == seen.end()) {
      seen.emplace(labels[v],
                   std::make_pair(base[v],
                                  static_cast<int>(cells[base[v]].size())));
      cells[base[v]].push_back({v});
    } else {
      cells[it->second.first][it->second.second].push_back(v);
    }
  }
  for (auto& per_block : cells)
    if (per_block.empty()) per_block.push_back({});
  return cells;
}

}  // namespace detail

/// Either/or recursion.  Base: once any multiplicity is down to 2 the whole
/// graph is one block per side and the exhausted pattern itself is the tag
/// (verified against the input).  Step: run one induction level, then
/// recurse on every (collapse A, collapse B) pair with the multiplicity its
/// collapse tag names decremented and the star size grown to k + 2d; pairs
/// touching a marked class keep their 2Lambda_{2d} / 2Pi_{2d} tag, which
/// already is a size-s tag of the required shape.  The per-pair child
/// partitions are intersected inside each block, and each final pair
/// inherits the tag of the unique child pair containing it, lifted to the
/// common star size s.
inline EitherResult partition_either(const BipartiteGraph& b,
                                     const StarParams& p0, bool greedy) {
  const StarParams p(p0.n_up, p0.n_lambda, p0.m_up, p0.m_lambda, p0.k, 0);
  const std::uint64_t s_raw = either_star_size(p);
  if (s_raw > detail::star_size_cap)
    throw size_error(
        "partition_either: star size bound exceeds the supported range");
  const int s = static_cast<int>(s_raw);
  EitherResult out;
  out.s = s;

  const int minm =
      std::min(std::min(p.n_up, p.n_lambda), std::min(p.m_up, p.m_lambda));
  if (minm <= 2) {
    PatternSpec tag{PatternFamily::up, 2, s};
    if (p.n_up <= 2)
      tag = {PatternFamily::up, 2, s};
    else if (p.n_lambda <= 2)
      tag = {PatternFamily::lambda, 2, s};
    else if (p.m_up <= 2)
      tag = {PatternFamily::up, 2, s};
    else
      tag = {PatternFamily::lambda, 2, s};
    if (auto w = find_induced_bipartite(b, tag))
      throw class_violation(format_pattern(tag), w->a, w->b);
    std::vector<int> all_a(b.a_size()), all_b(b.b_size());
    std::iota(all_a.begin(), all_a.end(), 0);
    std::iota(all_b.begin(), all_b.end(), 0);
    out.partition.blocks.push_back(
        {BlockKind::unconstrained, Side::top, std::move(all_a)});
    out.partition.blocks.push_back(
        {BlockKind::unconstrained, Side::bottom, std::move(all_b)});
    out.partition.guarantees.push_back({0, 1, format_pattern(tag)});
    return out;
  }

  const InductionStep step = star_induction_step(b, p, greedy);
  const LabelledPartition& sp = step.partition;
  const int a_blocks = step.coarse_per_side + step.marked_a;
  const int b_blocks = step.coarse_per_side + step.marked_b;
  const int b_off = a_blocks;

  std::map<std::pair<int, int>, PatternSpec> coarse_tag;
  for (const Guarantee& g : sp.guarantees)
    coarse_tag.emplace(std::make_pair(g.i, g.j - b_off),
                       parse_pattern(g.pattern));

  std::vector<int> base_a(b.a_size(), 0), base_b(b.b_size(), 0);
  for (int i = 0; i < a_blocks; ++i)
    for (int v : sp.blocks[i].vertices) base_a[v] = i;
  for (int j = 0; j < b_blocks; ++j)
    for (int v : sp.blocks[b_off + j].vertices) base_b[v] = j;

  struct PairPlan {
    bool recursed = false;
    PatternFamily fam = PatternFamily::up;  // terminal family when !recursed
    std::vector<int> a_child, b_child;      // local index -> child block id
    std::map<std::pair<int, int>, PatternFamily> child_tag;
  };
  std::map<std::pair<int, int>, PairPlan> plans;
  std::vector<std::vector<int>> labs_a{base_a}, labs_b{base_b};

  for (int i = 0; i < a_blocks; ++i) {
    for (int j = 0; j < b_blocks; ++j) {
      PairPlan plan;
      const std::vector<int>& ai = sp.blocks[i].vertices;
      const std::vector<int>& bj = sp.blocks[b_off + j].vertices;
      if (i >= step.coarse_per_side) {
        plan.fam = PatternFamily::lambda;  // marked A class
      } else if (j >= step.coarse_per_side) {
        plan.fam = PatternFamily::up;  // marked B class
      } else if (ai.empty() || bj.empty()) {
        plan.fam = PatternFamily::up;  // vacuous
      } else {
        const PatternSpec tag = coarse_tag.at({i, j});
        if (tag.k > 10000)
          throw size_error(
              "partition_either: recursion star size exceeds the supported "
              "range");
        StarParams cp = p;
        switch (tag.family) {
          case PatternFamily::up:
            cp = StarParams(p.n_up - 1, p.n_lambda, p.m_up, p.m_lambda, tag.k);
            break;
          case PatternFamily::co_up:
            cp = StarParams(p.n_up, p.n_lambda, p.m_up - 1, p.m_lambda, tag.k);
            break;
          case PatternFamily::co_lambda:
            cp = StarParams(p.n_up, p.n_lambda, p.m_up, p.m_lambda - 1, tag.k);
            break;
          default:
            throw contract_error(
                "partition_either: unexpected collapse tag family");
        }
        const BipartiteGraph sub = b.induced(ai, bj);
        const EitherResult child = detail::with_id_map(
            ai, &bj, [&] { return partition_either(sub, cp, greedy); });
        const LabelledPartition& chp = child.partition;
        plan.recursed = true;
        plan.a_child.assign(ai.size(), 0);
        plan.b_child.assign(bj.size(), 0);
        for (int u = 0; u < static_cast<int>(chp.blocks.size()); ++u) {
          if (chp.blocks[u].side == Side::top)
            for (int x : chp.blocks[u].vertices) plan.a_child[x] = u;
          else
            for (int y : chp.blocks[u].vertices) plan.b_child[y] = u;
        }
        for (const Guarantee& g : chp.guarantees)
          plan.child_tag.emplace(std::make_pair(g.i, g.j),
                                 parse_pattern(g.pattern).family);
        std::vector<int> la(b.a_size(), 0), lb(b.b_size(), 0);
        for (int x = 0; x < static_cast<int>(ai.size()); ++x)
          la[ai[x]] = plan.a_child[x];
        for (int y = 0; y < static_cast<int>(bj.size()); ++y)
          lb[bj[y]] = plan.b_child[y];
        labs_a.push_back(std::move(la));
        labs_b.push_back(std::move(lb));
      }
      plans.emplace(std::make_pair(i, j), std::move(plan));
    }
  }

  const std::vector<int> la = intersect_labelings(labs_a, b.a_size());
  const std::vector<int> lb = intersect_labelings(labs_b, b.b_size());
  const auto cells_a = detail::cells_by_base(la, base_a, a_blocks);
  const auto cells_b = detail::cells_by_base(lb, base_b, b_blocks);

  LabelledPartition fin;
  std::vector<std::pair<int, int>> origin_a, origin_b;  // (base block, rep)
  for (int i = 0; i < a_blocks; ++i)
    for (const auto& cell : cells_a[i]) {
      origin_a.emplace_back(i, cell.empty() ? -1 : cell.front());
      fin.blocks.push_back({BlockKind::unconstrained, Side::top, cell});
    }
  const int fin_a = static_cast<int>(fin.blocks.size());
  for (int j = 0; j < b_blocks; ++j)
    for (const auto& cell : cells_b[j]) {
      origin_b.emplace_back(j, cell.empty() ? -1 : cell.front());
      fin.blocks.push_back({BlockKind::unconstrained, Side::bottom, cell});
    }
  const int fin_b = static_cast<int>(fin.blocks.size()) - fin_a;

  for (int x = 0; x < fin_a; ++x) {
    for (int y = 0; y < fin_b; ++y) {
      const auto [i, va] = origin_a[x];
      const auto [j, vb] = origin_b[y];
      const PairPlan& plan = plans.at({i, j});
      PatternFamily fam = plan.fam;
      if (plan.recursed) {
        if (va < 0 || vb < 0) {
          fam = PatternFamily::up;  // vacuous: one cell is empty
        } else {
          const std::vector<int>& ai = sp.blocks[i].vertices;
          const std::vector<int>& bj = sp.blocks[b_off + j].vertices;
          const int lx = static_cast<int>(
              std::lower_bound(ai.begin(), ai.end(), va) - ai.begin());
          const int ly = static_cast<int>(
              std::lower_bound(bj.begin(), bj.end(), vb) - bj.begin());
          fam = plan.child_tag.at({plan.a_child[lx], plan.b_child[ly]});
        }
      }
      fin.guarantees.push_back(
          {x, fin_a + y, format_pattern({fam, 2, s})});
    }
  }

  const std::uint64_t cap = either_block_bound(p);
  if (static_cast<std::uint64_t>(fin_a) > cap ||
      static_cast<std::uint64_t>(fin_b) > cap)
    throw contract_error(
        "partition_either: block count exceeds the guaranteed bound");
  out.partition = std::move(fin);
  return out;
}

/// One-sided refinement of a pair that already drops 2Pi_s.  The bottom side
/// is peeled one vertex at a time by minimum remaining degree; each peeled
/// vertex claims the neighbours whose remaining co-degree fell below k.  A
/// top vertex with k or more neighbours among earlier peeled vertices is
/// marked: any two unmarked vertices of one bag differ in fewer than s
/// neighbours one way and fewer than 2k - 1 the other, and the marked
/// vertices split by trace intervals into classes with the same property.
/// Output: top blocks (marked classes, then the unmarked rest), one bottom
/// block, and for every pair the guarantees 2Pi_s and 2Lambda_{2k-1}.
inline LabelledPartition orand_refine(const BipartiteGraph& b, int s, int n,
                                      int k) {
  if (s < 1 || n < 1 || k < 1)
    throw argument_error("orand_refine: parameters must be positive");
  Bits rem_a = detail::full_bits(b.a_size());
  std::vector<int> border;
  std::vector<int> owner(b.a_size(), 0);
  {
    Bits rem_b = detail::full_bits(b.b_size());
    while (rem_b.count() > 0) {
      const int v = detail::min_degree_vertex(b, rem_a, rem_b);
      rem_b.reset(v);
      const int idx = static_cast<int>(border.size());
      border.push_back(v);
      Bits cand = b.col(v);
      cand &= rem_a;
      const int left = rem_b.count();
      for (int w = cand.find_first(); w >= 0; w = cand.find_next(w)) {
        if (left - detail::count_in(b.row(w), rem_b) < k) {
          owner[w] = idx;
          rem_a.reset(w);
        }
      }
    }
  }
  const int leftover = static_cast<int>(border.size());
  for (int w = rem_a.find_first(); w >= 0; w = rem_a.find_next(w))
    owner[w] = leftover;

  std::vector<Trace> traces;
  std::vector<int> unmarked;
  for (int w = 0; w < b.a_size(); ++w) {
    int cnt = 0, lo = -1;
    for (int j = 0; j < owner[w]; ++j) {
      if (b.has_edge(w, border[j]) && ++cnt >= k) {
        lo = j + 1;
        break;
      }
    }
    if (lo >= 0)
      traces.push_back({w, lo, owner[w]});
    else
      unmarked.push_back(w);
  }

  const std::uint64_t delta =
      sat_mul(sat_mul(static_cast<std::uint64_t>(n),
                      static_cast<std::uint64_t>(k)),
              sat_mul(static_cast<std::uint64_t>(s),
                      static_cast<std::uint64_t>(s)));
  const std::uint64_t cap =
      sat_mul(sat_mul(3, sat_mul(static_cast<std::uint64_t>(n),
                                 static_cast<std::uint64_t>(k))),
              sat_mul(delta, delta));
  std::vector<std::vector<int>> classes = partition_marked(std::move(traces), cap);

  LabelledPartition out;
  for (auto& cls : classes) {
    std::sort(cls.begin(), cls.end());
    out.blocks.push_back({BlockKind::unconstrained, Side::top, std::move(cls)});
  }
  out.blocks.push_back(
      {BlockKind::unconstrained, Side::top, std::move(unmarked)});
  const int a_blocks = static_cast<int>(out.blocks.size());
  std::vector<int> all_b(b.b_size());
  std::iota(all_b.begin(), all_b.end(), 0);
  out.blocks.push_back(
      {BlockKind::unconstrained, Side::bottom, std::move(all_b)});
  const std::string up = format_pattern({PatternFamily::up, 2, s});
  const std::string lam =
      format_pattern({PatternFamily::lambda, 2, 2 * k - 1});
  for (int i = 0; i < a_blocks; ++i) {
    out.guarantees.push_back({i, a_blocks, up});
    out.guarantees.push_back({i, a_blocks, lam});
  }
  return out;
}

/// Partition of a bipartite graph that avoids n_up stacked stars, n_lambda
/// hanging stars, and the complements of m_up and m_lambda of them, into
/// blocks such that EVERY pair of opposite blocks drops both two-star
/// orientations at size 2k - 1.  The either/or partition leaves one tagged
/// orientation per pair; a first orand pass converts it into the other
/// orientation at size 2k - 1, and a second pass at size 2k - 1 restores the
/// first, so both hold in the end.
inline LabelledPartition bipartite_star_partition(const BipartiteGraph& b,
                                                  const StarParams& p0,
                                                  bool greedy = false) {
  const StarParams p(p0.n_up, p0.n_lambda, p0.m_up, p0.m_lambda, p0.k, 0);
  const PatternSpec forbidden[] = {
      {PatternFamily::up, p.n_up, p.k},
      {PatternFamily::lambda, p.n_lambda, p.k},
      {PatternFamily::co_up, p.m_up, p.k},
      {PatternFamily::co_lambda, p.m_lambda, p.k},
  };
  for (const PatternSpec& spec : forbidden)
    if (auto w = find_induced_bipartite(b, spec))
      throw class_violation(format_pattern(spec), w->a, w->b);

  const EitherResult either = partition_either(b, p, greedy);
  const LabelledPartition& ep = either.partition;
  const int n = p.n();
  const int k = p.k;
  const int s2 = 2 * k - 1;

  std::vector<int> top_ids, bot_ids;
  for (int u = 0; u < static_cast<int>(ep.blocks.size()); ++u)
    (ep.blocks[u].side == Side::top ? top_ids : bot_ids).push_back(u);
  const int tcount = static_cast<int>(top_ids.size());
  const int bcount = static_cast<int>(bot_ids.size());
  std::vector<int> pos_of(ep.blocks.size(), 0);
  for (int ti = 0; ti < tcount; ++ti) pos_of[top_ids[ti]] = ti;
  for (int bj = 0; bj < bcount; ++bj) pos_of[bot_ids[bj]] = bj;
  std::vector<int> base_a(b.a_size(), 0), base_b(b.b_size(), 0);
  for (int ti = 0; ti < tcount; ++ti)
    for (int v : ep.blocks[top_ids[ti]].vertices) base_a[v] = ti;
  for (int bj = 0; bj < bcount; ++bj)
    for (int v : ep.blocks[bot_ids[bj]].vertices) base_b[v] = bj;

  std::map<std::pair<int, int>, PatternFamily> fam;
  for (const Guarantee& g : ep.guarantees)
    fam.emplace(std::make_pair(pos_of[g.i], pos_of[g.j]),
                parse_pattern(g.pattern).family);

  // Pass 1 at star size s: a pair tagged 2Pi_s is refined directly (its top
  // cells become 2Lambda_{2k-1}-free against the bottom block); a pair
  // tagged 2Lambda_s is refined through the swapped graph (its bottom cells
  // become 2Pi_{2k-1}-free against the top block).
  std::vector<std::vector<int>> labs_a{base_a}, labs_b{base_b};
  std::map<std::pair<int, int>, int> flipped;  // 1 when pass 1 ran swapped
  for (int ti = 0; ti < tcount; ++ti) {
    for (int bj = 0; bj < bcount; ++bj) {
      const std::vector<int>& ai = ep.blocks[top_ids[ti]].vertices;
      const std::vector<int>& bjv = ep.blocks[bot_ids[bj]].vertices;
      if (ai.empty() || bjv.empty()) continue;
      if (fam.at({ti, bj}) == PatternFamily::up) {
        const LabelledPartition lp =
            orand_refine(b.induced(ai, bjv), either.s, n, k);
        std::vector<int> la(b.a_size(), 0);
        for (int u = 0; u < static_cast<int>(lp.blocks.size()); ++u)
          if (lp.blocks[u].side == Side::top)
            for (int x : lp.blocks[u].vertices) la[ai[x]] = u;
        labs_a.push_back(std::move(la));
        flipped[{ti, bj}] = 0;
      } else {
        const LabelledPartition lp =
            orand_refine(b.induced(ai, bjv).swapped(), either.s, n, k);
        std::vector<int> lbv(b.b_size(), 0);
        for (int u = 0; u < static_cast<int>(lp.blocks.size()); ++u)
          if (lp.blocks[u].side == Side::top)
            for (int y : lp.blocks[u].vertices) lbv[bjv[y]] = u;
        labs_b.push_back(std::move(lbv));
        flipped[{ti, bj}] = 1;
      }
    }
  }
  const std::vector<int> la1 = intersect_labelings(labs_a, b.a_size());
  const std::vector<int> lb1 = intersect_labelings(labs_b, b.b_size());

  struct Cell {
    std::vector<int> verts;
    int base = 0;
  };
  const auto collect = [](const std::vector<int>& labels,
                          const std::vector<int>& base) {
    std::vector<Cell> cells;
    std::map<int, int> seen;
    for (int v = 0; v < static_cast<int>(labels.size()); ++v) {
      auto it = seen.find(labels[v]);
      if (it == seen.end()) {
        seen.emplace(labels[v], static_cast<int>(cells.size()));
        cells.push_back({{v}, base[v]});
      } else {
        cells[it->second].verts.push_back(v);
      }
    }
    return cells;
  };
  const std::vector<Cell> ca1 = collect(la1, base_a);
  const std::vector<Cell> cb1 = collect(lb1, base_b);

  // Pass 2 at star size 2k - 1, orientation flipped relative to pass 1.
  std::vector<std::vector<int>> labs_a2{la1}, labs_b2{lb1};
  for (const Cell& x : ca1) {
    for (const Cell& y : cb1) {
      if (flipped.at({x.base, y.base}) == 0) {
        const LabelledPartition lp =
            orand_refine(b.induced(x.verts, y.verts).swapped(), s2, n, k);
        std::vector<int> lbv(b.b_size(), 0);
        for (int u = 0; u < static_cast<int>(lp.blocks.size()); ++u)
          if (lp.blocks[u].side == Side::top)
            for (int yy : lp.blocks[u].vertices) lbv[y.verts[yy]] = u;
        labs_b2.push_back(std::move(lbv));
      } else {
        const LabelledPartition lp =
            orand_refine(b.induced(x.verts, y.verts), s2, n, k);
        std::vector<int> lav(b.a_size(), 0);
        for (int u = 0; u < static_cast<int>(lp.blocks.size()); ++u)
          if (lp.blocks[u].side == Side::top)
            for (int xx : lp.blocks[u].vertices) lav[x.verts[xx]] = u;
        labs_a2.push_back(std::move(lav));
      }
    }
  }
  const std::vector<int> la2 = intersect_labelings(labs_a2, b.a_size());
  const std::vector<int> lb2 = intersect_labelings(labs_b2, b.b_size());
  const auto cells_a = detail::cells_by_base(la2, base_a, tcount);
  const auto cells_b = detail::cells_by_base(lb2, base_b, bcount);

  LabelledPartition fin;
  for (int ti = 0; ti < tcount; ++ti)
    for (const auto& cell : cells_a[ti])
      fin.blocks.push_back({BlockKind::unconstrained, Side::top, cell});
  const int fin_a = static_cast<int>(fin.blocks.size());
  for (int bj = 0; bj < bcount; ++bj)
    for (const auto& cell : cells_b[bj])
      fin.blocks.push_back({BlockKind::unconstrained, Side::bottom, cell});
  const int fin_b = static_cast<int>(fin.blocks.size()) - fin_a;

  const std::string lam = format_pattern({PatternFamily::lambda, 2, s2});
  const std::string up = format_pattern({PatternFamily::up, 2, s2});
  for (int x = 0; x < fin_a; ++x) {
    for (int y = 0; y < fin_b; ++y) {
      fin.guarantees.push_back({x, fin_a + y, lam});
      fin.guarantees.push_back({x, fin_a + y, up});
    }
  }

  const std::uint64_t cap = bipartite_star_bound(p);
  if (static_cast<std::uint64_t>(fin_a) > cap ||
      static_cast<std::uint64_t>(fin_b) > cap)
    throw contract_error(
        "bipartite_star_partition: block count exceeds the guaranteed bound");
  return fin;
}

namespace detail {

/// Greedy cover by cliques and independent sets: repeatedly peel whichever
/// of a greedily grown independent set or clique is larger (ties favour the
/// independent set).  Returns blocks plus kinds (1 clique, 2 independent).
inline std::pair<std::vector<std::vector<int>>, std::vector<int>>
greedy_cochromatic(const Graph& g) {
  std::vector<std::vector<int>> blocks;
  std::vector<int> kinds;
  Bits rem = full_bits(g.n());
  while (rem.count() > 0) {
    std::vector<int> ind;
    Bits cand = rem;
    while (cand.count() > 0) {
      int pick = -1, deg = g.n() + 1;
      for (int v = cand.find_first(); v >= 0; v = cand.find_next(v)) {
        const int dv = count_in(g.neighbours(v), cand);
        if (dv < deg) {
          deg = dv;
          pick = v;
        }
      }
      ind.push_back(pick);
      cand.reset(pick);
      cand.remove(g.neighbours(pick));
    }
    std::vector<int> clique;
    cand = rem;
    while (cand.count() > 0) {
      int pick = -1, deg = -1;
      for (int v = cand.find_first(); v >= 0; v = cand.find_next(v)) {
        const int dv = count_in(g.neighbours(v), cand);
        if (dv > deg) {
          deg = dv;
          pick = v;
        }
      }
      clique.push_back(pick);
      cand.reset(pick);
      cand &= g.neighbours(pick);
    }
    std::vector<int>& take = ind.size() >= clique.size() ? ind : clique;
    kinds.push_back(ind.size() >= clique.size() ? 2 : 1);
    std::sort(take.begin(), take.end());
    for (int v : take) rem.reset(v);
    blocks.push_back(std::move(take));
  }
  return {std::move(blocks), std::move(kinds)};
}

/// Exact branch and bound for the minimum number of cliques and independent
/// sets covering all vertices.  Vertices are placed in id order; a block
/// opened as a singleton commits to clique or independent set when its
/// second vertex arrives.
struct CochromaticSearch {
  const Graph& g;
  std::vector<std::vector<int>> members;
  std::vector<int> kind;  // 0 undecided singleton, 1 clique, 2 independent
  std::vector<std::vector<int>> best;
  std::vector<int> best_kind;

  void dfs(int v) {
    if (static_cast<int>(members.size()) >= static_cast<int>(best.size()))
      return;
    if (v == g.n()) {
      best = members;
      best_kind = kind;
      return;
    }
    for (int i = 0; i < static_cast<int>(members.size()); ++i) {
      bool all = true, none = true;
      for (int u : members[i]) (g.has_edge(u, v) ? none : all) = false;
      const int old = kind[i];
      int next = old;
      if (old == 0)
        next = all ? 1 : 2;
      else if ((old == 1 && !all) || (old == 2 && !none))
        continue;
      kind[i] = next;
      members[i].push_back(v);
      dfs(v + 1);
      members[i].pop_back();
      kind[i] = old;
    }
    members.push_back({v});
    kind.push_back(0);
    dfs(v + 1);
    members.pop_back();
    kind.pop_back();
  }
};

}  // namespace detail

/// Cover of a graph that avoids n disjoint stars K_{1,k}, their complement,
/// n disjoint cliques K_l, and that complement, by cliques and independent
/// sets.  Exact (minimum number of blocks) up to exact_cap vertices, greedy
/// beyond; singleton blocks count as cliques.
inline LabelledPartition cochromatic_star(const Graph& g, int n, int k, int l,
                                          int exact_cap = 16) {
  if (n < 1 || k < 1 || l < 1)
    throw argument_error("cochromatic_star: parameters must be positive");
  const PatternSpec forbidden[] = {
      {PatternFamily::g1, n, k},
      {PatternFamily::h1, n, k},
      {PatternFamily::cliques, n, l},
      {PatternFamily::co_cliques, n, l},
  };
  for (const PatternSpec& spec : forbidden)
    if (auto w = find_induced(g, spec))
      throw class_violation(format_pattern(spec), *w);

  auto [blocks, kinds] = detail::greedy_cochromatic(g);
  if (g.n() > 0 && g.n() <= exact_cap) {
    detail::CochromaticSearch search{g, {}, {}, blocks, kinds};
    search.dfs(0);
    blocks = std::move(search.best);
    kinds = std::move(search.best_kind);
  }
  LabelledPartition out;
  for (int i = 0; i < static_cast<int>(blocks.size()); ++i) {
    std::sort(blocks[i].begin(), blocks[i].end());
    out.blocks.push_back({kinds[i] == 2 ? BlockKind::independent
                                        : BlockKind::clique,
                          Side::general, std::move(blocks[i])});
  }
  return out;
}

/// Partition of a graph avoiding all eight star families at (n, k) plus n
/// disjoint K_l and its complement, into cliques and independent sets such
/// that every pair of blocks drops both two-star orientations at size
/// 2k - 1.  The clique/independent cover comes first; each pair of cover
/// blocks is refined by the bipartite star partition of the graph between
/// them, and the refinements are intersected inside each cover block.
inline LabelledPartition main_partition(const Graph& g, int n, int k, int l,
                                        bool greedy = false,
                                        int exact_cap = 16) {
  if (n < 1 || k < 1 || l < 1)
    throw argument_error("main_partition: parameters must be positive");
  const PatternSpec forbidden[] = {
      {PatternFamily::g1, n, k},       {PatternFamily::g2, n, k},
      {PatternFamily::g3, n, k},       {PatternFamily::g4, n, k},
      {PatternFamily::h1, n, k},       {PatternFamily::h2, n, k},
      {PatternFamily::h3, n, k},       {PatternFamily::h4, n, k},
      {PatternFamily::cliques, n, l},  {PatternFamily::co_cliques, n, l},
  };
  for (const PatternSpec& spec : forbidden)
    if (auto w = find_induced(g, spec))
      throw class_violation(format_pattern(spec), *w);

  const StarParams sp(n, n, n, n, k);
  if (either_star_size(sp) > detail::star_size_cap)
    throw size_error(
        "main_partition: required star size exceeds the supported cap for "
        "these parameters");

  const LabelledPartition coch = cochromatic_star(g, n, k, l, exact_cap);
  const int z = static_cast<int>(coch.blocks.size());
  std::vector<std::vector<std::vector<int>>> labs(z);
  for (int i = 0; i < z; ++i) {
    for (int j = i + 1; j < z; ++j) {
      const std::vector<int>& vi = coch.blocks[i].vertices;
      const std::vector<int>& vj = coch.blocks[j].vertices;
      const BipartiteGraph bp = BipartiteGraph::from_graph(g, vi, vj);
      const LabelledPartition lp = detail::with_id_map(
          vi, &vj, [&] { return bipartite_star_partition(bp, sp, greedy); });
      std::vector<int> li(vi.size(), 0), lj(vj.size(), 0);
      int tops = 0;
      for (const Block& blk : lp.blocks) {
        if (blk.side == Side::top) {
          ++tops;
          for (int x : blk.vertices) li[x] = tops;
        }
      }
      int bots = 0;
      for (const Block& blk : lp.blocks) {
        if (blk.side == Side::bottom) {
          ++bots;
          for (int y : blk.vertices) lj[y] = bots;
        }
      }
      labs[i].push_back(std::move(li));
      labs[j].push_back(std::move(lj));
    }
  }

  LabelledPartition out;
  for (int i = 0; i < z; ++i) {
    const std::vector<int>& vi = coch.blocks[i].vertices;
    const std::vector<int> lab =
        intersect_labelings(labs[i], static_cast<int>(vi.size()));
    std::map<int, int> seen;
    std::vector<std::vector<int>> cells;
    for (int x = 0; x < static_cast<int>(vi.size()); ++x) {
      auto it = seen.find(lab[x]);
      if (it == seen.end()) {
        seen.emplace(lab[x], static_cast<int>(cells.size()));
        cells.push_back({vi[x]});
      } else {
        cells[it->second].push_back(vi[x]);
      }
    }
    for (auto& cell : cells)
      out.blocks.push_back({coch.blocks[i].kind, Side::general, std::move(cell)});
  }

  const std::string lam =
      format_pattern({PatternFamily::lambda, 2, 2 * k - 1});
  const std::string up = format_pattern({PatternFamily::up, 2, 2 * k - 1});
  const int total = static_cast<int>(out.blocks.size());
  for (int x = 0; x < total; ++x) {
    for (int y = x + 1; y < total; ++y) {
      out.guarantees.push_back({x, y, lam});
      out.guarantees.push_back({x, y, up});
    }
  }
  return out;
}

}  // namespace costar
