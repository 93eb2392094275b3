#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "costar/arith.hpp"
#include "costar/bits.hpp"
#include "costar/covering.hpp"
#include "costar/errors.hpp"
#include "costar/graph.hpp"
#include "costar/partition.hpp"
#include "costar/patterns.hpp"

/// Degree-slack chain templates for bipartite graphs excluding disjoint star
/// unions on both sides and in both senses.  Compared with the matching-family
/// chains, exact joins are relaxed to "d-joins": each vertex may miss up to d
/// vertices of the far bags.  The pipeline is
///
///   d_template_procedure  -> bags A_1..A_z / B_1..B_z with bounded-degree
///                            side conditions, plus covering certificates
///   marked vertices M, N  -> the few vertices violating the far-bag slack;
///                            partition_marked groups them into classes whose
///                            bag traces are far apart
///   refine_consecutive    -> splits each bag into pieces so that consecutive
///                            and same-index piece pairs exclude one star
///                            union fewer than the host class
///   collapse_d_template   -> unions pieces across bags by (parity, kind of
///                            start) so only 4q blocks per side remain, at
///                            the price of growing star size by 2d.
namespace costar {

/// Parameters of the four-way star-free class
/// Free(n_up ⊓_k, n_lambda Λ_k, co-(m_up ⊓_k), co-(m_lambda Λ_k)), where Λ
/// has centres on the top side, ⊓ on the bottom side.  r is the covering
/// multiplicity; r = k*n is used by the refinement stage and is the default.
struct StarParams {
  int n_up = 3;
  int n_lambda = 3;
  int m_up = 3;
  int m_lambda = 3;
  int k = 1;
  int r = 0;

  StarParams() { r = k * n(); }
  StarParams(int nu, int nl, int mu, int ml, int star_k, int cover_r = 0)
      : n_up(nu), n_lambda(nl), m_up(mu), m_lambda(ml), k(star_k), r(cover_r) {
    if (n_up < 1 || n_lambda < 1 || m_up < 1 || m_lambda < 1)
      throw argument_error("StarParams: multiplicities must be >= 1");
    if (k < 1) throw argument_error("StarParams: k must be >= 1");
    if (r < 0) throw argument_error("StarParams: r must be >= 0");
    if (n() > 10000 || k > 10000 || r > 100000)
      throw argument_error("StarParams: parameters out of supported range");
    if (r == 0) r = k * n();
    if (static_cast<long long>(n() - 1 + k) * r > (1LL << 30))
      throw argument_error("StarParams: parameters out of supported range");
  }

  /// Largest of the four multiplicities; the slack and bounds use it.
  int n() const { return std::max(std::max(n_up, n_lambda), std::max(m_up, m_lambda)); }
  /// Degree slack of the template: d = (n-1)r + kr.
  int d() const { return (n() - 1) * r + k * r; }
  /// Sum of the multiplicities, the induction measure.
  int mu() const { return n_up + n_lambda + m_up + m_lambda; }
};

/// Chain template with degree slack d.  Bags are stored 0-based; `start[i]`
/// marks indices whose B-bag was begun as a fresh minimum-degree singleton
/// (the set I).  The companion sets record how each bag was produced:
///   plus_a[i]/plus_b[i]   the candidate sets A_i^+ / B_i^+,
///   prime_a[i]/prime_b[i] the covering unions selected inside them,
///   cc_a[i]               the last covering round: n-1 vertices of A_i that
///                         co-cover plus_b[i+1], each with at most kr
///                         non-neighbours in the remainder beyond it,
///   cc_b[i]               dually, covers plus_a[i] (for start indices the
///                         singleton B-bag itself serves as the certificate).
/// `marked_a`/`marked_b` are the vertices that violate the far-bag slack
/// towards earlier bags; all four chain conditions hold once they are set
/// aside.  After refine_consecutive, `pieces_a[i]`/`pieces_b[i]` subdivide
/// every bag into exactly `q` (possibly empty) pieces.
struct DTemplate {
  std::vector<std::vector<int>> bags_a, bags_b;
  std::vector<std::vector<int>> plus_a, plus_b;
  std::vector<std::vector<int>> prime_a, prime_b;
  std::vector<std::vector<int>> cc_a, cc_b;
  std::vector<char> start;
  std::vector<int> marked_a, marked_b;
  int a_size = 0, b_size = 0;
  int d = 0;
  StarParams params;
  bool refined = false;
  int q = 0;
  std::vector<std::vector<std::vector<int>>> pieces_a, pieces_b;

  int z() const { return static_cast<int>(bags_a.size()); }
  std::vector<int> start_indices() const {
    std::vector<int> out;
    for (int i = 0; i < z(); ++i)
      if (start[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
  }
};

namespace detail {

inline Bits full_bits(int n) {
  Bits b(n);
  for (int v = 0; v < n; ++v) b.set(v);
  return b;
}

inline Bits bits_of(int n, const std::vector<int>& ids) {
  Bits b(n);
  for (int v : ids) b.set(v);
  return b;
}

inline int count_in(const Bits& row, const Bits& set) {
  Bits t = row;
  t &= set;
  return t.count();
}

/// Minimum-degree vertex of rem_b, degree counted towards rem_a only; ties
/// resolved towards the lowest id.
inline int min_degree_vertex(const BipartiteGraph& b, const Bits& rem_a, const Bits& rem_b) {
  int best = -1, best_deg = 0;
  for (int v = rem_b.find_first(); v >= 0; v = rem_b.find_next(v)) {
    int deg = count_in(b.col(v), rem_a);
    if (best < 0 || deg < best_deg) {
      best = v;
      best_deg = deg;
    }
  }
  return best;
}

}  // namespace detail

/// Runs the slack-chain procedure on a bipartite graph in
/// Free(n_up ⊓_k, n_lambda Λ_k, co-(m_up ⊓_k), co-(m_lambda Λ_k)).
/// Each round starts a B-bag (fresh minimum-degree singleton for start
/// indices), grows the opposite A-candidates, and alternates coverings:
/// a complement covering of the remaining B against A_i^+ yields the next
/// candidates B_{i+1}^+ together with certificate cc_a[i], and a direct
/// covering of the remaining A against B_{i+1}^+ yields A_{i+1}^+ and
/// cc_b[i+1].  Vertices whose residual (co-)degree exceeds kr are pushed
/// back into the pool; a final bag scoops whatever is left of A.
/// Afterwards the slack conditions hold for every index, and the vertices
/// breaking the backward conditions are recorded in marked_a / marked_b.
inline DTemplate d_template_procedure(const BipartiteGraph& b, const StarParams& p,
                                      bool greedy = false) {
  if (p.n_up < 2 || p.n_lambda < 2 || p.m_up < 2 || p.m_lambda < 2)
    throw argument_error("d_template_procedure: multiplicities must be >= 2");
  const PatternSpec forbidden[] = {{PatternFamily::up, p.n_up, p.k},
                                   {PatternFamily::lambda, p.n_lambda, p.k},
                                   {PatternFamily::co_up, p.m_up, p.k},
                                   {PatternFamily::co_lambda, p.m_lambda, p.k}};
  for (const PatternSpec& spec : forbidden)
    if (auto w = find_induced_bipartite(b, spec))
      throw class_violation(format_pattern(spec), w->a, w->b);

  DTemplate t;
  t.params = p;
  t.d = p.d();
  t.a_size = b.a_size();
  t.b_size = b.b_size();
  const int n = p.n(), k = p.k, r = p.r;
  const long long need = static_cast<long long>(n - 1) * r;
  const long long kr = static_cast<long long>(k) * r;

  Bits rem_a = detail::full_bits(b.a_size());
  Bits rem_b = detail::full_bits(b.b_size());

  auto open = [&]() {
    t.bags_a.emplace_back();
    t.bags_b.emplace_back();
    t.plus_a.emplace_back();
    t.plus_b.emplace_back();
    t.prime_a.emplace_back();
    t.prime_b.emplace_back();
    t.cc_a.emplace_back();
    t.cc_b.emplace_back();
    t.start.push_back(0);
  };
  auto place_a = [&](int i, std::vector<int> ids) {
    for (int v : ids) rem_a.reset(v);
    t.bags_a[static_cast<std::size_t>(i)] = std::move(ids);
  };
  auto place_b = [&](int i, std::vector<int> ids) {
    for (int v : ids) rem_b.reset(v);
    t.bags_b[static_cast<std::size_t>(i)] = std::move(ids);
  };
  // Opens bag i as a fresh start: singleton B-bag of minimum remaining
  // degree, candidates A_i^+ = its neighbourhood among the unused A.
  auto fresh_start = [&](int i) {
    int v = detail::min_degree_vertex(b, rem_a, rem_b);
    t.start[static_cast<std::size_t>(i)] = 1;
    t.plus_b[static_cast<std::size_t>(i)] = {v};
    t.cc_b[static_cast<std::size_t>(i)] = {v};
    place_b(i, {v});
    Bits na = b.col(v);
    na &= rem_a;
    t.plus_a[static_cast<std::size_t>(i)] = na.to_vector();
  };

  if (b.b_size() == 0) {
    open();
    place_a(0, rem_a.to_vector());
  } else {
    open();
    fresh_start(0);
    int i = 0;
    const int bag_cap = 2 * b.b_size() + 4;
    while (true) {
      if (t.z() > bag_cap)
        throw contract_error("d_template_procedure: bag count exceeded its bound");
      if (static_cast<long long>(t.plus_a[static_cast<std::size_t>(i)].size()) >= need) {
        // Main A-step: complement covering of the remaining B by A_i^+.
        const std::vector<int>& aplus = t.plus_a[static_cast<std::size_t>(i)];
        std::vector<int> brem = rem_b.to_vector();
        CoverStructure cov = r_cover_structure(b.induced(aplus, brem).complement(), n, k, r, greedy);
        auto& prime = t.prime_a[static_cast<std::size_t>(i)];
        for (int x : cov.w) prime.push_back(aplus[static_cast<std::size_t>(x)]);
        for (int x : cov.w_prime)
          t.cc_a[static_cast<std::size_t>(i)].push_back(aplus[static_cast<std::size_t>(x)]);
        std::vector<int> bplus_next;
        for (int x : cov.covered) bplus_next.push_back(brem[static_cast<std::size_t>(x)]);
        // Vertices of A_i' with too many non-neighbours beyond B_{i+1}^+ go
        // back to the pool; the rest of A_i^+ satisfies the bound already.
        Bits outside = rem_b;
        for (int v : bplus_next) outside.reset(v);
        const long long out_sz = outside.count();
        Bits dropped(b.a_size());
        for (int v : prime)
          if (out_sz - detail::count_in(b.row(v), outside) > kr) dropped.set(v);
        std::vector<int> bag;
        for (int v : aplus)
          if (!dropped.test(v)) bag.push_back(v);
        if (bag.empty())
          throw contract_error("d_template_procedure: covering certificate failed on side A");
        place_a(i, std::move(bag));

        open();  // index i+1
        t.plus_b[static_cast<std::size_t>(i + 1)] = bplus_next;
        if (static_cast<long long>(bplus_next.size()) >= need) {
          // Main B-step: direct covering of the remaining A by B_{i+1}^+.
          std::vector<int> arem = rem_a.to_vector();
          CoverStructure cov2 =
              r_cover_structure(b.induced(arem, bplus_next).swapped(), n, k, r, greedy);
          auto& primeb = t.prime_b[static_cast<std::size_t>(i + 1)];
          for (int x : cov2.w) primeb.push_back(bplus_next[static_cast<std::size_t>(x)]);
          for (int x : cov2.w_prime)
            t.cc_b[static_cast<std::size_t>(i + 1)].push_back(bplus_next[static_cast<std::size_t>(x)]);
          std::vector<int> aplus_next;
          for (int x : cov2.covered) aplus_next.push_back(arem[static_cast<std::size_t>(x)]);
          Bits outside2 = rem_a;
          for (int v : aplus_next) outside2.reset(v);
          Bits dropped2(b.b_size());
          for (int v : primeb)
            if (detail::count_in(b.col(v), outside2) > kr) dropped2.set(v);
          std::vector<int> bagb;
          for (int v : bplus_next)
            if (!dropped2.test(v)) bagb.push_back(v);
          if (bagb.empty())
            throw contract_error("d_template_procedure: covering certificate failed on side B");
          place_b(i + 1, std::move(bagb));
          t.plus_a[static_cast<std::size_t>(i + 1)] = aplus_next;
          ++i;
          continue;
        }
        // Too few candidates to cover: index i+1 stays empty on both sides
        // and the chain restarts beyond it.
        if (rem_b.none()) {
          open();  // index i+2 scoops the unplaced A-vertices
          place_a(i + 2, rem_a.to_vector());
          break;
        }
        open();
        fresh_start(i + 2);
        i += 2;
        continue;
      }
      // Restart: A_i stays empty.
      if (rem_b.none()) {
        open();  // index i+1 scoops the unplaced A-vertices
        place_a(i + 1, rem_a.to_vector());
        break;
      }
      open();
      fresh_start(i + 1);
      i += 1;
      continue;
    }
  }

  // Backward-condition marking: A-vertices with more than d neighbours in
  // earlier B-bags, B-vertices with more than d non-neighbours in A-bags at
  // least two indices below.
  const int z = t.z();
  {
    Bits below_b(b.b_size());
    std::vector<Bits> prefix_a;  // prefix_a[i] = union of bags_a[0..i-1]
    prefix_a.emplace_back(b.a_size());
    for (int i = 0; i < z; ++i) {
      Bits next = prefix_a.back();
      for (int v : t.bags_a[static_cast<std::size_t>(i)]) next.set(v);
      prefix_a.push_back(next);
    }
    for (int i = 0; i < z; ++i) {
      for (int v : t.bags_a[static_cast<std::size_t>(i)])
        if (detail::count_in(b.row(v), below_b) > t.d) t.marked_a.push_back(v);
      if (i >= 1) {
        const Bits& far = prefix_a[static_cast<std::size_t>(i - 1)];
        const int far_sz = far.count();
        for (int v : t.bags_b[static_cast<std::size_t>(i)])
          if (far_sz - detail::count_in(b.col(v), far) > t.d) t.marked_b.push_back(v);
      }
      for (int v : t.bags_b[static_cast<std::size_t>(i)]) below_b.set(v);
    }
    std::sort(t.marked_a.begin(), t.marked_a.end());
    std::sort(t.marked_b.begin(), t.marked_b.end());
  }
  return t;
}

/// Checks the per-index degree conditions the procedure establishes:
///   (P1) A_i has at most d  non-neighbours in B beyond bag i+1,
///   (P2) B_i has at most kr neighbours in A beyond the bags and A_i^+,
///   (P3) B_i has at most d  neighbours in A beyond bag i,
///   (P4) A_i has at most kr non-neighbours in B beyond bag i and B_{i+1}^+.
/// On failure returns false and, if `why` is given, a description.
inline bool p_conditions_hold(const BipartiteGraph& b, const DTemplate& t,
                              std::string* why = nullptr) {
  const int z = t.z();
  const long long kr = static_cast<long long>(t.params.k) * t.params.r;
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::vector<Bits> suff_b(static_cast<std::size_t>(z) + 1, Bits(b.b_size()));
  for (int i = z - 1; i >= 0; --i) {
    suff_b[static_cast<std::size_t>(i)] = suff_b[static_cast<std::size_t>(i) + 1];
    for (int v : t.bags_b[static_cast<std::size_t>(i)])
      suff_b[static_cast<std::size_t>(i)].set(v);
  }
  std::vector<Bits> suff_a(static_cast<std::size_t>(z) + 1, Bits(b.a_size()));
  for (int i = z - 1; i >= 0; --i) {
    suff_a[static_cast<std::size_t>(i)] = suff_a[static_cast<std::size_t>(i) + 1];
    for (int v : t.bags_a[static_cast<std::size_t>(i)])
      suff_a[static_cast<std::size_t>(i)].set(v);
  }
  for (int i = 0; i < z; ++i) {
    // (P1): non-neighbours of A_i within bags i+2 and beyond.
    if (i + 2 <= z) {
      const Bits& beyond = suff_b[static_cast<std::size_t>(std::min(i + 2, z))];
      const int sz = beyond.count();
      for (int v : t.bags_a[static_cast<std::size_t>(i)])
        if (sz - detail::count_in(b.row(v), beyond) > t.d)
          return fail("P1 fails for A-vertex " + std::to_string(v) + " at bag " +
                      std::to_string(i));
    }
    // (P2): neighbours of B_i in A beyond bags 0..i-1 and A_i^+.
    {
      Bits beyond = suff_a[static_cast<std::size_t>(i)];
      for (int v : t.plus_a[static_cast<std::size_t>(i)]) beyond.reset(v);
      for (int v : t.bags_b[static_cast<std::size_t>(i)])
        if (detail::count_in(b.col(v), beyond) > kr)
          return fail("P2 fails for B-vertex " + std::to_string(v) + " at bag " +
                      std::to_string(i));
    }
    // (P3): neighbours of B_i in A beyond bags 0..i.
    {
      const Bits& beyond = suff_a[static_cast<std::size_t>(std::min(i + 1, z))];
      for (int v : t.bags_b[static_cast<std::size_t>(i)])
        if (detail::count_in(b.col(v), beyond) > t.d)
          return fail("P3 fails for B-vertex " + std::to_string(v) + " at bag " +
                      std::to_string(i));
    }
    // (P4): non-neighbours of A_i in B beyond bags 0..i and B_{i+1}^+.
    {
      Bits beyond = suff_b[static_cast<std::size_t>(std::min(i + 1, z))];
      if (i + 1 < z)
        for (int v : t.plus_b[static_cast<std::size_t>(i + 1)]) beyond.reset(v);
      const int sz = beyond.count();
      for (int v : t.bags_a[static_cast<std::size_t>(i)])
        if (sz - detail::count_in(b.row(v), beyond) > kr)
          return fail("P4 fails for A-vertex " + std::to_string(v) + " at bag " +
                      std::to_string(i));
    }
  }
  return true;
}

/// Checks the two-sided slack-chain conditions on the unmarked vertices:
/// A_i \ M is d-joined to far-later B-bags and d-co-joined to earlier ones;
/// B_i \ N is d-joined to A-bags two below and d-co-joined to later ones.
inline bool d_template_conditions_hold(const BipartiteGraph& b, const DTemplate& t,
                                       std::string* why = nullptr) {
  const int z = t.z();
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  Bits marked_a = detail::bits_of(b.a_size(), t.marked_a);
  Bits marked_b = detail::bits_of(b.b_size(), t.marked_b);
  std::vector<Bits> keep_a(static_cast<std::size_t>(z), Bits(b.a_size()));
  std::vector<Bits> keep_b(static_cast<std::size_t>(z), Bits(b.b_size()));
  for (int i = 0; i < z; ++i) {
    for (int v : t.bags_a[static_cast<std::size_t>(i)])
      if (!marked_a.test(v)) keep_a[static_cast<std::size_t>(i)].set(v);
    for (int v : t.bags_b[static_cast<std::size_t>(i)])
      if (!marked_b.test(v)) keep_b[static_cast<std::size_t>(i)].set(v);
  }
  for (int i = 0; i < z; ++i) {
    Bits later_b(b.b_size()), earlier_b(b.b_size());
    for (int h = i + 2; h < z; ++h) later_b |= keep_b[static_cast<std::size_t>(h)];
    for (int h = 0; h < i; ++h) earlier_b |= keep_b[static_cast<std::size_t>(h)];
    const int later_sz = later_b.count();
    for (int v = keep_a[static_cast<std::size_t>(i)].find_first(); v >= 0;
         v = keep_a[static_cast<std::size_t>(i)].find_next(v)) {
      if (later_sz - detail::count_in(b.row(v), later_b) > t.d)
        return fail("A-vertex " + std::to_string(v) + " in bag " + std::to_string(i) +
                    " is not d-joined to the later B-bags");
      if (detail::count_in(b.row(v), earlier_b) > t.d)
        return fail("A-vertex " + std::to_string(v) + " in bag " + std::to_string(i) +
                    " is not d-co-joined to the earlier B-bags");
    }
    Bits far_a(b.a_size()), later_a(b.a_size());
    for (int h = 0; h + 2 <= i; ++h) far_a |= keep_a[static_cast<std::size_t>(h)];
    for (int h = i + 1; h < z; ++h) later_a |= keep_a[static_cast<std::size_t>(h)];
    const int far_sz = far_a.count();
    for (int v = keep_b[static_cast<std::size_t>(i)].find_first(); v >= 0;
         v = keep_b[static_cast<std::size_t>(i)].find_next(v)) {
      if (far_sz - detail::count_in(b.col(v), far_a) > t.d)
        return fail("B-vertex " + std::to_string(v) + " in bag " + std::to_string(i) +
                    " is not d-joined to the A-bags two below");
      if (detail::count_in(b.col(v), later_a) > t.d)
        return fail("B-vertex " + std::to_string(v) + " in bag " + std::to_string(i) +
                    " is not d-co-joined to the later A-bags");
    }
  }
  return true;
}

/// Bag-interval trace of a marked vertex: `lo` is the first index whose
/// earlier-bag count already exceeds the slack, `hi` the bag owning the
/// vertex.  Classes of marked vertices are built so traces stay disjoint
/// with a gap, which restores the slack conditions within each class.
struct Trace {
  int vertex = 0;
  int lo = 0;
  int hi = 0;
};

/// Traces of the marked A-vertices: lo = least j with more than d neighbours
/// inside B-bags 0..j-1.
inline std::vector<Trace> marked_traces_a(const BipartiteGraph& b, const DTemplate& t) {
  std::vector<Trace> out;
  Bits marked = detail::bits_of(b.a_size(), t.marked_a);
  std::vector<Bits> prefix_b;
  prefix_b.emplace_back(b.b_size());
  for (int i = 0; i < t.z(); ++i) {
    Bits next = prefix_b.back();
    for (int v : t.bags_b[static_cast<std::size_t>(i)]) next.set(v);
    prefix_b.push_back(next);
  }
  for (int i = 0; i < t.z(); ++i)
    for (int v : t.bags_a[static_cast<std::size_t>(i)]) {
      if (!marked.test(v)) continue;
      Trace tr{v, i, i};
      for (int j = 1; j <= i; ++j)
        if (detail::count_in(b.row(v), prefix_b[static_cast<std::size_t>(j)]) > t.d) {
          tr.lo = j;
          break;
        }
      out.push_back(tr);
    }
  return out;
}

/// Traces of the marked B-vertices: lo = least j with more than d
/// non-neighbours inside A-bags 0..j-2.
inline std::vector<Trace> marked_traces_b(const BipartiteGraph& b, const DTemplate& t) {
  std::vector<Trace> out;
  Bits marked = detail::bits_of(b.b_size(), t.marked_b);
  std::vector<Bits> prefix_a;
  prefix_a.emplace_back(b.a_size());
  for (int i = 0; i < t.z(); ++i) {
    Bits next = prefix_a.back();
    for (int v : t.bags_a[static_cast<std::size_t>(i)]) next.set(v);
    prefix_a.push_back(next);
  }
  for (int i = 0; i < t.z(); ++i)
    for (int v : t.bags_b[static_cast<std::size_t>(i)]) {
      if (!marked.test(v)) continue;
      Trace tr{v, i, i};
      for (int j = 2; j <= i; ++j) {
        const Bits& far = prefix_a[static_cast<std::size_t>(j - 1)];
        if (far.count() - detail::count_in(b.col(v), far) > t.d) {
          tr.lo = j;
          break;
        }
      }
      out.push_back(tr);
    }
  return out;
}

/// Groups traced vertices into at most c classes such that within a class the
/// traces are pairwise disjoint and consecutive traces leave a gap of at
/// least two indices.  Requires every index to lie in at most c/3 traces
/// (contract violation otherwise): first-fit by ascending lo needs at most
/// c/3 classes with merely disjoint traces, and a three-way round-robin split
/// of each converts disjointness into the gap.
inline std::vector<std::vector<int>> partition_marked(std::vector<Trace> traces,
                                                      std::uint64_t c) {
  if (traces.empty()) return {};
  const std::uint64_t c3 = c / 3;
  if (c3 == 0) throw argument_error("partition_marked: c must be at least 3");
  int max_hi = 0;
  for (const Trace& tr : traces) {
    if (tr.lo > tr.hi || tr.lo < 0)
      throw argument_error("partition_marked: malformed trace");
    max_hi = std::max(max_hi, tr.hi);
  }
  std::vector<std::uint64_t> load(static_cast<std::size_t>(max_hi) + 1, 0);
  for (const Trace& tr : traces)
    for (int l = tr.lo; l <= tr.hi; ++l)
      if (++load[static_cast<std::size_t>(l)] > c3)
        throw contract_error("partition_marked: more than c/3 traces cover index " +
                             std::to_string(l));
  std::sort(traces.begin(), traces.end(), [](const Trace& x, const Trace& y) {
    return x.lo != y.lo ? x.lo < y.lo : x.vertex < y.vertex;
  });
  std::vector<std::vector<int>> classes;   // vertex lists, in insertion order
  std::vector<int> class_hi;               // largest hi seen per class
  for (const Trace& tr : traces) {
    std::size_t slot = classes.size();
    for (std::size_t s = 0; s < classes.size(); ++s)
      if (class_hi[s] < tr.lo) {
        slot = s;
        break;
      }
    if (slot == classes.size()) {
      if (classes.size() == c3)
        throw contract_error("partition_marked: first-fit exceeded c/3 classes");
      classes.emplace_back();
      class_hi.push_back(tr.hi);
    }
    classes[slot].push_back(tr.vertex);
    class_hi[slot] = std::max(class_hi[slot], tr.hi);
  }
  std::vector<std::vector<int>> out;
  for (const std::vector<int>& cls : classes)
    for (int off = 0; off < 3; ++off) {
      std::vector<int> part;
      for (std::size_t x = static_cast<std::size_t>(off); x < cls.size(); x += 3)
        part.push_back(cls[x]);
      if (!part.empty()) out.push_back(std::move(part));
    }
  return out;
}

/// Piece-count ceilings of the consecutive refinement.
inline std::uint64_t refine_pi1(const StarParams& p) {
  const std::uint64_t n = static_cast<std::uint64_t>(p.n());
  const std::uint64_t k = static_cast<std::uint64_t>(p.k);
  return sat_add(sat_binom(sat_mul(n, k), k), sat_mul(n, sat_pow(k, 5)));
}
inline std::uint64_t refine_pi2(const StarParams& p) {
  const std::uint64_t nr = sat_mul(static_cast<std::uint64_t>(p.n() - 1),
                                   static_cast<std::uint64_t>(p.r));
  return sat_binom(nr, static_cast<std::uint64_t>(p.r));
}
inline std::uint64_t refine_pi3(const StarParams& p) {
  return sat_mul(sat_mul(static_cast<std::uint64_t>(p.n() - 1),
                         static_cast<std::uint64_t>(p.r)),
                 static_cast<std::uint64_t>(p.k) + 1);
}
inline std::uint64_t refine_pi(const StarParams& p) {
  return std::max(std::max(refine_pi1(p), refine_pi2(p)), refine_pi3(p));
}
/// Ceiling on the classes of marked vertices per side: 3nkd².
inline std::uint64_t marked_class_bound(const StarParams& p) {
  return sat_mul(3, high_degree_bound(p.n(), p.k, p.d()));
}
/// Ceiling on the blocks per side after one full induction step: 4π² + 3nkd².
inline std::uint64_t induction_block_bound(const StarParams& p) {
  const std::uint64_t pi = refine_pi(p);
  return sat_add(sat_mul(4, sat_mul(pi, pi)), marked_class_bound(p));
}

/// Splits every bag into pieces so that each same-index pair (A_i, B_i) and
/// each consecutive pair (A_i, B_{i+1}) of pieces drops one star of its
/// respective pattern:
///   start indices:  B_{i+1} splits by the first k-subset of each vertex's
///                   neighbours in a fresh k-fold covering union; uncovered
///                   vertices become singletons.  Pieces of B_{i+1} are then
///                   co-(m_up-1)⊓_k-free against A_i.
///   other indices:  A_i splits by the first r-subset of its neighbours in
///                   B_i'; vertices of B_{i+1} inherited from B_i^+ or missed
///                   by the certificate cc_a[i-1] become singletons.  Pieces
///                   are co-(m_lambda-1)Λ_k-free against A_i.
///   same index:     B_i splits by the first r-subset of non-neighbours in
///                   A_{i-1}'; A_i-vertices inherited from A_{i-1}^+ or seen
///                   by cc_b[i-1] become singletons.  Pieces of B_i are then
///                   (n_up-1)⊓_k-free against A_i (start indices are joined
///                   pairs and need no split).
/// All bags end up with exactly q pieces, empty ones padding the tail.
inline DTemplate refine_consecutive(const BipartiteGraph& b, DTemplate t,
                                    bool greedy = false) {
  if (t.refined) return t;
  const int n = t.params.n(), k = t.params.k, r = t.params.r;
  if (static_cast<long long>(r) < static_cast<long long>(n) * k)
    throw argument_error("refine_consecutive: needs covering multiplicity r >= k*n");
  const int z = t.z();
  // Group keys per vertex; -1 entries separate the contributions of the two
  // conditions, {-2, v} marks a forced singleton.
  std::vector<std::map<int, std::vector<int>>> key_a(static_cast<std::size_t>(z));
  std::vector<std::map<int, std::vector<int>>> key_b(static_cast<std::size_t>(z));
  auto make_single = [](std::map<int, std::vector<int>>& keys, int v) {
    keys[v] = {-2, v};
  };
  auto append_key = [](std::map<int, std::vector<int>>& keys, int v,
                       const std::vector<int>& part) {
    auto it = keys.find(v);
    if (it != keys.end() && !it->second.empty() && it->second[0] == -2) return;
    std::vector<int>& dst = keys[v];
    dst.push_back(-1);
    dst.insert(dst.end(), part.begin(), part.end());
  };

  std::vector<Bits> prefix_a;  // prefix_a[i] = union of bags_a[0..i-1]
  prefix_a.emplace_back(b.a_size());
  for (int i = 0; i < z; ++i) {
    Bits next = prefix_a.back();
    for (int v : t.bags_a[static_cast<std::size_t>(i)]) next.set(v);
    prefix_a.push_back(next);
  }

  // Consecutive pairs (A_i, B_{i+1}).
  for (int i = 0; i + 1 < z; ++i) {
    const auto& bag_a = t.bags_a[static_cast<std::size_t>(i)];
    const auto& bag_b = t.bags_b[static_cast<std::size_t>(i + 1)];
    if (bag_a.empty() || bag_b.empty()) continue;
    if (t.start[static_cast<std::size_t>(i)]) {
      // Fresh k-fold covering of B_{i+1}^+ from the A-pool beyond A_i^+.
      Bits pool = detail::full_bits(b.a_size());
      pool.remove(prefix_a[static_cast<std::size_t>(i)]);
      for (int v : t.plus_a[static_cast<std::size_t>(i)]) pool.reset(v);
      std::vector<int> pool_ids = pool.to_vector();
      if (static_cast<long long>(pool_ids.size()) < static_cast<long long>(n - 1) * k)
        throw contract_error("refine_consecutive: pool too small at start index " +
                             std::to_string(i));
      const auto& bplus = t.plus_b[static_cast<std::size_t>(i + 1)];
      CoverStructure cov = r_cover_structure(b.induced(pool_ids, bplus), n, k, k, greedy);
      Bits aprime(b.a_size());
      for (int x : cov.w) aprime.set(pool_ids[static_cast<std::size_t>(x)]);
      Bits covered(b.b_size());
      for (int x : cov.covered) covered.set(bplus[static_cast<std::size_t>(x)]);
      for (int v : bag_b) {
        if (!covered.test(v)) {
          make_single(key_b[static_cast<std::size_t>(i + 1)], v);
          continue;
        }
        Bits nb = b.col(v);
        nb &= aprime;
        std::vector<int> part;
        for (int w = nb.find_first(); w >= 0 && static_cast<int>(part.size()) < k;
             w = nb.find_next(w))
          part.push_back(w);
        append_key(key_b[static_cast<std::size_t>(i + 1)], v, part);
      }
    } else {
      // A_i splits by its first r neighbours within B_i'.
      Bits primeb = detail::bits_of(b.b_size(), t.prime_b[static_cast<std::size_t>(i)]);
      for (int v : bag_a) {
        Bits nb = b.row(v);
        nb &= primeb;
        std::vector<int> part;
        for (int w = nb.find_first(); w >= 0 && static_cast<int>(part.size()) < r;
             w = nb.find_next(w))
          part.push_back(w);
        if (static_cast<int>(part.size()) < r)
          throw contract_error("refine_consecutive: vertex " + std::to_string(v) +
                               " is not r-covered by its bag certificate");
        append_key(key_a[static_cast<std::size_t>(i)], v, part);
      }
      // Singleton leftovers of B_{i+1}: inherited candidates and vertices
      // missed by the co-covering certificate of the previous index.
      if (t.cc_a[static_cast<std::size_t>(i - 1)].empty())
        throw contract_error("refine_consecutive: missing covering certificate at index " +
                             std::to_string(i - 1));
      Bits plus_prev = detail::bits_of(b.b_size(), t.plus_b[static_cast<std::size_t>(i)]);
      const auto& cc = t.cc_a[static_cast<std::size_t>(i - 1)];
      for (int v : bag_b) {
        if (plus_prev.test(v)) {
          make_single(key_b[static_cast<std::size_t>(i + 1)], v);
          continue;
        }
        bool seen = false;
        for (int w : cc)
          if (b.has_edge(w, v)) {
            seen = true;
            break;
          }
        if (!seen) make_single(key_b[static_cast<std::size_t>(i + 1)], v);
      }
    }
  }

  // Same-index pairs (A_i, B_i) at non-start indices.
  for (int i = 0; i < z; ++i) {
    if (t.start[static_cast<std::size_t>(i)]) continue;
    const auto& bag_a = t.bags_a[static_cast<std::size_t>(i)];
    const auto& bag_b = t.bags_b[static_cast<std::size_t>(i)];
    if (bag_a.empty() || bag_b.empty()) continue;
    Bits primea = detail::bits_of(b.a_size(), t.prime_a[static_cast<std::size_t>(i - 1)]);
    for (int v : bag_b) {
      Bits non = primea;
      non.remove(b.col(v));
      std::vector<int> part;
      for (int w = non.find_first(); w >= 0 && static_cast<int>(part.size()) < r;
           w = non.find_next(w))
        part.push_back(w);
      if (static_cast<int>(part.size()) < r)
        throw contract_error("refine_consecutive: vertex " + std::to_string(v) +
                             " is not r-co-covered by the previous bag");
      append_key(key_b[static_cast<std::size_t>(i)], v, part);
    }
    if (t.cc_b[static_cast<std::size_t>(i - 1)].empty())
      throw contract_error("refine_consecutive: missing covering certificate at index " +
                           std::to_string(i - 1));
    Bits plus_prev = detail::bits_of(b.a_size(), t.plus_a[static_cast<std::size_t>(i - 1)]);
    const auto& cc = t.cc_b[static_cast<std::size_t>(i - 1)];
    for (int v : bag_a) {
      if (plus_prev.test(v)) {
        make_single(key_a[static_cast<std::size_t>(i)], v);
        continue;
      }
      for (int w : cc)
        if (b.has_edge(v, w)) {
          make_single(key_a[static_cast<std::size_t>(i)], v);
          break;
        }
    }
  }

  // Assemble pieces: group each bag by accumulated key, deterministically in
  // lexicographic key order, then pad all bags to the common piece count.
  auto assemble = [](const std::vector<int>& bag,
                     std::map<int, std::vector<int>>& keys) {
    std::map<std::vector<int>, std::vector<int>> groups;
    for (int v : bag) groups[keys[v]].push_back(v);
    std::vector<std::vector<int>> pieces;
    for (auto& [key, members] : groups) {
      std::sort(members.begin(), members.end());
      pieces.push_back(std::move(members));
    }
    return pieces;
  };
  t.pieces_a.assign(static_cast<std::size_t>(z), {});
  t.pieces_b.assign(static_cast<std::size_t>(z), {});
  int q = 1;
  for (int i = 0; i < z; ++i) {
    t.pieces_a[static_cast<std::size_t>(i)] =
        assemble(t.bags_a[static_cast<std::size_t>(i)], key_a[static_cast<std::size_t>(i)]);
    t.pieces_b[static_cast<std::size_t>(i)] =
        assemble(t.bags_b[static_cast<std::size_t>(i)], key_b[static_cast<std::size_t>(i)]);
    q = std::max({q, static_cast<int>(t.pieces_a[static_cast<std::size_t>(i)].size()),
                  static_cast<int>(t.pieces_b[static_cast<std::size_t>(i)].size())});
  }
  const std::uint64_t pi = refine_pi(t.params);
  if (static_cast<std::uint64_t>(q) > sat_mul(pi, pi))
    throw contract_error("refine_consecutive: piece count exceeded its bound");
  for (int i = 0; i < z; ++i) {
    t.pieces_a[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(q));
    t.pieces_b[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(q));
  }
  t.q = q;
  t.refined = true;
  return t;
}

/// Collapses a refined template into 4q blocks per side: bags are unioned by
/// (index parity, start or not) and piece position, marked vertices set
/// aside.  Every cross pair then excludes a star union with one component
/// fewer than the host class, at star size k + 2d:
///   same parity       -> (n_up-1)⊓_{k+2d}-free,
///   off parity, start -> co-(m_up-1)⊓_{k+2d}-free,
///   off parity, other -> co-(m_lambda-1)Λ_{k+2d}-free,
/// keyed by the A-block's class.  Empty blocks are kept so indices stay
/// stable across instances.
inline LabelledPartition collapse_d_template(const DTemplate& t) {
  if (!t.refined)
    throw argument_error("collapse_d_template: template must be refined first");
  const int q = std::max(t.q, 1);
  const int s2 = t.params.k + 2 * t.d;
  Bits marked_a = detail::bits_of(t.a_size, t.marked_a);
  Bits marked_b = detail::bits_of(t.b_size, t.marked_b);

  LabelledPartition out;
  out.blocks.assign(static_cast<std::size_t>(8 * q), Block{});
  for (int cls = 0; cls < 4; ++cls)
    for (int g = 0; g < q; ++g) {
      out.blocks[static_cast<std::size_t>(cls * q + g)].kind = BlockKind::unconstrained;
      out.blocks[static_cast<std::size_t>(cls * q + g)].side = Side::top;
      out.blocks[static_cast<std::size_t>(4 * q + cls * q + g)].kind =
          BlockKind::unconstrained;
      out.blocks[static_cast<std::size_t>(4 * q + cls * q + g)].side = Side::bottom;
    }
  auto bag_class = [&](int i) {
    return (i % 2) * 2 + (t.start[static_cast<std::size_t>(i)] ? 0 : 1);
  };
  for (int i = 0; i < t.z(); ++i) {
    const int cls = bag_class(i);
    for (int g = 0; g < q; ++g) {
      for (int v : t.pieces_a[static_cast<std::size_t>(i)][static_cast<std::size_t>(g)])
        if (!marked_a.test(v))
          out.blocks[static_cast<std::size_t>(cls * q + g)].vertices.push_back(v);
      for (int v : t.pieces_b[static_cast<std::size_t>(i)][static_cast<std::size_t>(g)])
        if (!marked_b.test(v))
          out.blocks[static_cast<std::size_t>(4 * q + cls * q + g)].vertices.push_back(v);
    }
  }
  for (Block& blk : out.blocks) std::sort(blk.vertices.begin(), blk.vertices.end());

  for (int ca = 0; ca < 4; ++ca)
    for (int ga = 0; ga < q; ++ga)
      for (int cb = 0; cb < 4; ++cb)
        for (int gb = 0; gb < q; ++gb) {
          PatternSpec spec;
          if (ca / 2 == cb / 2)
            spec = {PatternFamily::up, t.params.n_up - 1, s2};
          else if (ca % 2 == 0)
            spec = {PatternFamily::co_up, t.params.m_up - 1, s2};
          else
            spec = {PatternFamily::co_lambda, t.params.m_lambda - 1, s2};
          out.guarantees.push_back(
              {ca * q + ga, 4 * q + cb * q + gb, format_pattern(spec)});
        }
  return out;
}

}  // namespace costar
