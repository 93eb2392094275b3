// Acceptance suite: run as `acceptance <n>` for n in 1..10; each criterion
// prints exactly one "criterion n: PASS/FAIL" line and exits nonzero on
// failure.  Every expectation here is recomputed from first principles —
// raw adjacency-mask enumeration, four-vertex lookup tables, explicit
// degree counting, brute-force minima — so the library is graded against
// independent arithmetic rather than against itself.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <costar/codec.hpp>
#include <costar/dtemplate.hpp>
#include <costar/matching.hpp>
#include <costar/patterns.hpp>
#include <costar/stars.hpp>
#include <costar/verify.hpp>

#include "support/gen.hpp"

namespace {

using costar::BipartiteGraph;
using costar::Graph;

std::string g_fail;  // first failure description
std::string g_note;  // appended to the PASS line

bool fail(const std::string& msg) {
  if (g_fail.empty()) g_fail = msg;
  return false;
}

// ---------------------------------------------------------------------------
// Small-graph plumbing shared by the criteria.

Graph graph_from_rows(const std::vector<std::uint16_t>& rows) {
  const int n = static_cast<int>(rows.size());
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rows[i] >> j & 1) g.add_edge(i, j);
  return g;
}

BipartiteGraph bip_from_rows(int a, int b, const std::uint32_t* rows) {
  BipartiteGraph g(a, b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j)
      if (rows[i] >> j & 1) g.add_edge(i, j);
  return g;
}

bool blocks_cover(const Graph& g, const costar::LabelledPartition& p) {
  try {
    p.block_of(g.n());
  } catch (const costar::argument_error&) {
    return false;
  }
  return true;
}

bool block_kinds_ok(const Graph& g, const costar::LabelledPartition& p) {
  for (const costar::Block& blk : p.blocks)
    for (std::size_t x = 0; x < blk.vertices.size(); ++x)
      for (std::size_t y = x + 1; y < blk.vertices.size(); ++y) {
        const bool e = g.has_edge(blk.vertices[x], blk.vertices[y]);
        if (blk.kind == costar::BlockKind::clique && !e) return false;
        if (blk.kind == costar::BlockKind::independent && e) return false;
      }
  return true;
}

// Classifies all 64 labelled four-vertex graphs once.  Bit order of the edge
// mask: 01, 02, 03, 12, 13, 23.  Marks the masks isomorphic to a two-edge
// matching or a four-cycle, plus the four-vertex path when asked.
std::array<bool, 64> four_vertex_table(bool forbid_path) {
  const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  std::array<bool, 64> bad{};
  for (int m = 0; m < 64; ++m) {
    int deg[4] = {0, 0, 0, 0}, e = 0;
    for (int p = 0; p < 6; ++p)
      if (m >> p & 1) {
        ++e;
        ++deg[pairs[p][0]];
        ++deg[pairs[p][1]];
      }
    const int dmax = *std::max_element(deg, deg + 4);
    if (e == 2 && dmax == 1) bad[m] = true;  // two disjoint edges
    if (e == 4 && dmax == 2) bad[m] = true;  // four-cycle
    if (forbid_path && e == 3) {             // path: degrees 1,1,2,2
      int d1 = 0, d2 = 0;
      for (int v = 0; v < 4; ++v) {
        d1 += deg[v] == 1;
        d2 += deg[v] == 2;
      }
      if (d1 == 2 && d2 == 2) bad[m] = true;
    }
  }
  return bad;
}

// Edge mask of the subgraph induced by x < y < z < w, in the table's order.
int sub_mask4(const std::vector<std::uint16_t>& rows, int x, int y, int z, int w) {
  int m = 0;
  m |= (rows[x] >> y & 1) << 0;
  m |= (rows[x] >> z & 1) << 1;
  m |= (rows[x] >> w & 1) << 2;
  m |= (rows[y] >> z & 1) << 3;
  m |= (rows[y] >> w & 1) << 4;
  m |= (rows[z] >> w & 1) << 5;
  return m;
}

// Relabels an adjacency-row graph: vertex i becomes perm[i].
std::vector<std::uint16_t> permuted(const std::vector<std::uint16_t>& rows,
                                    const std::vector<int>& perm) {
  const int n = static_cast<int>(rows.size());
  std::vector<std::uint16_t> out(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (rows[i] >> j & 1) out[perm[i]] |= static_cast<std::uint16_t>(1u << perm[j]);
  return out;
}

// Degree-profile bucket key used to cut down pairwise isomorphism tests.
std::string iso_key(const std::vector<std::uint16_t>& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<int> deg(n);
  for (int i = 0; i < n; ++i) deg[i] = std::popcount(rows[i]);
  std::vector<std::string> local(n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> nd;
    for (int j = 0; j < n; ++j)
      if (rows[i] >> j & 1) nd.push_back(deg[j]);
    std::sort(nd.begin(), nd.end());
    std::string s(1, static_cast<char>('a' + deg[i]));
    for (int d : nd) s.push_back(static_cast<char>('a' + d));
    local[i] = std::move(s);
  }
  std::sort(local.begin(), local.end());
  std::string key(1, static_cast<char>('a' + n));
  for (const std::string& s : local) {
    key += s;
    key += '|';
  }
  return key;
}

// Backtracking isomorphism test on adjacency rows (n <= 12).
bool isomorphic(const std::vector<std::uint16_t>& g, const std::vector<std::uint16_t>& h) {
  const int n = static_cast<int>(g.size());
  if (static_cast<int>(h.size()) != n) return false;
  std::vector<int> dg(n), dh(n);
  for (int i = 0; i < n; ++i) {
    dg[i] = std::popcount(g[i]);
    dh[i] = std::popcount(h[i]);
  }
  {
    std::vector<int> sg = dg, sh = dh;
    std::sort(sg.begin(), sg.end());
    std::sort(sh.begin(), sh.end());
    if (sg != sh) return false;
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return dg[x] > dg[y]; });
  std::vector<int> map(n, -1);
  std::vector<char> used(n, 0);
  std::function<bool(int)> place = [&](int idx) -> bool {
    if (idx == n) return true;
    const int v = order[idx];
    for (int w = 0; w < n; ++w) {
      if (used[w] || dh[w] != dg[v]) continue;
      bool ok = true;
      for (int jdx = 0; jdx < idx && ok; ++jdx) {
        const int u = order[jdx];
        ok = ((g[v] >> u) & 1) == ((h[w] >> map[u]) & 1);
      }
      if (!ok) continue;
      map[v] = w;
      used[w] = 1;
      if (place(idx + 1)) return true;
      used[w] = 0;
      map[v] = -1;
    }
    return false;
  };
  return place(0);
}

// ---------------------------------------------------------------------------
// Criterion 1: every bipartite host on at most ten vertices without a
// three-edge induced matching and without an induced six-cycle is split by
// bipartite_matching_partition into at most eight blocks per side, the
// verifier accepts the result, and no block pair spans a two-edge induced
// matching.  Hosts are enumerated exhaustively as adjacency masks; the class
// filter works on raw rows and is cross-checked against the detectors.

bool criterion1() {
  const costar::PatternSpec m3{costar::PatternFamily::matching, 3, 1};
  const costar::PatternSpec c6{costar::PatternFamily::co_matching, 3, 1};
  const costar::PatternSpec m2{costar::PatternFamily::matching, 2, 1};
  std::uint64_t members = 0, masks = 0;
  for (int a = 0; a <= 10; ++a)
    for (int b = 0; a + b <= 10; ++b) {
      const int nbits = a * b;
      const std::uint32_t bmask = b == 0 ? 0u : (1u << b) - 1u;
      std::vector<std::array<int, 3>> triples;
      for (int x = 0; x < a; ++x)
        for (int y = x + 1; y < a; ++y)
          for (int z = y + 1; z < a; ++z) triples.push_back({x, y, z});
      for (std::uint64_t mask = 0; mask < (1ull << nbits); ++mask) {
        ++masks;
        std::uint32_t rows[10] = {};
        for (int i = 0; i < a; ++i)
          rows[i] = static_cast<std::uint32_t>(mask >> (i * b)) & bmask;
        // A three-edge induced matching exists exactly when three top rows
        // have pairwise-private neighbours; the six-cycle is the same test
        // in the bipartite complement.
        bool excluded = false;
        for (const auto& t : triples) {
          const std::uint32_t r0 = rows[t[0]], r1 = rows[t[1]], r2 = rows[t[2]];
          if ((r0 & ~r1 & ~r2) && (r1 & ~r0 & ~r2) && (r2 & ~r0 & ~r1)) {
            excluded = true;
            break;
          }
        }
        if (!excluded)
          for (const auto& t : triples) {
            const std::uint32_t r0 = ~rows[t[0]] & bmask;
            const std::uint32_t r1 = ~rows[t[1]] & bmask;
            const std::uint32_t r2 = ~rows[t[2]] & bmask;
            if ((r0 & ~r1 & ~r2) && (r1 & ~r0 & ~r2) && (r2 & ~r0 & ~r1)) {
              excluded = true;
              break;
            }
          }
        if (excluded) {
          if (masks % 1000003 == 0) {  // sampled cross-check of rejections
            BipartiteGraph g = bip_from_rows(a, b, rows);
            if (!costar::find_induced_bipartite(g, m3) &&
                !costar::find_induced_bipartite(g, c6))
              return fail("row filter rejected a host the detectors call free");
          }
          continue;
        }
        BipartiteGraph g = bip_from_rows(a, b, rows);
        if (costar::find_induced_bipartite(g, m3) || costar::find_induced_bipartite(g, c6))
          return fail("row filter accepted a host the detectors reject");
        ++members;
        const costar::LabelledPartition p = costar::bipartite_matching_partition(g, 3, 3);
        int top = 0, bottom = 0;
        for (const costar::Block& blk : p.blocks)
          (blk.side == costar::Side::top ? top : bottom) += 1;
        if (top > 8 || bottom > 8)
          return fail("partition used more than eight blocks on one side");
        if (!costar::verify_partition(g, p, 1).verdict)
          return fail("verifier rejected an emitted partition");
        for (const costar::Block& bi : p.blocks)
          for (const costar::Block& bj : p.blocks) {
            if (bi.side != costar::Side::top || bj.side != costar::Side::bottom) continue;
            BipartiteGraph h = g.induced(bi.vertices, bj.vertices);
            if (costar::find_induced_bipartite(h, m2))
              return fail("a block pair spans a two-edge induced matching");
          }
      }
    }
  g_note = std::to_string(members) + " class members out of " + std::to_string(masks) +
           " bipartite masks";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 2: every host on at most nine vertices avoiding the two-edge
// matching and the four-cycle gets at most three blocks with valid kinds
// from cochromatic_2k2_c4, never fewer than the brute-force minimum.  Up to
// seven vertices every labelled host is enumerated (and the member count is
// cross-checked against count_labelled); at eight and nine one representative
// per isomorphism class is built by extension and exercised under six
// labellings.

bool pseudo_split_checks(const std::vector<std::uint16_t>& rows, std::optional<int> known_min) {
  Graph g = graph_from_rows(rows);
  const costar::LabelledPartition p = costar::cochromatic_2k2_c4(g);
  if (p.block_count() > 3) return fail("more than three blocks");
  if (!block_kinds_ok(g, p)) return fail("a block kind is violated");
  if (!blocks_cover(g, p)) return fail("blocks do not cover the host");
  int least = 0;
  if (known_min) {
    least = *known_min;
  } else {
    const std::optional<int> m = costar::brute_force_min_blocks(g, 0, 3);
    if (!m) return fail("brute force found no three-block partition for a member");
    least = *m;
  }
  if (p.block_count() < least)
    return fail("emitted fewer blocks than the brute-force minimum allows");
  return true;
}

bool criterion2() {
  const auto bad = four_vertex_table(false);
  const std::vector<costar::PatternSpec> cls{{costar::PatternFamily::matching, 2, 1},
                                             {costar::PatternFamily::co_matching, 2, 1}};
  std::uint64_t labelled_members = 0;
  for (int n = 1; n <= 7; ++n) {
    int bitpos[7][7] = {};
    int bit = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++bit) bitpos[i][j] = bit;
    const int nbits = n * (n - 1) / 2;
    std::uint64_t members = 0;
    for (std::uint64_t mask = 0; mask < (1ull << nbits); ++mask) {
      std::vector<std::uint16_t> rows(n, 0);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (mask >> bitpos[i][j] & 1) {
            rows[i] |= static_cast<std::uint16_t>(1u << j);
            rows[j] |= static_cast<std::uint16_t>(1u << i);
          }
      bool member = true;
      for (int x = 0; x < n && member; ++x)
        for (int y = x + 1; y < n && member; ++y)
          for (int z = y + 1; z < n && member; ++z)
            for (int w = z + 1; w < n && member; ++w)
              if (bad[static_cast<std::size_t>(sub_mask4(rows, x, y, z, w))]) member = false;
      if (!member) continue;
      ++members;
      if (!pseudo_split_checks(rows, std::nullopt)) return false;
    }
    if (members != costar::count_labelled(cls, n))
      return fail("labelled member count disagrees with count_labelled at n=" +
                  std::to_string(n));
    labelled_members += members;
  }

  // Representatives per isomorphism class, grown one vertex at a time: a
  // member minus its last vertex is a member, so extending every smaller
  // representative by one vertex over all neighbourhood subsets reaches
  // every class.
  std::vector<std::vector<std::vector<std::uint16_t>>> reps(10);
  reps[1] = {{0}};
  for (int n = 2; n <= 9; ++n) {
    std::map<std::string, std::vector<std::size_t>> buckets;
    for (const auto& parent : reps[n - 1])
      for (std::uint32_t sub = 0; sub < (1u << (n - 1)); ++sub) {
        bool member = true;
        for (int x = 0; x < n - 1 && member; ++x)
          for (int y = x + 1; y < n - 1 && member; ++y)
            for (int z = y + 1; z < n - 1 && member; ++z) {
              int m = 0;
              m |= (parent[x] >> y & 1) << 0;
              m |= (parent[x] >> z & 1) << 1;
              m |= (sub >> x & 1) << 2;
              m |= (parent[y] >> z & 1) << 3;
              m |= (sub >> y & 1) << 4;
              m |= (sub >> z & 1) << 5;
              if (bad[static_cast<std::size_t>(m)]) member = false;
            }
        if (!member) continue;
        std::vector<std::uint16_t> child = parent;
        for (int j = 0; j < n - 1; ++j)
          if (sub >> j & 1) child[j] |= static_cast<std::uint16_t>(1u << (n - 1));
        child.push_back(static_cast<std::uint16_t>(sub));
        auto& bucket = buckets[iso_key(child)];
        bool dup = false;
        for (std::size_t idx : bucket)
          if (isomorphic(child, reps[n][idx])) {
            dup = true;
            break;
          }
        if (!dup) {
          bucket.push_back(reps[n].size());
          reps[n].push_back(std::move(child));
        }
      }
  }
  std::mt19937 rng(0xC057A202u);
  for (int n = 8; n <= 9; ++n)
    for (const auto& rep : reps[n]) {
      const std::optional<int> least = costar::brute_force_min_blocks(graph_from_rows(rep), 0, 3);
      if (!least) return fail("brute force found no three-block partition for a member");
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      for (int lab = 0; lab < 6; ++lab) {
        if (lab > 0) std::shuffle(perm.begin(), perm.end(), rng);
        if (!pseudo_split_checks(permuted(rep, perm), *least)) return false;
      }
    }
  g_note = std::to_string(labelled_members) + " labelled members up to n=7, " +
           std::to_string(reps[8].size()) + "+" + std::to_string(reps[9].size()) +
           " classes at n=8,9";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 3: 200 random members of the four matching/co-matching classes
// with multiplicities up to three on up to twelve vertices; the cochromatic
// split stays within both the documented ceiling and eighteen blocks, with
// kinds and cover checked directly.

bool criterion3() {
  std::mt19937 rng(0xC057A203u);
  const std::array<std::pair<int, int>, 4> shapes{{{2, 2}, {2, 3}, {3, 2}, {3, 3}}};
  for (int trial = 0; trial < 200; ++trial) {
    const auto [n, m] = shapes[static_cast<std::size_t>(trial % 4)];
    const int nv = 4 + static_cast<int>(rng() % 9);
    const std::vector<costar::PatternSpec> avoid{{costar::PatternFamily::matching, n, 1},
                                                 {costar::PatternFamily::co_matching, m, 1}};
    const Graph g = gen::random_member(rng, nv, 0.5, avoid);
    const costar::LabelledPartition p = costar::cochromatic_matching(g, n, m);
    if (p.block_count() > 18) return fail("more than eighteen blocks");
    if (static_cast<std::uint64_t>(p.block_count()) > costar::z_bound(n, m))
      return fail("block count exceeds the documented ceiling");
    if (!block_kinds_ok(g, p)) return fail("a block kind is violated");
    if (!blocks_cover(g, p)) return fail("blocks do not cover the host");
  }
  g_note = "200 random hosts across four multiplicity shapes";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 4: every labelled host on at most nine vertices avoiding the
// two-edge matching, the four-vertex path, and the four-cycle passes
// matching_partition plus the verifier at k=1 (member counts cross-checked
// against count_labelled up to n=7), and 200 random members of the
// multiplicity-three family on up to twelve vertices do the same.

bool criterion4() {
  const auto bad = four_vertex_table(true);
  std::array<std::uint64_t, 10> counts{};
  std::vector<std::uint16_t> rows;
  rows.reserve(9);
  std::function<bool()> visit = [&]() -> bool {
    const int n = static_cast<int>(rows.size());
    ++counts[static_cast<std::size_t>(n)];
    const Graph g = graph_from_rows(rows);
    const costar::LabelledPartition p = costar::matching_partition(g, 2);
    if (!costar::verify_partition(g, p, 1).verdict)
      return fail("verifier rejected a partition at n=" + std::to_string(n));
    if (n == 9) return true;
    for (std::uint32_t sub = 0; sub < (1u << n); ++sub) {
      bool ok = true;
      for (int x = 0; x < n && ok; ++x)
        for (int y = x + 1; y < n && ok; ++y)
          for (int z = y + 1; z < n && ok; ++z) {
            int m = 0;
            m |= (rows[x] >> y & 1) << 0;
            m |= (rows[x] >> z & 1) << 1;
            m |= (sub >> x & 1) << 2;
            m |= (rows[y] >> z & 1) << 3;
            m |= (sub >> y & 1) << 4;
            m |= (sub >> z & 1) << 5;
            if (bad[static_cast<std::size_t>(m)]) ok = false;
          }
      if (!ok) continue;
      for (int j = 0; j < n; ++j)
        if (sub >> j & 1) rows[static_cast<std::size_t>(j)] |= static_cast<std::uint16_t>(1u << n);
      rows.push_back(static_cast<std::uint16_t>(sub));
      const bool good = visit();
      rows.pop_back();
      for (int j = 0; j < n; ++j)
        rows[static_cast<std::size_t>(j)] &= static_cast<std::uint16_t>(~(1u << n));
      if (!good) return false;
    }
    return true;
  };
  rows.assign(1, 0);
  if (!visit()) return false;
  const auto specs2 = gen::star_family_specs(2, 1);
  for (int n = 1; n <= 7; ++n)
    if (counts[static_cast<std::size_t>(n)] != costar::count_labelled(specs2, n))
      return fail("member count disagrees with count_labelled at n=" + std::to_string(n));

  std::mt19937 rng(0xC057A204u);
  const auto avoid = gen::star_family_specs(3, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int nv = 5 + static_cast<int>(rng() % 8);
    const Graph g = gen::random_member(rng, nv, 0.5, avoid);
    const costar::LabelledPartition p = costar::matching_partition(g, 3);
    if (!costar::verify_partition(g, p, 1).verdict)
      return fail("verifier rejected a random multiplicity-three member");
  }
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  g_note = std::to_string(total) + " labelled members up to n=9, plus 200 random hosts";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 5: on random members of the four-way star-free class (all
// multiplicities three, unit stars) the chain template satisfies the four
// per-index degree conditions, and after removing the marked vertices the
// two-sided slack conditions hold; every count is recomputed here by direct
// adjacency loops.

bool template_conditions_ok(const BipartiteGraph& b, const costar::DTemplate& t,
                            std::string& why) {
  const int z = t.z();
  const long long kr = static_cast<long long>(t.params.k) * t.params.r;
  const auto bags_a = [&](int i) -> const std::vector<int>& {
    return t.bags_a[static_cast<std::size_t>(i)];
  };
  const auto bags_b = [&](int i) -> const std::vector<int>& {
    return t.bags_b[static_cast<std::size_t>(i)];
  };
  for (int i = 0; i < z; ++i) {
    {  // non-neighbours of A_i in bags two past it stay within d
      std::vector<int> far;
      for (int h = i + 2; h < z; ++h) far.insert(far.end(), bags_b(h).begin(), bags_b(h).end());
      for (int v : bags_a(i)) {
        long long non = 0;
        for (int u : far) non += !b.has_edge(v, u);
        if (non > t.d) {
          why = "first degree condition fails at bag " + std::to_string(i);
          return false;
        }
      }
    }
    {  // neighbours of B_i beyond the earlier bags and the candidate set
      std::vector<char> skip(static_cast<std::size_t>(b.a_size()), 0);
      for (int u : t.plus_a[static_cast<std::size_t>(i)]) skip[static_cast<std::size_t>(u)] = 1;
      std::vector<int> beyond;
      for (int h = i; h < z; ++h)
        for (int u : bags_a(h))
          if (!skip[static_cast<std::size_t>(u)]) beyond.push_back(u);
      for (int v : bags_b(i)) {
        long long nb = 0;
        for (int u : beyond) nb += b.has_edge(u, v);
        if (nb > kr) {
          why = "second degree condition fails at bag " + std::to_string(i);
          return false;
        }
      }
    }
    {  // neighbours of B_i in strictly later A-bags stay within d
      std::vector<int> later;
      for (int h = i + 1; h < z; ++h) later.insert(later.end(), bags_a(h).begin(), bags_a(h).end());
      for (int v : bags_b(i)) {
        long long nb = 0;
        for (int u : later) nb += b.has_edge(u, v);
        if (nb > t.d) {
          why = "third degree condition fails at bag " + std::to_string(i);
          return false;
        }
      }
    }
    {  // non-neighbours of A_i beyond bag i and the next candidate set
      std::vector<char> skip(static_cast<std::size_t>(b.b_size()), 0);
      if (i + 1 < z)
        for (int u : t.plus_b[static_cast<std::size_t>(i + 1)]) skip[static_cast<std::size_t>(u)] = 1;
      std::vector<int> beyond;
      for (int h = i + 1; h < z; ++h)
        for (int u : bags_b(h))
          if (!skip[static_cast<std::size_t>(u)]) beyond.push_back(u);
      for (int v : bags_a(i)) {
        long long non = 0;
        for (int u : beyond) non += !b.has_edge(v, u);
        if (non > kr) {
          why = "fourth degree condition fails at bag " + std::to_string(i);
          return false;
        }
      }
    }
  }
  // Slack-chain conditions on the unmarked remainder.
  std::vector<char> ma(static_cast<std::size_t>(b.a_size()), 0);
  std::vector<char> mb(static_cast<std::size_t>(b.b_size()), 0);
  for (int v : t.marked_a) ma[static_cast<std::size_t>(v)] = 1;
  for (int v : t.marked_b) mb[static_cast<std::size_t>(v)] = 1;
  for (int i = 0; i < z; ++i) {
    std::vector<int> later_b, earlier_b;
    for (int h = i + 2; h < z; ++h)
      for (int u : bags_b(h))
        if (!mb[static_cast<std::size_t>(u)]) later_b.push_back(u);
    for (int h = 0; h < i; ++h)
      for (int u : bags_b(h))
        if (!mb[static_cast<std::size_t>(u)]) earlier_b.push_back(u);
    for (int v : bags_a(i)) {
      if (ma[static_cast<std::size_t>(v)]) continue;
      long long non = 0, nb = 0;
      for (int u : later_b) non += !b.has_edge(v, u);
      for (int u : earlier_b) nb += b.has_edge(v, u);
      if (non > t.d) {
        why = "a kept top vertex misses too many later bottom vertices";
        return false;
      }
      if (nb > t.d) {
        why = "a kept top vertex keeps too many earlier bottom neighbours";
        return false;
      }
    }
    std::vector<int> far_a, later_a;
    for (int h = 0; h + 2 <= i; ++h)
      for (int u : bags_a(h))
        if (!ma[static_cast<std::size_t>(u)]) far_a.push_back(u);
    for (int h = i + 1; h < z; ++h)
      for (int u : bags_a(h))
        if (!ma[static_cast<std::size_t>(u)]) later_a.push_back(u);
    for (int v : bags_b(i)) {
      if (mb[static_cast<std::size_t>(v)]) continue;
      long long non = 0, nb = 0;
      for (int u : far_a) non += !b.has_edge(u, v);
      for (int u : later_a) nb += b.has_edge(u, v);
      if (non > t.d) {
        why = "a kept bottom vertex misses too many far-earlier top vertices";
        return false;
      }
      if (nb > t.d) {
        why = "a kept bottom vertex keeps too many later top neighbours";
        return false;
      }
    }
  }
  return true;
}

bool criterion5() {
  std::mt19937 rng(0xC057A205u);
  const costar::StarParams sp(3, 3, 3, 3, 1);
  const auto avoid = gen::bip_star_specs(3, 3, 3, 3, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const int a = 6 + static_cast<int>(rng() % 9);
    const int b = 6 + static_cast<int>(rng() % 9);
    const BipartiteGraph host = gen::random_bipartite_member(rng, a, b, 0.3, avoid);
    const costar::DTemplate t = costar::d_template_procedure(host, sp);
    if (t.d != sp.d()) return fail("template slack disagrees with the parameters");
    std::string why;
    if (!template_conditions_ok(host, t, why))
      return fail(why + " (trial " + std::to_string(trial) + ")");
  }
  g_note = "100 random hosts up to 14+14, all conditions recounted directly";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 6: the marked top vertices of each template split into at most
// 3nkd^2 classes, the classes exactly cover the marked set, and each class
// spans no twin star of doubled slack against the whole bottom side.

bool criterion6() {
  std::mt19937 rng(0xC057A206u);
  const costar::StarParams sp(3, 3, 3, 3, 1);
  const auto avoid = gen::bip_star_specs(3, 3, 3, 3, 1);
  const std::uint64_t cap = costar::marked_class_bound(sp);
  const std::uint64_t direct = 3ull * static_cast<std::uint64_t>(sp.n()) *
                               static_cast<std::uint64_t>(sp.k) *
                               static_cast<std::uint64_t>(sp.d()) *
                               static_cast<std::uint64_t>(sp.d());
  if (cap != direct) return fail("class ceiling is not 3nkd^2");
  // A unit covering multiplicity shrinks the slack to d = 3, so on hosts of
  // this size the template actually marks vertices; the default multiplicity
  // keeps the ceiling arithmetic honest at the larger d.
  const costar::StarParams tight(3, 3, 3, 3, 1, 1);
  std::uint64_t classes_seen = 0, marked_seen = 0;
  // Partitions one side's marked set and checks the ceiling, the exact cover,
  // and twin-star-freeness of every class against the full opposite side.
  // `host` is oriented so the marked side is on top.
  const auto side_ok = [&](const BipartiteGraph& host, const std::vector<costar::Trace>& traces,
                           std::vector<int> marked, std::uint64_t ceiling, int d) -> bool {
    const auto classes = costar::partition_marked(traces, ceiling);
    if (classes.size() > ceiling) return fail("more classes than the ceiling allows");
    std::vector<int> covered;
    for (const auto& cls : classes) covered.insert(covered.end(), cls.begin(), cls.end());
    std::sort(covered.begin(), covered.end());
    std::sort(marked.begin(), marked.end());
    if (covered != marked) return fail("classes do not exactly cover the marked set");
    std::vector<int> all_b(static_cast<std::size_t>(host.b_size()));
    std::iota(all_b.begin(), all_b.end(), 0);
    for (const auto& cls : classes) {
      const BipartiteGraph span = host.induced(cls, all_b);
      if (!costar::is_twin_star_free(span, 2 * d))
        return fail("a marked class spans a twin star at doubled slack");
      ++classes_seen;
    }
    marked_seen += marked.size();
    return true;
  };
  const auto host_ok = [&](const BipartiteGraph& host, const costar::StarParams& params) -> bool {
    const std::uint64_t ceiling = costar::marked_class_bound(params);
    const costar::DTemplate t = costar::d_template_procedure(host, params);
    return side_ok(host, costar::marked_traces_a(host, t), t.marked_a, ceiling, t.d) &&
           side_ok(host.swapped(), costar::marked_traces_b(host, t), t.marked_b, ceiling, t.d);
  };
  for (int trial = 0; trial < 100; ++trial) {
    const int a = 6 + static_cast<int>(rng() % 9);
    const int b = 6 + static_cast<int>(rng() % 9);
    const BipartiteGraph host = gen::random_bipartite_member(rng, a, b, 0.3, avoid);
    for (const costar::StarParams& params : {sp, tight})
      if (!host_ok(host, params)) return false;
  }
  // Random members of this class are mostly short chains, where nothing ever
  // violates the slack.  Staircase hosts with a few far off-diagonal flips
  // stay in the class (nested rows leave no room for a triple matching on
  // either layer) yet produce long chains whose stray edges do get marked.
  const auto in_class = [&](const BipartiteGraph& g) {
    for (const auto& spec : avoid)
      if (costar::find_induced_bipartite(g, spec)) return false;
    return true;
  };
  int stair_hosts = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int m = 14 + static_cast<int>(rng() % 9);
    BipartiteGraph g(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) g.add_edge(i, j);
    int placed = 0;
    for (int attempt = 0; attempt < 30 && placed < 3; ++attempt) {
      const int i = static_cast<int>(rng() % m), j = static_cast<int>(rng() % m);
      if (std::abs(i - j) < m / 3) continue;
      const bool had = g.has_edge(i, j);
      if (had) g.remove_edge(i, j); else g.add_edge(i, j);
      if (in_class(g)) ++placed;
      else if (had) g.add_edge(i, j);
      else g.remove_edge(i, j);
    }
    ++stair_hosts;
    if (!host_ok(g, tight)) return false;
  }
  g_note = std::to_string(classes_seen) + " classes covering " + std::to_string(marked_seen) +
           " marked vertices across " + std::to_string(100 + stair_hosts) + " hosts";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 7: random members of the four-way star-free class at unit and
// doubled star size are partitioned by the full pipeline; the verifier
// accepts, and every top/bottom block pair is re-searched directly for both
// two-star unions.  Unit-star hosts also coincide with the matching class,
// so the matching pipeline must succeed on them too.

bool criterion7() {
  std::mt19937 rng(0xC057A207u);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 2;
    const auto avoid = gen::bip_star_specs(3, 3, 3, 3, k);
    const int a = 6 + static_cast<int>(rng() % 9);
    const int b = 6 + static_cast<int>(rng() % 9);
    const BipartiteGraph host = gen::random_bipartite_member(rng, a, b, 0.3, avoid);
    const costar::StarParams sp(3, 3, 3, 3, k);
    const costar::LabelledPartition p = costar::bipartite_star_partition(host, sp);
    if (!costar::verify_partition(host, p, k).verdict)
      return fail("verifier rejected a star partition (k=" + std::to_string(k) + ")");
    const costar::PatternSpec two_lambda{costar::PatternFamily::lambda, 2, 2 * k - 1};
    const costar::PatternSpec two_up{costar::PatternFamily::up, 2, 2 * k - 1};
    for (const costar::Block& bi : p.blocks)
      for (const costar::Block& bj : p.blocks) {
        if (bi.side != costar::Side::top || bj.side != costar::Side::bottom) continue;
        const BipartiteGraph h = host.induced(bi.vertices, bj.vertices);
        if (costar::find_induced_bipartite(h, two_lambda) ||
            costar::find_induced_bipartite(h, two_up))
          return fail("a block pair spans a two-star union");
      }
    if (k == 1) {
      const costar::LabelledPartition mp = costar::bipartite_matching_partition(host, 3, 3);
      if (!costar::verify_partition(host, mp, 1).verdict)
        return fail("matching pipeline rejected a unit-star host");
    }
  }
  g_note = "100 random hosts up to 14+14, star sizes one and two";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 8: on every bipartite host with at most ten vertices and no twin
// star of the given size (sizes one and two), the codec round-trips exactly,
// the token total respects the length law, and every backward difference is
// smaller than the star size.  Membership is decided by a direct private-
// neighbour count over top pairs and cross-checked against the detector.

bool criterion8() {
  std::uint64_t members1 = 0, members2 = 0, masks = 0;
  for (int a = 0; a <= 10; ++a)
    for (int b = 0; a + b <= 10; ++b) {
      const int nbits = a * b;
      const std::uint32_t bmask = b == 0 ? 0u : (1u << b) - 1u;
      std::vector<std::array<int, 2>> tpairs;
      for (int x = 0; x < a; ++x)
        for (int y = x + 1; y < a; ++y) tpairs.push_back({x, y});
      for (std::uint64_t mask = 0; mask < (1ull << nbits); ++mask) {
        ++masks;
        std::uint32_t rows[10] = {};
        for (int i = 0; i < a; ++i)
          rows[i] = static_cast<std::uint32_t>(mask >> (i * b)) & bmask;
        int widest = 0;  // largest over top pairs of the smaller private side
        for (const auto& pr : tpairs) {
          const int px = std::popcount(rows[pr[0]] & ~rows[pr[1]]);
          const int py = std::popcount(rows[pr[1]] & ~rows[pr[0]]);
          widest = std::max(widest, std::min(px, py));
        }
        std::optional<BipartiteGraph> built;
        const auto host = [&]() -> const BipartiteGraph& {
          if (!built) built = bip_from_rows(a, b, rows);
          return *built;
        };
        for (int s = 1; s <= 2; ++s) {
          if (widest >= s) {
            if ((mask + static_cast<std::uint64_t>(s)) % 1000003 == 0 &&
                costar::is_twin_star_free(host(), s))
              return fail("pair count rejects a host the detector calls free");
            continue;
          }
          if (!costar::is_twin_star_free(host(), s))
            return fail("pair count accepts a host the detector rejects");
          std::vector<std::string> findings;
          const costar::Code c = costar::encode(host(), s, &findings);
          if (!findings.empty()) return fail("encode reported findings on a member");
          if (costar::token_count(c) > 2ull * static_cast<std::uint64_t>(s) *
                                           static_cast<std::uint64_t>(a + b))
            return fail("token count breaks the length law");
          if (static_cast<int>(c.records.size()) != a)
            return fail("record count differs from the top side size");
          std::uint32_t prev = 0;
          for (std::size_t r = 0; r < c.records.size(); ++r) {
            const std::uint32_t row = rows[c.records[r].vertex];
            if (r > 0 && std::popcount(prev & ~row) >= s)
              return fail("a backward difference reached the star size");
            std::uint32_t diff = 0;
            for (int u : c.records[r].diff) diff |= 1u << u;
            if (diff != (prev ^ row)) return fail("a difference set mismatches the adjacency");
            prev = row;
          }
          const BipartiteGraph back = costar::decode(c);
          if (back.a_size() != a || back.b_size() != b)
            return fail("decode changed the side sizes");
          for (int i = 0; i < a; ++i)
            for (int j = 0; j < b; ++j)
              if (back.has_edge(i, j) != ((rows[i] >> j & 1) != 0))
                return fail("decode does not invert encode");
          (s == 1 ? members1 : members2) += 1;
        }
      }
    }
  g_note = std::to_string(members1) + " members at size one, " + std::to_string(members2) +
           " at size two, " + std::to_string(masks) + " masks";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 9: labelled member counts of the multiplicity-two and
// multiplicity-three unit-star families up to n=7, frozen after their first
// computation, and the growth ratio log2(count) / (n log2 n) stays below the
// recorded constants.

bool criterion9() {
  const std::array<std::uint64_t, 7> expect2{1, 2, 8, 46, 332, 2874, 29024};
  const std::array<std::uint64_t, 7> expect3{1, 2, 8, 64, 1024, 32378, 1943642};
  const double cap2 = 0.80;   // observed peak 0.7544 at n=7
  const double cap3 = 1.10;   // observed peak 1.0630 at n=7
  const auto f2 = gen::star_family_specs(2, 1);
  const auto f3 = gen::star_family_specs(3, 1);
  for (int n = 1; n <= 7; ++n) {
    const std::uint64_t c2 = costar::count_labelled(f2, n);
    const std::uint64_t c3 = costar::count_labelled(f3, n);
    if (c2 != expect2[static_cast<std::size_t>(n - 1)])
      return fail("multiplicity-two count changed at n=" + std::to_string(n));
    if (c3 != expect3[static_cast<std::size_t>(n - 1)])
      return fail("multiplicity-three count changed at n=" + std::to_string(n));
    if (n >= 2) {
      const double denom = n * std::log2(static_cast<double>(n));
      if (std::log2(static_cast<double>(c2)) / denom > cap2)
        return fail("multiplicity-two growth ratio exceeds the recorded constant");
      if (std::log2(static_cast<double>(c3)) / denom > cap3)
        return fail("multiplicity-three growth ratio exceeds the recorded constant");
    }
  }
  g_note = "growth ratios peak at 0.755 and 1.063 against caps 0.80 and 1.10";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 10: a disjoint union of T^2+1 edges admits no T-block partition
// with clique/independent kinds that the verifier accepts at k=1, for T in
// {1, 2}; every kind assignment over every split is tried.

bool criterion10() {
  using costar::BlockKind;
  std::uint64_t examined = 0;
  for (int t = 1; t <= 2; ++t) {
    const int edges = t * t + 1;
    Graph g(2 * edges);
    for (int e = 0; e < edges; ++e) g.add_edge(2 * e, 2 * e + 1);
    const int n = g.n();
    if (t == 1) {
      std::vector<int> all(static_cast<std::size_t>(n));
      std::iota(all.begin(), all.end(), 0);
      for (BlockKind kind : {BlockKind::clique, BlockKind::independent}) {
        costar::LabelledPartition p;
        p.blocks.push_back({kind, costar::Side::general, all});
        if (costar::verify_partition(g, p, 1).verdict)
          return fail("a single-block partition of two disjoint edges was accepted");
        ++examined;
      }
    } else {
      for (std::uint32_t split = 0; split < (1u << (n - 1)); ++split) {
        std::vector<int> b0{0}, b1;
        for (int v = 1; v < n; ++v) ((split >> (v - 1)) & 1 ? b1 : b0).push_back(v);
        if (b1.empty()) continue;
        for (BlockKind k0 : {BlockKind::clique, BlockKind::independent})
          for (BlockKind k1 : {BlockKind::clique, BlockKind::independent}) {
            costar::LabelledPartition p;
            p.blocks.push_back({k0, costar::Side::general, b0});
            p.blocks.push_back({k1, costar::Side::general, b1});
            if (costar::verify_partition(g, p, 1).verdict)
              return fail("a two-block partition of five disjoint edges was accepted");
            ++examined;
          }
      }
    }
  }
  g_note = std::to_string(examined) + " candidate partitions, all rejected";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..10>\n");
    return 2;
  }
  const int crit = std::atoi(argv[1]);
  bool ok = false;
  try {
    switch (crit) {
      case 1: ok = criterion1(); break;
      case 2: ok = criterion2(); break;
      case 3: ok = criterion3(); break;
      case 4: ok = criterion4(); break;
      case 5: ok = criterion5(); break;
      case 6: ok = criterion6(); break;
      case 7: ok = criterion7(); break;
      case 8: ok = criterion8(); break;
      case 9: ok = criterion9(); break;
      case 10: ok = criterion10(); break;
      default:
        std::fprintf(stderr, "usage: acceptance <criterion 1..10>\n");
        return 2;
    }
  } catch (const std::exception& e) {
    fail(std::string("unexpected exception: ") + e.what());
    ok = false;
  }
  if (ok && !g_note.empty())
    std::printf("criterion %d: PASS (%s)\n", crit, g_note.c_str());
  else if (ok)
    std::printf("criterion %d: PASS\n", crit);
  else
    std::printf("criterion %d: FAIL%s%s\n", crit, g_fail.empty() ? "" : " - ", g_fail.c_str());
  return ok ? 0 : 1;
}
