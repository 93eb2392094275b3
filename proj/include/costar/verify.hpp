#pragma once

// Independent checking of labelled partitions against their declared
// guarantees, a brute-force oracle for minimum block counts, and labelled
// enumeration of small hereditary classes.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "partition.hpp"
#include "patterns.hpp"

namespace costar {

struct BlockFailure {
  int block = 0;
  std::string kind;
  std::vector<int> witness;
};

struct PairFailure {
  int i = 0;
  int j = 0;
  std::vector<int> witness;
};

struct VerifyReport {
  bool verdict = true;
  std::vector<BlockFailure> block_failures;
  std::vector<PairFailure> pair_failures;
};

inline void to_json(nlohmann::json& j, const BlockFailure& f) {
  j = nlohmann::json{
      {"block", f.block}, {"kind", f.kind}, {"witness", f.witness}};
}

inline void to_json(nlohmann::json& j, const PairFailure& f) {
  j = nlohmann::json{{"i", f.i}, {"j", f.j}, {"witness", f.witness}};
}

inline void to_json(nlohmann::json& j, const VerifyReport& r) {
  j = nlohmann::json{{"verdict", r.verdict},
                     {"block_failures", r.block_failures},
                     {"pair_failures", r.pair_failures}};
}

namespace detail {

/// Offending pair inside a block whose kind promises all or no edges.
inline std::optional<std::vector<int>> block_kind_witness(
    const Graph& g, const Block& blk) {
  if (blk.kind == BlockKind::unconstrained) return std::nullopt;
  for (std::size_t x = 0; x < blk.vertices.size(); ++x)
    for (std::size_t y = x + 1; y < blk.vertices.size(); ++y) {
      const bool edge = g.has_edge(blk.vertices[x], blk.vertices[y]);
      if (edge == (blk.kind == BlockKind::independent))
        return std::vector<int>{blk.vertices[x], blk.vertices[y]};
    }
  return std::nullopt;
}

inline std::vector<int> merge_witness(const std::vector<int>& top_ids,
                                      const std::vector<int>& bottom_ids,
                                      const BipWitness& w) {
  std::vector<int> out;
  out.reserve(w.a.size() + w.b.size());
  for (int x : w.a) out.push_back(top_ids[x]);
  for (int y : w.b) out.push_back(bottom_ids[y]);
  return out;
}

}  // namespace detail

/// Check a partition of a plain graph: every block must satisfy its kind,
/// every declared guarantee must hold on the bipartite graph read from
/// block i (top) to block j (bottom), and every undeclared pair of distinct
/// blocks must drop both two-star orientations at size 2k - 1.
inline VerifyReport verify_partition(const Graph& g,
                                     const LabelledPartition& p, int k) {
  if (k < 1) throw argument_error("verify_partition: k must be positive");
  p.block_of(g.n());  // throws argument_error unless p covers V(g) disjointly

  VerifyReport report;
  for (int i = 0; i < static_cast<int>(p.blocks.size()); ++i) {
    if (auto w = detail::block_kind_witness(g, p.blocks[i])) {
      report.block_failures.push_back(
          {i, to_string(p.blocks[i].kind), std::move(*w)});
    }
  }

  std::vector<std::pair<std::pair<int, int>, PatternSpec>> checks;
  std::vector<char> tagged(p.blocks.size() * p.blocks.size(), 0);
  for (const Guarantee& gu : p.guarantees) {
    if (gu.i < 0 || gu.j < 0 ||
        gu.i >= static_cast<int>(p.blocks.size()) ||
        gu.j >= static_cast<int>(p.blocks.size()) || gu.i == gu.j)
      throw argument_error("verify_partition: guarantee names a bad pair");
    checks.push_back({{gu.i, gu.j}, parse_pattern(gu.pattern)});
    tagged[gu.i * p.blocks.size() + gu.j] = 1;
    tagged[gu.j * p.blocks.size() + gu.i] = 1;
  }
  for (int i = 0; i < static_cast<int>(p.blocks.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(p.blocks.size()); ++j)
      if (!tagged[i * p.blocks.size() + j]) {
        checks.push_back({{i, j}, {PatternFamily::lambda, 2, 2 * k - 1}});
        checks.push_back({{i, j}, {PatternFamily::up, 2, 2 * k - 1}});
      }

  for (const auto& [pair, spec] : checks) {
    const std::vector<int>& vi = p.blocks[pair.first].vertices;
    const std::vector<int>& vj = p.blocks[pair.second].vertices;
    const BipartiteGraph host = BipartiteGraph::from_graph(g, vi, vj);
    if (auto w = find_induced_bipartite(host, spec)) {
      report.pair_failures.push_back(
          {pair.first, pair.second, detail::merge_witness(vi, vj, *w)});
    }
  }
  report.verdict =
      report.block_failures.empty() && report.pair_failures.empty();
  return report;
}

/// Check a partition of a bipartite graph.  Top and bottom blocks must cover
/// their sides disjointly; guarantees must point from a top block to a
/// bottom block; undeclared (top, bottom) pairs must drop both two-star
/// orientations at size 2k - 1.  Pairs on a common side have no edges, so
/// nothing is checked for them; a clique kind on a block of two or more
/// vertices fails for the same reason.
inline VerifyReport verify_partition(const BipartiteGraph& b,
                                     const LabelledPartition& p, int k) {
  if (k < 1) throw argument_error("verify_partition: k must be positive");
  std::vector<char> seen_a(b.a_size(), 0), seen_b(b.b_size(), 0);
  for (const Block& blk : p.blocks) {
    if (blk.side == Side::general)
      throw argument_error(
          "verify_partition: bipartite blocks must carry a side");
    std::vector<char>& seen = blk.side == Side::top ? seen_a : seen_b;
    const int limit = blk.side == Side::top ? b.a_size() : b.b_size();
    for (int v : blk.vertices) {
      if (v < 0 || v >= limit)
        throw argument_error("verify_partition: vertex out of range");
      if (seen[v]++)
        throw argument_error("verify_partition: vertex in two blocks");
    }
  }
  for (char c : seen_a)
    if (!c) throw argument_error("verify_partition: top side not covered");
  for (char c : seen_b)
    if (!c) throw argument_error("verify_partition: bottom side not covered");

  VerifyReport report;
  for (int i = 0; i < static_cast<int>(p.blocks.size()); ++i) {
    const Block& blk = p.blocks[i];
    if (blk.kind == BlockKind::clique && blk.vertices.size() > 1)
      report.block_failures.push_back(
          {i, to_string(blk.kind), {blk.vertices[0], blk.vertices[1]}});
  }

  std::vector<std::pair<std::pair<int, int>, PatternSpec>> checks;
  std::vector<char> tagged(p.blocks.size() * p.blocks.size(), 0);
  for (const Guarantee& gu : p.guarantees) {
    if (gu.i < 0 || gu.j < 0 ||
        gu.i >= static_cast<int>(p.blocks.size()) ||
        gu.j >= static_cast<int>(p.blocks.size()))
      throw argument_error("verify_partition: guarantee names a bad pair");
    if (p.blocks[gu.i].side != Side::top ||
        p.blocks[gu.j].side != Side::bottom)
      throw argument_error(
          "verify_partition: guarantees must point from a top block to a "
          "bottom block");
    checks.push_back({{gu.i, gu.j}, parse_pattern(gu.pattern)});
    tagged[gu.i * p.blocks.size() + gu.j] = 1;
  }
  for (int i = 0; i < static_cast<int>(p.blocks.size()); ++i) {
    if (p.blocks[i].side != Side::top) continue;
    for (int j = 0; j < static_cast<int>(p.blocks.size()); ++j) {
      if (p.blocks[j].side != Side::bottom) continue;
      if (tagged[i * p.blocks.size() + j]) continue;
      checks.push_back({{i, j}, {PatternFamily::lambda, 2, 2 * k - 1}});
      checks.push_back({{i, j}, {PatternFamily::up, 2, 2 * k - 1}});
    }
  }
  for (const auto& [pair, spec] : checks) {
    const std::vector<int>& vi = p.blocks[pair.first].vertices;
    const std::vector<int>& vj = p.blocks[pair.second].vertices;
    const BipartiteGraph host = b.induced(vi, vj);
    if (auto w = find_induced_bipartite(host, spec)) {
      report.pair_failures.push_back(
          {pair.first, pair.second, detail::merge_witness(vi, vj, *w)});
    }
  }
  report.verdict =
      report.block_failures.empty() && report.pair_failures.empty();
  return report;
}

namespace detail {

/// Does the current complete assignment satisfy the pairwise star-freeness
/// requirement at size 2k - 1 (skipped when k = 0)?
inline bool blocks_pairwise_free(const Graph& g,
                                 const std::vector<std::vector<int>>& blocks,
                                 int k) {
  if (k == 0) return true;
  const PatternSpec lam{PatternFamily::lambda, 2, 2 * k - 1};
  const PatternSpec up{PatternFamily::up, 2, 2 * k - 1};
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      const BipartiteGraph host =
          BipartiteGraph::from_graph(g, blocks[i], blocks[j]);
      if (find_induced_bipartite(host, lam)) return false;
      if (find_induced_bipartite(host, up)) return false;
    }
  return true;
}

struct MinBlocksSearch {
  const Graph& g;
  int k = 0;
  int best = 0;  // strictly improve below this
  bool found = false;
  std::vector<std::vector<int>> blocks;
  std::vector<int> kind;  // 0 undecided singleton, 1 clique, 2 independent

  void dfs(int v) {
    if (static_cast<int>(blocks.size()) >= best) return;
    if (v == g.n()) {
      if (blocks_pairwise_free(g, blocks, k)) {
        best = static_cast<int>(blocks.size());
        found = true;
      }
      return;
    }
    for (int i = 0; i < static_cast<int>(blocks.size()); ++i) {
      bool all = true, none = true;
      for (int u : blocks[i]) (g.has_edge(u, v) ? none : all) = false;
      const int old = kind[i];
      int next = old;
      if (old == 0)
        next = all ? 1 : 2;
      else if ((old == 1 && !all) || (old == 2 && !none))
        continue;
      kind[i] = next;
      blocks[i].push_back(v);
      dfs(v + 1);
      blocks[i].pop_back();
      kind[i] = old;
    }
    blocks.push_back({v});
    kind.push_back(0);
    dfs(v + 1);
    blocks.pop_back();
    kind.pop_back();
  }
};

}  // namespace detail

/// Minimum number of blocks in a partition into cliques and independent
/// sets whose every pair drops both two-star orientations at size 2k - 1
/// (k = 0 drops the pairwise requirement: pure clique/independent cover).
/// Returns nullopt when no partition with at most cap blocks exists.
inline std::optional<int> brute_force_min_blocks(const Graph& g, int k,
                                                 int cap, int max_n = 10) {
  if (k < 0) throw argument_error("brute_force_min_blocks: k must be >= 0");
  if (cap < 1) throw argument_error("brute_force_min_blocks: cap must be >= 1");
  if (g.n() > max_n)
    throw size_error(
        "brute_force_min_blocks: graph too large for exhaustive search");
  if (g.n() == 0) return 0;
  detail::MinBlocksSearch search{g, k, cap + 1, false, {}, {}};
  search.dfs(0);
  if (!search.found) return std::nullopt;
  return search.best;
}

namespace detail {

/// Count the graphs with edge bitmaps in [lo, hi) containing none of the
/// forbidden patterns.  Bit e of a bitmap is the e-th pair (0,1), (0,2), ...,
/// (0,n-1), (1,2), ... in lexicographic order.
inline std::uint64_t count_labelled_range(std::vector<PatternSpec> specs,
                                          int n, std::uint64_t lo,
                                          std::uint64_t hi) {
  // Cheapest detectors first: fewer pattern vertices fail faster.
  std::sort(specs.begin(), specs.end(),
            [](const PatternSpec& a, const PatternSpec& b) {
              const auto size = [](const PatternSpec& s) {
                return s.n * (s.k + 2);
              };
              return size(a) < size(b);
            });
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::uint64_t count = 0;
  for (std::uint64_t mask = lo; mask < hi; ++mask) {
    Graph g(n);
    for (std::size_t e = 0; e < pairs.size(); ++e)
      if (mask >> e & 1) g.add_edge(pairs[e].first, pairs[e].second);
    bool ok = true;
    for (const PatternSpec& spec : specs) {
      if (find_induced(g, spec)) {
        ok = false;
        break;
      }
    }
    count += ok;
  }
  return count;
}

}  // namespace detail

/// Number of labelled graphs on {0..n-1} containing none of the forbidden
/// patterns, by exhausting all 2^C(n,2) edge sets.
inline std::uint64_t count_labelled(const std::vector<PatternSpec>& specs,
                                    int n, int cap = 7) {
  if (n < 0) throw argument_error("count_labelled: n must be >= 0");
  if (n > cap)
    throw size_error("count_labelled: n exceeds the enumeration cap");
  const std::uint64_t total = 1ull << (n * (n - 1) / 2);
  return detail::count_labelled_range(specs, n, 0, total);
}

}  // namespace costar
