#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "costar/bits.hpp"
#include "costar/errors.hpp"

namespace costar {

/// Which part of a graph a vertex set lives in. `general` tags sets over a
/// plain graph; `top`/`bottom` name the two sides of a bipartite graph.
enum class Side { general, top, bottom };

/// A set of vertex ids (kept sorted ascending) together with its side.
struct VertexSet {
  Side side = Side::general;
  std::vector<int> ids;

  int size() const { return static_cast<int>(ids.size()); }
  bool empty() const { return ids.empty(); }
};

/// Simple undirected graph over dense ids 0..n-1 with bitset adjacency rows.
/// Construct, add edges, then treat as immutable: every algorithm below takes
/// `const Graph&` and derives new graphs instead of mutating.
class Graph {
public:
  Graph() = default;
  explicit Graph(int n) : n_(n), adj_(n, Bits(n)) {}

  static Graph with_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
  }

  int n() const { return n_; }

  void add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
      throw argument_error("edge endpoint out of range");
    if (u == v) throw argument_error("self-loops are not supported");
    adj_[u].set(v);
    adj_[v].set(u);
  }

  void remove_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
      throw argument_error("edge endpoint out of range");
    adj_[u].reset(v);
    adj_[v].reset(u);
  }

  bool has_edge(int u, int v) const { return adj_[u].test(v); }
  const Bits& neighbours(int v) const { return adj_[v]; }
  int degree(int v) const { return adj_[v].count(); }

  int edge_count() const {
    int total = 0;
    for (int v = 0; v < n_; ++v) total += degree(v);
    return total / 2;
  }

  Graph complement() const {
    Graph g(n_);
    for (int v = 0; v < n_; ++v) {
      g.adj_[v] = adj_[v].flipped();
      g.adj_[v].reset(v);
    }
    return g;
  }

  /// Induced subgraph on `ids`; vertex i of the result is ids[i].
  Graph induced(const std::vector<int>& ids) const {
    Graph g(static_cast<int>(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j)
        if (has_edge(ids[i], ids[j])) g.add_edge(static_cast<int>(i), static_cast<int>(j));
    return g;
  }

  bool is_clique(const std::vector<int>& ids) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j)
        if (!has_edge(ids[i], ids[j])) return false;
    return true;
  }
  bool is_independent(const std::vector<int>& ids) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j)
        if (has_edge(ids[i], ids[j])) return false;
    return true;
  }

  bool operator==(const Graph& o) const { return n_ == o.n_ && adj_ == o.adj_; }

private:
  int n_ = 0;
  std::vector<Bits> adj_;
};

/// Bipartite graph with separate id spaces: top side A = 0..a-1 and bottom
/// side B = 0..b-1. Adjacency is stored in both directions so either side can
/// be scanned with single bitset operations.
class BipartiteGraph {
public:
  BipartiteGraph() = default;
  BipartiteGraph(int a, int b)
      : a_(a), b_(b), rows_(a, Bits(b)), cols_(b, Bits(a)) {}

  static BipartiteGraph with_edges(int a, int b,
                                   const std::vector<std::pair<int, int>>& edges) {
    BipartiteGraph g(a, b);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
  }

  int a_size() const { return a_; }
  int b_size() const { return b_; }

  void add_edge(int a, int b) {
    if (a < 0 || b < 0 || a >= a_ || b >= b_)
      throw argument_error("edge endpoint out of range");
    rows_[a].set(b);
    cols_[b].set(a);
  }

  void remove_edge(int a, int b) {
    if (a < 0 || b < 0 || a >= a_ || b >= b_)
      throw argument_error("edge endpoint out of range");
    rows_[a].reset(b);
    cols_[b].reset(a);
  }

  bool has_edge(int a, int b) const { return rows_[a].test(b); }
  /// Neighbours of top vertex `a` as a bitset over B.
  const Bits& row(int a) const { return rows_[a]; }
  /// Neighbours of bottom vertex `b` as a bitset over A.
  const Bits& col(int b) const { return cols_[b]; }
  int deg_a(int a) const { return rows_[a].count(); }
  int deg_b(int b) const { return cols_[b].count(); }

  int edge_count() const {
    int total = 0;
    for (int a = 0; a < a_; ++a) total += deg_a(a);
    return total;
  }

  /// Bipartite complement: flips every cross pair, leaves the sides alone.
  BipartiteGraph complement() const {
    BipartiteGraph g(a_, b_);
    for (int a = 0; a < a_; ++a) g.rows_[a] = rows_[a].flipped();
    for (int b = 0; b < b_; ++b) g.cols_[b] = cols_[b].flipped();
    return g;
  }

  /// Same graph with the two sides exchanged.
  BipartiteGraph swapped() const {
    BipartiteGraph g(b_, a_);
    g.rows_ = cols_;
    g.cols_ = rows_;
    return g;
  }

  /// Induced subgraph on (as, bs); result vertex i on a side is the i-th
  /// listed id of that side.
  BipartiteGraph induced(const std::vector<int>& as, const std::vector<int>& bs) const {
    BipartiteGraph g(static_cast<int>(as.size()), static_cast<int>(bs.size()));
    for (std::size_t i = 0; i < as.size(); ++i)
      for (std::size_t j = 0; j < bs.size(); ++j)
        if (has_edge(as[i], bs[j])) g.add_edge(static_cast<int>(i), static_cast<int>(j));
    return g;
  }

  /// The cross edges of a plain graph between two disjoint vertex lists,
  /// viewed as a bipartite graph (as -> top, bs -> bottom).
  static BipartiteGraph from_graph(const Graph& g, const std::vector<int>& as,
                                   const std::vector<int>& bs) {
    BipartiteGraph r(static_cast<int>(as.size()), static_cast<int>(bs.size()));
    for (std::size_t i = 0; i < as.size(); ++i)
      for (std::size_t j = 0; j < bs.size(); ++j)
        if (g.has_edge(as[i], bs[j])) r.add_edge(static_cast<int>(i), static_cast<int>(j));
    return r;
  }

  /// Flattens to a plain graph: top ids keep their value, bottom ids are
  /// offset by a_size().
  Graph to_graph() const {
    Graph g(a_ + b_);
    for (int a = 0; a < a_; ++a)
      for (int b = rows_[a].find_first(); b >= 0; b = rows_[a].find_next(b))
        g.add_edge(a, a_ + b);
    return g;
  }

  bool operator==(const BipartiteGraph& o) const {
    return a_ == o.a_ && b_ == o.b_ && rows_ == o.rows_;
  }

private:
  int a_ = 0, b_ = 0;
  std::vector<Bits> rows_;
  std::vector<Bits> cols_;
};

/// Pairwise relations between two disjoint vertex sets.
enum class Relation { joined, cojoined, covers, cocovers, r_covered, r_cocovered };

namespace detail {

/// Neighbour-row accessors shared by the two relation overloads: `row(v)` is
/// the neighbourhood of a v1-vertex restricted to v2's id space and `col(v)`
/// the reverse.
template <class RowFn, class ColFn>
bool relation_impl(RowFn row, ColFn col, const std::vector<int>& v1,
                   const std::vector<int>& v2, Relation kind, int r) {
  switch (kind) {
    case Relation::joined:
      for (int u : v1)
        for (int w : v2)
          if (!row(u).test(w)) return false;
      return true;
    case Relation::cojoined:
      for (int u : v1)
        for (int w : v2)
          if (row(u).test(w)) return false;
      return true;
    case Relation::covers:
      r = 1;
      [[fallthrough]];
    case Relation::r_covered: {
      // Every vertex of v2 has at least r neighbours in v1.
      for (int w : v2) {
        int hits = 0;
        for (int u : v1) hits += col(w).test(u) ? 1 : 0;
        if (hits < r) return false;
      }
      return true;
    }
    case Relation::cocovers:
      r = 1;
      [[fallthrough]];
    case Relation::r_cocovered: {
      // Every vertex of v2 has at least r non-neighbours in v1.
      for (int w : v2) {
        int misses = 0;
        for (int u : v1) misses += col(w).test(u) ? 0 : 1;
        if (misses < r) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Tests `kind` between disjoint sets of a plain graph. `r` only matters for
/// the r_covered / r_cocovered kinds (covers/cocovers fix r = 1); the
/// covering direction is "v1 covers v2".
inline bool relation(const Graph& g, const VertexSet& v1, const VertexSet& v2,
                     Relation kind, int r = 1) {
  for (int u : v1.ids)
    for (int w : v2.ids)
      if (u == w) throw argument_error("relation endpoints must be disjoint");
  return detail::relation_impl([&](int u) -> const Bits& { return g.neighbours(u); },
                               [&](int w) -> const Bits& { return g.neighbours(w); },
                               v1.ids, v2.ids, kind, r);
}

/// Same over a bipartite graph; v1 lists top-side ids and v2 bottom-side ids.
inline bool relation(const BipartiteGraph& g, const std::vector<int>& v1,
                     const std::vector<int>& v2, Relation kind, int r = 1) {
  return detail::relation_impl([&](int u) -> const Bits& { return g.row(u); },
                               [&](int w) -> const Bits& { return g.col(w); },
                               v1, v2, kind, r);
}

}  // namespace costar
