#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "costar/errors.hpp"
#include "costar/graph.hpp"

namespace costar {

/// The forbidden-pattern families the detectors understand.
///
/// General-graph families (parameters n = components, k = star size or
/// clique order):
///   g1(n,k)  n disjoint stars K_{1,k}
///   g2(n,k)  g1 plus a clique on the centres
///   g3(n,k)  g1 plus a clique on all leaves
///   g4(n,k)  g1 plus both cliques
///   h1..h4   complements of g1..g4
///   matching(n)      n disjoint edges
///   co_matching(n)   complement of matching(n)
///   cliques(n,l)     n disjoint copies of K_l
///   co_cliques(n,l)  complement of cliques(n,l)
///
/// Bipartite families (side-respecting, complements are bipartite
/// complements):
///   lambda(n,k)  n disjoint stars, centres on the top side
///   up(n,k)      n disjoint stars, centres on the bottom side
///   co_lambda / co_up  their bipartite complements
///   matching(n) / co_matching(n) also act bipartitely (star size 1)
enum class PatternFamily {
  g1, g2, g3, g4,
  h1, h2, h3, h4,
  matching, co_matching,
  cliques, co_cliques,
  lambda, up, co_lambda, co_up,
};

struct PatternSpec {
  PatternFamily family = PatternFamily::matching;
  int n = 1;  // component multiplicity
  int k = 1;  // star size (leaves per centre) or clique order

  bool operator==(const PatternSpec&) const = default;
};

inline bool is_bipartite_family(PatternFamily f) {
  switch (f) {
    case PatternFamily::lambda:
    case PatternFamily::up:
    case PatternFamily::co_lambda:
    case PatternFamily::co_up:
      return true;
    default:
      return false;
  }
}

/// Number of vertices of the pattern graph.
inline int pattern_order(const PatternSpec& s) {
  switch (s.family) {
    case PatternFamily::g1:
    case PatternFamily::g2:
    case PatternFamily::g3:
    case PatternFamily::g4:
    case PatternFamily::h1:
    case PatternFamily::h2:
    case PatternFamily::h3:
    case PatternFamily::h4:
    case PatternFamily::lambda:
    case PatternFamily::up:
    case PatternFamily::co_lambda:
    case PatternFamily::co_up:
      return s.n * (s.k + 1);
    case PatternFamily::matching:
    case PatternFamily::co_matching:
      return 2 * s.n;
    case PatternFamily::cliques:
    case PatternFamily::co_cliques:
      return s.n * s.k;
  }
  return 0;
}

inline std::string format_pattern(const PatternSpec& s) {
  auto two = [&](const char* name) {
    return std::string(name) + "(" + std::to_string(s.n) + "," + std::to_string(s.k) + ")";
  };
  auto one = [&](const char* name) {
    return std::string(name) + "(" + std::to_string(s.n) + ")";
  };
  switch (s.family) {
    case PatternFamily::g1: return two("G1");
    case PatternFamily::g2: return two("G2");
    case PatternFamily::g3: return two("G3");
    case PatternFamily::g4: return two("G4");
    case PatternFamily::h1: return two("H1");
    case PatternFamily::h2: return two("H2");
    case PatternFamily::h3: return two("H3");
    case PatternFamily::h4: return two("H4");
    case PatternFamily::matching: return one("nK2");
    case PatternFamily::co_matching: return one("co-nK2");
    case PatternFamily::cliques: return two("nKl");
    case PatternFamily::co_cliques: return two("co-nKl");
    case PatternFamily::lambda: return two("lambda");
    case PatternFamily::up: return two("up");
    case PatternFamily::co_lambda: return two("co-lambda");
    case PatternFamily::co_up: return two("co-up");
  }
  return "?";
}

/// Parses a pattern name. Accepted forms:
///   G1(n,k) .. G4(n,k), H1(n,k) .. H4(n,k)
///   nK2(n), co-nK2(n), nKl(n,l), co-nKl(n,l)
///   lambda(n,k), up(n,k), co-lambda(n,k), co-up(n,k)
///   sugar: "3K2", "co-3K2", "2K4", "co-2K4", "C4", "C6"
/// C4/C6 are shorthand for co-nK2(2)/co-nK2(3); on plain graphs those are the
/// cycles, on bipartite graphs the bipartite-complement reading applies (the
/// bipartite co-nK2(3) is the 6-cycle; the bipartite co-nK2(2) is again 2K2).
inline PatternSpec parse_pattern(std::string_view text) {
  auto fail = [&]() -> PatternSpec {
    throw argument_error("unrecognised pattern name: " + std::string(text));
  };
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) fail();

  if (s == "C4") return {PatternFamily::co_matching, 2, 1};
  if (s == "C6") return {PatternFamily::co_matching, 3, 1};

  // Split "name(args)" if parenthesised.
  std::string name;
  std::vector<int> args;
  if (auto open = s.find('('); open != std::string_view::npos) {
    if (s.back() != ')') fail();
    name = std::string(s.substr(0, open));
    std::string_view inner = s.substr(open + 1, s.size() - open - 2);
    std::size_t p = 0;
    while (p < inner.size()) {
      if (!std::isdigit(static_cast<unsigned char>(inner[p]))) fail();
      long long v = 0;
      while (p < inner.size() && std::isdigit(static_cast<unsigned char>(inner[p]))) {
        v = v * 10 + (inner[p] - '0');
        if (v > 1000000) throw argument_error("pattern parameter too large");
        ++p;
      }
      args.push_back(static_cast<int>(v));
      if (p < inner.size()) {
        if (inner[p] != ',') fail();
        ++p;
        if (p == inner.size()) fail();
      }
    }
    if (args.empty()) fail();
  } else {
    name = std::string(s);
  }

  auto spec2 = [&](PatternFamily f) -> PatternSpec {
    if (args.size() != 2) fail();
    if (args[0] < 1 || args[1] < 1) throw argument_error("pattern parameters must be positive");
    return {f, args[0], args[1]};
  };
  auto spec1 = [&](PatternFamily f) -> PatternSpec {
    if (args.size() != 1) fail();
    if (args[0] < 1) throw argument_error("pattern parameters must be positive");
    return {f, args[0], 1};
  };

  if (!args.empty()) {
    if (name == "G1") return spec2(PatternFamily::g1);
    if (name == "G2") return spec2(PatternFamily::g2);
    if (name == "G3") return spec2(PatternFamily::g3);
    if (name == "G4") return spec2(PatternFamily::g4);
    if (name == "H1") return spec2(PatternFamily::h1);
    if (name == "H2") return spec2(PatternFamily::h2);
    if (name == "H3") return spec2(PatternFamily::h3);
    if (name == "H4") return spec2(PatternFamily::h4);
    if (name == "nK2") return spec1(PatternFamily::matching);
    if (name == "co-nK2") return spec1(PatternFamily::co_matching);
    if (name == "nKl") return spec2(PatternFamily::cliques);
    if (name == "co-nKl") return spec2(PatternFamily::co_cliques);
    if (name == "lambda") return spec2(PatternFamily::lambda);
    if (name == "up") return spec2(PatternFamily::up);
    if (name == "co-lambda") return spec2(PatternFamily::co_lambda);
    if (name == "co-up") return spec2(PatternFamily::co_up);
    fail();
  }

  // Sugar: [co-]<n>K<l>.
  std::string_view rest = name;
  bool co = false;
  if (rest.substr(0, 3) == "co-") {
    co = true;
    rest.remove_prefix(3);
  }
  std::size_t p = 0;
  auto digits = [&]() -> int {
    if (p >= rest.size() || !std::isdigit(static_cast<unsigned char>(rest[p]))) fail();
    long long v = 0;
    while (p < rest.size() && std::isdigit(static_cast<unsigned char>(rest[p]))) {
      v = v * 10 + (rest[p] - '0');
      if (v > 1000000) throw argument_error("pattern parameter too large");
      ++p;
    }
    return static_cast<int>(v);
  };
  int nn = digits();
  if (p >= rest.size() || rest[p] != 'K') fail();
  ++p;
  int ll = digits();
  if (p != rest.size()) fail();
  if (nn < 1 || ll < 1) throw argument_error("pattern parameters must be positive");
  if (ll == 2) return {co ? PatternFamily::co_matching : PatternFamily::matching, nn, 1};
  return {co ? PatternFamily::co_cliques : PatternFamily::cliques, nn, ll};
}

namespace detail {

/// A concrete pattern prepared for backtracking search: adjacency, a visit
/// order, and per-depth "must map above" constraints that break the pattern's
/// automorphisms (component permutations, leaf permutations, and the
/// centre/leaf swaps that exist when stars have one leaf).
struct SearchPattern {
  int n = 0;
  std::vector<Bits> adj;
  std::vector<int> order;
  std::vector<std::vector<int>> lower;  // lower[d]: pattern vertices already
                                        // placed whose image must be below
                                        // the image of order[d]
};

inline bool pattern_is_complete(const SearchPattern& p) {
  for (int v = 0; v < p.n; ++v)
    if (p.adj[v].count() != p.n - 1) return false;
  return p.n >= 1;
}

inline void add_lower(SearchPattern& p, const std::vector<int>& depth_of, int later,
                      int earlier) {
  p.lower[depth_of[later]].push_back(earlier);
}

/// Star-forest patterns (g1..g4 and their parameter cousins).
inline SearchPattern star_pattern(PatternFamily f, int n, int k) {
  const int N = n * (k + 1);
  SearchPattern p;
  p.n = N;
  p.adj.assign(N, Bits(N));
  auto centre = [&](int c) { return c * (k + 1); };
  auto leaf = [&](int c, int j) { return c * (k + 1) + 1 + j; };
  auto link = [&](int u, int v) {
    p.adj[u].set(v);
    p.adj[v].set(u);
  };
  const bool centre_clique = (f == PatternFamily::g2 || f == PatternFamily::g4);
  const bool leaf_clique = (f == PatternFamily::g3 || f == PatternFamily::g4);
  for (int c = 0; c < n; ++c)
    for (int j = 0; j < k; ++j) link(centre(c), leaf(c, j));
  if (centre_clique)
    for (int c = 0; c < n; ++c)
      for (int d = c + 1; d < n; ++d) link(centre(c), centre(d));
  if (leaf_clique)
    for (int c = 0; c < n; ++c)
      for (int j = 0; j < k; ++j)
        for (int d = 0; d < n; ++d)
          for (int e = 0; e < k; ++e)
            if (leaf(c, j) < leaf(d, e)) link(leaf(c, j), leaf(d, e));

  p.order.resize(N);
  std::vector<int> depth_of(N);
  for (int v = 0; v < N; ++v) {
    p.order[v] = v;  // component by component, centre first
    depth_of[v] = v;
  }
  p.lower.assign(N, {});
  if (pattern_is_complete(p)) {
    for (int v = 1; v < N; ++v) add_lower(p, depth_of, v, v - 1);
    return p;
  }
  for (int c = 1; c < n; ++c) add_lower(p, depth_of, centre(c), centre(c - 1));
  for (int c = 0; c < n; ++c)
    for (int j = 1; j < k; ++j) add_lower(p, depth_of, leaf(c, j), leaf(c, j - 1));
  if (k == 1 && f == PatternFamily::g1) {
    // Each component is an edge: orient it (leaf above centre).
    for (int c = 0; c < n; ++c) add_lower(p, depth_of, leaf(c, 0), centre(c));
  } else if (k == 1 && f == PatternFamily::g4) {
    // Exchanging the centre clique with the leaf clique (as wholes) is the
    // only extra symmetry; one global orientation breaks it.
    add_lower(p, depth_of, leaf(0, 0), centre(0));
  }
  return p;
}

/// n disjoint copies of K_l.
inline SearchPattern clique_pattern(int n, int l) {
  const int N = n * l;
  SearchPattern p;
  p.n = N;
  p.adj.assign(N, Bits(N));
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < l; ++i)
      for (int j = i + 1; j < l; ++j) {
        p.adj[c * l + i].set(c * l + j);
        p.adj[c * l + j].set(c * l + i);
      }
  p.order.resize(N);
  std::vector<int> depth_of(N);
  for (int v = 0; v < N; ++v) {
    p.order[v] = v;
    depth_of[v] = v;
  }
  p.lower.assign(N, {});
  for (int c = 0; c < n; ++c)
    for (int i = 1; i < l; ++i) add_lower(p, depth_of, c * l + i, c * l + i - 1);
  for (int c = 1; c < n; ++c) add_lower(p, depth_of, c * l, (c - 1) * l);
  return p;
}

/// Backtracking induced-subgraph search. With `complement_host` the host's
/// adjacency is read inverted, which finds complement patterns without
/// building the complement graph.
class InducedSearch {
 public:
  InducedSearch(SearchPattern pattern, bool complement_host)
      : p_(std::move(pattern)), comp_(complement_host) {}

  std::optional<std::vector<int>> find(const Graph& host) {
    if (p_.n > host.n()) return std::nullopt;
    img_.assign(p_.n, -1);
    used_ = Bits(host.n());
    if (dfs(host, 0)) return img_;
    return std::nullopt;
  }

 private:
  bool dfs(const Graph& host, int depth) {
    if (depth == p_.n) return true;
    const int v = p_.order[depth];
    int lo = 0;
    for (int u : p_.lower[depth]) lo = std::max(lo, img_[u] + 1);
    for (int w = lo; w < host.n(); ++w) {
      if (used_.test(w)) continue;
      bool ok = true;
      for (int q = 0; q < depth && ok; ++q) {
        const int u = p_.order[q];
        const bool want = p_.adj[u].test(v) != comp_;
        ok = (host.has_edge(img_[u], w) == want);
      }
      if (!ok) continue;
      img_[v] = w;
      used_.set(w);
      if (dfs(host, depth + 1)) return true;
      used_.reset(w);
      img_[v] = -1;
    }
    return false;
  }

  SearchPattern p_;
  bool comp_;
  std::vector<int> img_;
  Bits used_;
};

}  // namespace detail

/// Reusable induced-pattern detector for plain graphs. Construction does the
/// per-pattern preparation once so scanning many hosts stays cheap.
class PatternMatcher {
 public:
  explicit PatternMatcher(const PatternSpec& spec) : spec_(spec) {
    if (is_bipartite_family(spec.family))
      throw argument_error("bipartite pattern used on a plain graph: " + format_pattern(spec));
    bool comp = false;
    PatternFamily base = spec.family;
    switch (spec.family) {
      case PatternFamily::h1: base = PatternFamily::g1; comp = true; break;
      case PatternFamily::h2: base = PatternFamily::g2; comp = true; break;
      case PatternFamily::h3: base = PatternFamily::g3; comp = true; break;
      case PatternFamily::h4: base = PatternFamily::g4; comp = true; break;
      case PatternFamily::co_matching: base = PatternFamily::matching; comp = true; break;
      case PatternFamily::co_cliques: base = PatternFamily::cliques; comp = true; break;
      default: break;
    }
    if (spec.n < 1 || spec.k < 1) throw argument_error("pattern parameters must be positive");
    if (base == PatternFamily::matching)
      pat_ = detail::star_pattern(PatternFamily::g1, spec.n, 1);
    else if (base == PatternFamily::cliques)
      pat_ = detail::clique_pattern(spec.n, spec.k);
    else
      pat_ = detail::star_pattern(base, spec.n, spec.k);
    comp_ = comp;
  }

  const PatternSpec& spec() const { return spec_; }
  int order() const { return pat_.n; }

  /// Host vertices of an induced copy (indexed by pattern vertex), if any.
  std::optional<std::vector<int>> find(const Graph& host) const {
    detail::InducedSearch search(pat_, comp_);
    return search.find(host);
  }

  bool contained_in(const Graph& host) const { return find(host).has_value(); }

 private:
  PatternSpec spec_;
  detail::SearchPattern pat_;
  bool comp_ = false;
};

/// One-shot convenience wrapper around PatternMatcher.
inline std::optional<std::vector<int>> find_induced(const Graph& host, const PatternSpec& spec) {
  return PatternMatcher(spec).find(host);
}

/// Builds the pattern graph itself (general families only).
inline Graph build_pattern(const PatternSpec& spec) {
  if (is_bipartite_family(spec.family))
    throw argument_error("bipartite pattern used on a plain graph: " + format_pattern(spec));
  if (spec.n < 1 || spec.k < 1) throw argument_error("pattern parameters must be positive");
  PatternSpec base = spec;
  bool comp = false;
  switch (spec.family) {
    case PatternFamily::h1: base.family = PatternFamily::g1; comp = true; break;
    case PatternFamily::h2: base.family = PatternFamily::g2; comp = true; break;
    case PatternFamily::h3: base.family = PatternFamily::g3; comp = true; break;
    case PatternFamily::h4: base.family = PatternFamily::g4; comp = true; break;
    case PatternFamily::co_matching: base.family = PatternFamily::matching; comp = true; break;
    case PatternFamily::co_cliques: base.family = PatternFamily::cliques; comp = true; break;
    default: break;
  }
  detail::SearchPattern p =
      (base.family == PatternFamily::matching)  ? detail::star_pattern(PatternFamily::g1, base.n, 1)
      : (base.family == PatternFamily::cliques) ? detail::clique_pattern(base.n, base.k)
                                                : detail::star_pattern(base.family, base.n, base.k);
  Graph g(p.n);
  for (int u = 0; u < p.n; ++u)
    for (int v = u + 1; v < p.n; ++v)
      if (p.adj[u].test(v)) g.add_edge(u, v);
  return comp ? g.complement() : g;
}

/// A side-respecting embedding into a bipartite graph.
struct BipWitness {
  std::vector<int> a;  // top-side host ids
  std::vector<int> b;  // bottom-side host ids
};

namespace detail {

inline bool star_forest_dfs(const BipartiteGraph& g, int t, int k, std::vector<int>& centres,
                            int next) {
  if (static_cast<int>(centres.size()) == t) return true;
  for (int c = next; c < g.a_size(); ++c) {
    centres.push_back(c);
    bool feasible = true;
    for (std::size_t i = 0; i < centres.size() && feasible; ++i) {
      Bits priv = g.row(centres[i]);
      for (std::size_t j = 0; j < centres.size(); ++j)
        if (j != i) priv.remove(g.row(centres[j]));
      feasible = priv.count() >= k;
    }
    if (feasible && star_forest_dfs(g, t, k, centres, c + 1)) return true;
    centres.pop_back();
  }
  return false;
}

/// Finds t disjoint stars with centres on the top side and k leaves each,
/// induced and side-respecting: equivalently, t centres that each keep at
/// least k private neighbours against the other chosen centres.
inline std::optional<BipWitness> find_star_forest(const BipartiteGraph& g, int t, int k) {
  if (t < 1 || k < 1) throw argument_error("pattern parameters must be positive");
  if (g.a_size() < t || g.b_size() < t * k) return std::nullopt;
  std::vector<int> centres;
  centres.reserve(t);
  if (!star_forest_dfs(g, t, k, centres, 0)) return std::nullopt;
  BipWitness w;
  w.a = centres;
  for (std::size_t i = 0; i < centres.size(); ++i) {
    Bits priv = g.row(centres[i]);
    for (std::size_t j = 0; j < centres.size(); ++j)
      if (j != i) priv.remove(g.row(centres[j]));
    int taken = 0;
    for (int v = priv.find_first(); v >= 0 && taken < k; v = priv.find_next(v), ++taken)
      w.b.push_back(v);
  }
  return w;
}

}  // namespace detail

/// Side-respecting induced search for the bipartite families (and the two
/// matching families, read bipartitely). The witness lists centres in `a` or
/// `b` according to the family's centre side, with leaves on the other side
/// grouped per centre; for complement families the witness is still given in
/// the original graph's ids.
inline std::optional<BipWitness> find_induced_bipartite(const BipartiteGraph& g,
                                                        const PatternSpec& spec) {
  auto swap_sides = [](BipWitness w) {
    std::swap(w.a, w.b);
    return w;
  };
  switch (spec.family) {
    case PatternFamily::lambda:
      return detail::find_star_forest(g, spec.n, spec.k);
    case PatternFamily::up: {
      auto r = detail::find_star_forest(g.swapped(), spec.n, spec.k);
      if (!r) return std::nullopt;
      return swap_sides(*r);
    }
    case PatternFamily::co_lambda:
      return detail::find_star_forest(g.complement(), spec.n, spec.k);
    case PatternFamily::co_up: {
      auto r = detail::find_star_forest(g.complement().swapped(), spec.n, spec.k);
      if (!r) return std::nullopt;
      return swap_sides(*r);
    }
    case PatternFamily::matching:
      return detail::find_star_forest(g, spec.n, 1);
    case PatternFamily::co_matching:
      return detail::find_star_forest(g.complement(), spec.n, 1);
    default:
      throw argument_error("not a bipartite pattern: " + format_pattern(spec));
  }
}

/// Builds the bipartite pattern graph itself (centres on the family's side).
inline BipartiteGraph build_bipartite_pattern(const PatternSpec& spec) {
  if (!is_bipartite_family(spec.family) && spec.family != PatternFamily::matching &&
      spec.family != PatternFamily::co_matching)
    throw argument_error("not a bipartite pattern: " + format_pattern(spec));
  const int n = spec.n;
  const int k = (spec.family == PatternFamily::matching || spec.family == PatternFamily::co_matching)
                    ? 1
                    : spec.k;
  BipartiteGraph stars(n, n * k);
  for (int c = 0; c < n; ++c)
    for (int j = 0; j < k; ++j) stars.add_edge(c, c * k + j);
  switch (spec.family) {
    case PatternFamily::lambda:
    case PatternFamily::matching:
      return stars;
    case PatternFamily::up:
      return stars.swapped();
    case PatternFamily::co_lambda:
    case PatternFamily::co_matching:
      return stars.complement();
    case PatternFamily::co_up:
      return stars.swapped().complement();
    default:
      return stars;
  }
}

/// Two stars with centres on the top side and `s` private leaves each; the
/// fast pairwise test: such a pair exists iff two top vertices each have at
/// least s neighbours the other lacks.
inline std::optional<BipWitness> find_twin_star(const BipartiteGraph& g, int s) {
  if (s < 1) throw argument_error("star size must be positive");
  for (int a1 = 0; a1 < g.a_size(); ++a1)
    for (int a2 = a1 + 1; a2 < g.a_size(); ++a2) {
      Bits d1 = g.row(a1);
      d1.remove(g.row(a2));
      if (d1.count() < s) continue;
      Bits d2 = g.row(a2);
      d2.remove(g.row(a1));
      if (d2.count() < s) continue;
      BipWitness w;
      w.a = {a1, a2};
      int taken = 0;
      for (int v = d1.find_first(); v >= 0 && taken < s; v = d1.find_next(v), ++taken)
        w.b.push_back(v);
      taken = 0;
      for (int v = d2.find_first(); v >= 0 && taken < s; v = d2.find_next(v), ++taken)
        w.b.push_back(v);
      return w;
    }
  return std::nullopt;
}

inline bool is_twin_star_free(const BipartiteGraph& g, int s) {
  return !find_twin_star(g, s).has_value();
}

}  // namespace costar
