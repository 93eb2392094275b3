#pragma once

// Succinct codec for bipartite graphs in which no two top vertices both have
// s neighbours the other lacks.  Ordering the top side by degree makes each
// neighbourhood differ from its predecessor by fewer than s vertices one way,
// so storing symmetric differences keeps the whole description short.

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "patterns.hpp"

namespace costar {

/// One record of a code: a top vertex and the symmetric difference of its
/// neighbourhood with the previous record's (the first record diffs against
/// the empty set, i.e. carries the neighbourhood itself).
struct CodeRecord {
  int vertex = 0;
  std::vector<int> diff;  // sorted bottom-side ids
};

/// Sequential description of a bipartite graph: records in non-decreasing
/// top-degree order (ties by id).
struct Code {
  int s = 1;
  int a_size = 0;
  int b_size = 0;
  std::vector<CodeRecord> records;
};

/// Labels plus listed set elements; separators are not counted.
inline std::uint64_t token_count(const Code& c) {
  std::uint64_t total = c.records.size();
  for (const CodeRecord& r : c.records) total = sat_add(total, r.diff.size());
  return total;
}

/// Ceiling on the number of distinct codes, hence on the number of graphs in
/// the class on n = a_size + b_size labelled vertices: (2n)^(2sn).
inline std::uint64_t code_count_bound(int n, int s) {
  const std::uint64_t nn = static_cast<std::uint64_t>(n);
  const std::uint64_t exp = sat_mul(2, sat_mul(static_cast<std::uint64_t>(s), nn));
  return sat_pow(sat_mul(2, nn), exp);
}

/// Encode a bipartite graph with no two top vertices that each have s
/// private neighbours against the other.  The length law (every backward
/// difference smaller than s, total tokens at most 2s(a_size + b_size)) is
/// checked and reported through `findings` rather than enforced, so a
/// boundary case can be inspected instead of crashing the pipeline.
inline Code encode(const BipartiteGraph& b, int s,
                   std::vector<std::string>* findings = nullptr) {
  if (s < 1) throw argument_error("encode: star size must be positive");
  if (auto w = find_twin_star(b, s))
    throw class_violation(format_pattern({PatternFamily::lambda, 2, s}), w->a,
                          w->b);
  std::vector<int> order(b.a_size());
  for (int i = 0; i < b.a_size(); ++i) order[i] = i;
  std::vector<int> deg(b.a_size());
  for (int i = 0; i < b.a_size(); ++i) deg[i] = b.row(i).count();
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return deg[x] != deg[y] ? deg[x] < deg[y] : x < y;
  });

  Code c;
  c.s = s;
  c.a_size = b.a_size();
  c.b_size = b.b_size();
  Bits prev(b.b_size());
  for (int idx = 0; idx < b.a_size(); ++idx) {
    const int a = order[idx];
    Bits diff = b.row(a);
    diff ^= prev;
    if (findings && idx > 0) {
      Bits backward = prev;
      backward.remove(b.row(a));
      if (backward.count() >= s)
        findings->push_back("record " + std::to_string(idx) +
                            ": backward difference has " +
                            std::to_string(backward.count()) +
                            " vertices, expected fewer than " +
                            std::to_string(s));
    }
    c.records.push_back({a, diff.to_vector()});
    prev = b.row(a);
  }
  if (findings) {
    const std::uint64_t limit =
        2ull * static_cast<std::uint64_t>(s) *
        (static_cast<std::uint64_t>(b.a_size()) + b.b_size());
    if (token_count(c) > limit)
      findings->push_back("token count " + std::to_string(token_count(c)) +
                          " exceeds 2*s*n = " + std::to_string(limit));
  }
  return c;
}

/// Rebuild the graph by replaying the symmetric differences.
inline BipartiteGraph decode(const Code& c) {
  if (c.s < 1) throw parse_error("decode: star size must be positive", 0);
  if (c.a_size < 0 || c.b_size < 0)
    throw parse_error("decode: negative side size", 0);
  if (static_cast<int>(c.records.size()) != c.a_size)
    throw parse_error("decode: expected one record per top vertex", 0);
  std::vector<char> seen(c.a_size, 0);
  BipartiteGraph b(c.a_size, c.b_size);
  Bits prev(c.b_size);
  for (const CodeRecord& r : c.records) {
    if (r.vertex < 0 || r.vertex >= c.a_size)
      throw parse_error("decode: top vertex label out of range", 0);
    if (seen[r.vertex])
      throw parse_error("decode: repeated top vertex label", 0);
    seen[r.vertex] = 1;
    Bits cur = prev;
    for (int v : r.diff) {
      if (v < 0 || v >= c.b_size)
        throw parse_error("decode: bottom vertex out of range", 0);
      if (cur.test(v) != prev.test(v))
        throw parse_error("decode: repeated element in a difference set", 0);
      if (cur.test(v))
        cur.reset(v);
      else
        cur.set(v);
    }
    for (int v = cur.find_first(); v >= 0; v = cur.find_next(v))
      b.add_edge(r.vertex, v);
    prev = cur;
  }
  return b;
}

/// Line-oriented text form: header "code s |A| |B|", then one line per
/// record "a : j1 j2 ...".
inline std::string serialize_code(const Code& c) {
  std::ostringstream out;
  out << "code " << c.s << ' ' << c.a_size << ' ' << c.b_size << '\n';
  for (const CodeRecord& r : c.records) {
    out << r.vertex << " :";
    for (int v : r.diff) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

inline Code parse_code(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Code c;
  bool have_header = false;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    if (!have_header) {
      std::string word;
      if (!(ls >> word)) continue;  // blank line before header
      if (word != "code")
        throw parse_error("expected 'code s |A| |B|' header", line_start);
      if (!(ls >> c.s >> c.a_size >> c.b_size))
        throw parse_error("malformed code header", line_start);
      std::string extra;
      if (ls >> extra) throw parse_error("trailing text after header", line_start);
      have_header = true;
      continue;
    }
    CodeRecord r;
    std::string colon;
    if (!(ls >> r.vertex)) continue;  // blank line
    if (!(ls >> colon) || colon != ":")
      throw parse_error("expected ':' after the vertex label", line_start);
    int v;
    while (ls >> v) r.diff.push_back(v);
    if (!ls.eof()) throw parse_error("malformed difference set", line_start);
    c.records.push_back(std::move(r));
  }
  if (!have_header) throw parse_error("missing 'code' header", 0);
  return c;
}

}  // namespace costar
