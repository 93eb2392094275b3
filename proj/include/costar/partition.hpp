#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "costar/errors.hpp"
#include "costar/graph.hpp"

namespace costar {

/// What a block is promised to induce on its own vertices.
enum class BlockKind { independent, clique, unconstrained };

inline const char* to_string(BlockKind k) {
  switch (k) {
    case BlockKind::independent: return "independent";
    case BlockKind::clique: return "clique";
    case BlockKind::unconstrained: return "unconstrained";
  }
  return "unconstrained";
}

inline BlockKind block_kind_from_string(const std::string& s) {
  if (s == "independent") return BlockKind::independent;
  if (s == "clique") return BlockKind::clique;
  if (s == "unconstrained") return BlockKind::unconstrained;
  throw argument_error("unknown block kind: " + s);
}

struct Block {
  BlockKind kind = BlockKind::unconstrained;
  Side side = Side::general;
  std::vector<int> vertices;  // sorted ascending
};

/// A promise that the bipartite graph between blocks i and j contains no
/// induced copy of `pattern` (a pattern name, e.g. "nK2(2)" or "lambda(2,3)").
struct Guarantee {
  int i = 0;
  int j = 0;
  std::string pattern;
};

/// A vertex partition with per-block kinds and per-pair freeness guarantees.
/// For bipartite inputs the blocks carry their side and the vertex ids are
/// per-side; for plain graphs every block has side `general`.
struct LabelledPartition {
  std::vector<Block> blocks;
  std::vector<Guarantee> guarantees;

  int block_count() const { return static_cast<int>(blocks.size()); }

  /// Vertex -> block index for plain-graph partitions (side == general).
  /// Throws if a vertex is missing or repeated.
  std::vector<int> block_of(int n) const {
    std::vector<int> out(n, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (int v : blocks[b].vertices) {
        if (v < 0 || v >= n) throw argument_error("partition vertex out of range");
        if (out[v] != -1) throw argument_error("partition repeats a vertex");
        out[v] = static_cast<int>(b);
      }
    for (int v = 0; v < n; ++v)
      if (out[v] == -1) throw argument_error("partition misses a vertex");
    return out;
  }
};

inline void to_json(nlohmann::json& j, const Block& b) {
  j = nlohmann::json{{"kind", to_string(b.kind)}, {"vertices", b.vertices}};
  if (b.side == Side::top) j["side"] = "top";
  if (b.side == Side::bottom) j["side"] = "bottom";
}

inline void from_json(const nlohmann::json& j, Block& b) {
  b.kind = block_kind_from_string(j.at("kind").get<std::string>());
  b.vertices = j.at("vertices").get<std::vector<int>>();
  b.side = Side::general;
  if (auto it = j.find("side"); it != j.end()) {
    std::string s = it->get<std::string>();
    if (s == "top")
      b.side = Side::top;
    else if (s == "bottom")
      b.side = Side::bottom;
    else
      throw argument_error("unknown block side: " + s);
  }
}

inline void to_json(nlohmann::json& j, const Guarantee& g) {
  j = nlohmann::json{{"i", g.i}, {"j", g.j}, {"free", g.pattern}};
}

inline void from_json(const nlohmann::json& j, Guarantee& g) {
  g.i = j.at("i").get<int>();
  g.j = j.at("j").get<int>();
  g.pattern = j.at("free").get<std::string>();
}

inline void to_json(nlohmann::json& j, const LabelledPartition& p) {
  j = nlohmann::json{{"blocks", p.blocks}, {"guarantees", p.guarantees}};
}

inline void from_json(const nlohmann::json& j, LabelledPartition& p) {
  p.blocks = j.at("blocks").get<std::vector<Block>>();
  p.guarantees.clear();
  if (auto it = j.find("guarantees"); it != j.end())
    p.guarantees = it->get<std::vector<Guarantee>>();
}

/// Intersects several labelings of the same vertex list into one: two
/// vertices land in a common cell iff every labeling puts them together.
/// `labelings[l][v]` is the label of vertex v under labeling l. Cells are
/// numbered in first-appearance order scanning vertices ascending.
inline std::vector<int> intersect_labelings(const std::vector<std::vector<int>>& labelings,
                                            int n) {
  std::vector<int> out(n, 0);
  if (labelings.empty()) return out;
  std::map<std::vector<int>, int> seen;
  for (int v = 0; v < n; ++v) {
    std::vector<int> key(labelings.size());
    for (std::size_t l = 0; l < labelings.size(); ++l) key[l] = labelings[l][v];
    auto it = seen.emplace(std::move(key), static_cast<int>(seen.size())).first;
    out[v] = it->second;
  }
  return out;
}

}  // namespace costar
