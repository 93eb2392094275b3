#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "costar/errors.hpp"
#include "costar/graph.hpp"

namespace costar {

/// graph6 text codec (the classic 6-bit packed format) plus a small
/// line-oriented format for bipartite graphs. All parse failures throw
/// parse_error carrying the byte offset of the offending input position.

namespace detail {

inline unsigned g6_byte(std::string_view s, std::size_t i) {
  if (i >= s.size()) throw parse_error("unexpected end of graph6 data", i);
  unsigned c = static_cast<unsigned char>(s[i]);
  if (c < 63 || c > 126) throw parse_error("byte outside graph6 alphabet", i);
  return c - 63;
}

}  // namespace detail

/// Decodes one graph6 value. An optional ">>graph6<<" prefix and trailing
/// whitespace are tolerated; anything else after the value is an error.
/// `max_n` bounds the declared vertex count before any allocation happens.
inline Graph parse_graph6(std::string_view s, int max_n = 16384) {
  std::size_t pos = 0;
  constexpr std::string_view header = ">>graph6<<";
  if (s.substr(0, header.size()) == header) pos = header.size();

  long long n = 0;
  unsigned c0 = detail::g6_byte(s, pos);
  if (c0 < 63) {
    n = c0;
    pos += 1;
  } else if (detail::g6_byte(s, pos + 1) == 63) {
    for (int t = 0; t < 6; ++t) n = (n << 6) | detail::g6_byte(s, pos + 2 + t);
    pos += 8;
  } else {
    for (int t = 0; t < 3; ++t) n = (n << 6) | detail::g6_byte(s, pos + 1 + t);
    pos += 4;
  }
  if (n > max_n) throw size_error("graph6 value declares too many vertices");

  const std::size_t bits = static_cast<std::size_t>(n) * (n - 1) / 2;
  const std::size_t nchars = (bits + 5) / 6;
  Graph g(static_cast<int>(n));
  std::size_t bi = 0;
  int i = 0, j = 1;
  for (std::size_t t = 0; t < nchars; ++t) {
    unsigned v = detail::g6_byte(s, pos + t);
    for (int b = 5; b >= 0; --b) {
      bool bit = (v >> b) & 1u;
      if (bi < bits) {
        if (bit) g.add_edge(i, j);
        if (++i == j) {
          i = 0;
          ++j;
        }
      } else if (bit) {
        throw parse_error("nonzero padding bits in graph6 value", pos + t);
      }
      ++bi;
    }
  }
  pos += nchars;
  for (; pos < s.size(); ++pos)
    if (!std::isspace(static_cast<unsigned char>(s[pos])))
      throw parse_error("trailing data after graph6 value", pos);
  return g;
}

/// Encodes to graph6 using the shortest size form.
inline std::string to_graph6(const Graph& g) {
  const long long n = g.n();
  std::string out;
  if (n <= 62) {
    out.push_back(static_cast<char>(n + 63));
  } else if (n <= 258047) {
    out.push_back('~');
    for (int t = 2; t >= 0; --t)
      out.push_back(static_cast<char>(((n >> (6 * t)) & 63) + 63));
  } else {
    out.append("~~");
    for (int t = 5; t >= 0; --t)
      out.push_back(static_cast<char>(((n >> (6 * t)) & 63) + 63));
  }
  unsigned acc = 0;
  int npend = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.has_edge(i, static_cast<int>(j)) ? 1u : 0u);
      if (++npend == 6) {
        out.push_back(static_cast<char>(acc + 63));
        acc = 0;
        npend = 0;
      }
    }
  if (npend > 0) out.push_back(static_cast<char>((acc << (6 - npend)) + 63));
  return out;
}

/// Decodes the bipartite text format:
///
///   bip <|A|> <|B|>
///   <a> <b>        (one cross edge per line)
///
/// '#' starts a comment, blank lines are skipped.
inline BipartiteGraph parse_bipartite(std::string_view s, int max_n = 16384) {
  std::size_t pos = 0;
  bool have_header = false;
  long long na = 0, nb = 0;
  BipartiteGraph g;

  while (pos < s.size()) {
    std::size_t line_start = pos;
    std::size_t eol = s.find('\n', pos);
    std::string_view line = s.substr(pos, (eol == std::string_view::npos ? s.size() : eol) - pos);
    pos = (eol == std::string_view::npos) ? s.size() : eol + 1;

    if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    std::size_t b = 0, e = line.size();
    while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
    if (b == e) continue;
    line = line.substr(b, e - b);
    std::size_t off = line_start + b;

    auto fields_error = [&](const char* msg) { return parse_error(msg, off); };
    if (!have_header) {
      if (line.substr(0, 3) != "bip" ||
          (line.size() > 3 && !std::isspace(static_cast<unsigned char>(line[3]))))
        throw fields_error("expected 'bip <|A|> <|B|>' header");
      std::size_t q = 3;
      auto number = [&]() -> long long {
        while (q < line.size() && std::isspace(static_cast<unsigned char>(line[q]))) ++q;
        if (q == line.size() || !std::isdigit(static_cast<unsigned char>(line[q])))
          throw parse_error("expected a nonnegative integer", off + q);
        long long v = 0;
        while (q < line.size() && std::isdigit(static_cast<unsigned char>(line[q]))) {
          v = v * 10 + (line[q] - '0');
          if (v > (1LL << 40)) throw parse_error("integer too large", off + q);
          ++q;
        }
        return v;
      };
      na = number();
      nb = number();
      while (q < line.size() && std::isspace(static_cast<unsigned char>(line[q]))) ++q;
      if (q != line.size()) throw parse_error("trailing data after header", off + q);
      if (na > max_n || nb > max_n) throw size_error("bipartite header declares too many vertices");
      g = BipartiteGraph(static_cast<int>(na), static_cast<int>(nb));
      have_header = true;
      continue;
    }

    std::size_t q = 0;
    auto number = [&]() -> long long {
      while (q < line.size() && std::isspace(static_cast<unsigned char>(line[q]))) ++q;
      if (q == line.size() || !std::isdigit(static_cast<unsigned char>(line[q])))
        throw parse_error("expected a nonnegative integer", off + q);
      long long v = 0;
      while (q < line.size() && std::isdigit(static_cast<unsigned char>(line[q]))) {
        v = v * 10 + (line[q] - '0');
        if (v > (1LL << 40)) throw parse_error("integer too large", off + q);
        ++q;
      }
      return v;
    };
    long long a = number();
    long long bb = number();
    while (q < line.size() && std::isspace(static_cast<unsigned char>(line[q]))) ++q;
    if (q != line.size()) throw parse_error("trailing data after edge", off + q);
    if (a >= na || bb >= nb) throw parse_error("edge endpoint out of declared range", off);
    g.add_edge(static_cast<int>(a), static_cast<int>(bb));
  }
  if (!have_header) throw parse_error("missing 'bip' header", s.size());
  return g;
}

inline std::string to_bipartite_text(const BipartiteGraph& g) {
  std::string out = "bip " + std::to_string(g.a_size()) + " " + std::to_string(g.b_size()) + "\n";
  for (int a = 0; a < g.a_size(); ++a)
    for (int b = g.row(a).find_first(); b >= 0; b = g.row(a).find_next(b))
      out += std::to_string(a) + " " + std::to_string(b) + "\n";
  return out;
}

}  // namespace costar
