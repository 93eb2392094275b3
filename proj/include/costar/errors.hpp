#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace costar {

/// Malformed external input; `offset` is the byte where parsing gave up.
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (byte " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

/// Caller passed arguments outside an operation's contract.
class argument_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Input exceeds a configured size cap for an exhaustive operation.
class size_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An internal precondition that the construction relies on failed; the
/// message names the offending index or vertex.
class contract_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// The input graph is not in the hereditary class an operation requires.
/// Carries the offending pattern name and an embedding as witness; bipartite
/// witnesses keep the two sides apart, general ones use `witness` only.
class class_violation : public std::runtime_error {
public:
  class_violation(std::string pattern, std::vector<int> w)
      : std::runtime_error("input contains forbidden pattern " + pattern),
        pattern(std::move(pattern)),
        witness(std::move(w)) {}
  class_violation(std::string pattern, std::vector<int> wa, std::vector<int> wb)
      : std::runtime_error("input contains forbidden pattern " + pattern),
        pattern(std::move(pattern)),
        witness_a(std::move(wa)),
        witness_b(std::move(wb)) {}

  std::string pattern;
  std::vector<int> witness;    // general-graph vertex ids
  std::vector<int> witness_a;  // bipartite: top-side ids
  std::vector<int> witness_b;  // bipartite: bottom-side ids
};

}  // namespace costar
