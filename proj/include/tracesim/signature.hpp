#ifndef TRACESIM_SIGNATURE_HPP
#define TRACESIM_SIGNATURE_HPP

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tracesim/error.hpp"

namespace tracesim {

/// A finite ranked alphabet: finitely many symbols, each with a finite arity.
///
/// Symbols are ordered by (arity, name); that order is the canonical one used
/// by every deterministic enumeration in the library.
class RankedAlphabet {
 public:
  struct Symbol {
    std::string name;
    int arity;
  };

  /// Validates and canonically orders the given symbol->arity entries.
  /// Throws Error{EmptyAlphabet} or Error{DuplicateSymbol}.
  static RankedAlphabet validate(const std::vector<Symbol>& entries);

  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::optional<int> arity(const std::string& name) const;
  bool contains(const std::string& name) const { return arity(name).has_value(); }

  /// True iff every arity is <= 1, i.e. the generated trees are words.
  bool word_mode() const { return word_mode_; }

  bool operator==(const RankedAlphabet& other) const {
    return entries_ == other.entries_;
  }

 private:
  std::vector<Symbol> symbols_;          // canonical (arity, name) order
  std::map<std::string, int> entries_;   // lookup
  bool word_mode_ = false;
};

/// A term (a, x_0, ..., x_{n-1}): a symbol applied to exactly arity-many
/// element ids.
struct FTerm {
  std::string symbol;
  std::vector<std::string> args;

  /// Canonical print: bare symbol when nullary, "(a,x,y)" otherwise.
  std::string str() const;

  auto operator<=>(const FTerm&) const = default;
};

/// Enumerates all terms over (sigma, elems) in canonical order: symbols by
/// (arity, name), then argument tuples lexicographically in the order of
/// `elems`. The result has size sum_n |Sigma_n| * |elems|^n.
std::vector<FTerm> enumerate_fterms(const RankedAlphabet& sigma,
                                    const std::vector<std::string>& elems);

struct PrefixNode {
  std::string symbol;
  std::vector<PrefixNode> children;

  bool operator==(const PrefixNode& other) const;
  // Structural order: symbol, then children lexicographically.
  bool operator<(const PrefixNode& other) const;
};

/// A depth-k prefix of an infinite tree over a ranked alphabet. The root sits
/// at level 1; nodes at levels below k carry exactly arity-many children and
/// nodes at level k carry none. Depth 0 is the empty prefix (no root), whose
/// cylinder is the whole tree space.
struct PrefixTree {
  int depth = 0;
  std::optional<PrefixNode> root;  // engaged iff depth > 0

  static PrefixTree empty() { return PrefixTree{}; }
  static PrefixTree node(int depth, PrefixNode root);

  std::string str() const;

  bool operator==(const PrefixTree& other) const;
  bool operator<(const PrefixTree& other) const;  // depth first, then shape
};

/// All depth-k prefix trees over sigma, canonically ordered.
std::vector<PrefixTree> prefix_trees_upto(const RankedAlphabet& sigma, int k);

/// The unique depth-k prefix of t. Requires 0 <= k <= t.depth.
PrefixTree truncate(const PrefixTree& t, int k);

/// True iff t is a prefix of s: their domains nest and labels agree on the
/// smaller one. Throws Error{DepthMismatch} when depth(t) > depth(s).
bool is_prefix(const PrefixTree& t, const PrefixTree& s);

}  // namespace tracesim

#endif
