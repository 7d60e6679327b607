#include "tracesim/signature.hpp"

#include <algorithm>

namespace tracesim {

RankedAlphabet RankedAlphabet::validate(const std::vector<Symbol>& entries) {
  if (entries.empty()) throw Error(ErrorKind::EmptyAlphabet, "no symbols");
  RankedAlphabet sigma;
  for (const Symbol& s : entries) {
    if (s.arity < 0)
      throw Error(ErrorKind::MonadFieldInvalid, "negative arity for " + s.name);
    if (!sigma.entries_.emplace(s.name, s.arity).second)
      throw Error(ErrorKind::DuplicateSymbol, s.name);
  }
  sigma.symbols_.assign(entries.begin(), entries.end());
  std::sort(sigma.symbols_.begin(), sigma.symbols_.end(),
            [](const Symbol& a, const Symbol& b) {
              return std::tie(a.arity, a.name) < std::tie(b.arity, b.name);
            });
  sigma.word_mode_ = std::all_of(sigma.symbols_.begin(), sigma.symbols_.end(),
                                 [](const Symbol& s) { return s.arity <= 1; });
  return sigma;
}

std::optional<int> RankedAlphabet::arity(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string FTerm::str() const {
  if (args.empty()) return symbol;
  std::string out = "(" + symbol;
  for (const auto& a : args) {
    out += ',';
    out += a;
  }
  out += ')';
  return out;
}

std::vector<FTerm> enumerate_fterms(const RankedAlphabet& sigma,
                                    const std::vector<std::string>& elems) {
  std::vector<FTerm> out;
  for (const auto& sym : sigma.symbols()) {
    const int n = sym.arity;
    if (n > 0 && elems.empty()) continue;
    // Odometer over argument positions, most significant first.
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
      FTerm t;
      t.symbol = sym.name;
      t.args.reserve(idx.size());
      for (std::size_t i : idx) t.args.push_back(elems[i]);
      out.push_back(std::move(t));
      int pos = n - 1;
      while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == elems.size()) {
        idx[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }
  return out;
}

bool PrefixNode::operator==(const PrefixNode& other) const {
  return symbol == other.symbol && children == other.children;
}

bool PrefixNode::operator<(const PrefixNode& other) const {
  if (symbol != other.symbol) return symbol < other.symbol;
  return std::lexicographical_compare(children.begin(), children.end(),
                                      other.children.begin(),
                                      other.children.end());
}

bool PrefixTree::operator==(const PrefixTree& other) const {
  return depth == other.depth && root == other.root;
}

bool PrefixTree::operator<(const PrefixTree& other) const {
  if (depth != other.depth) return depth < other.depth;
  if (root.has_value() != other.root.has_value()) return !root.has_value();
  if (!root) return false;
  return *root < *other.root;
}

PrefixTree PrefixTree::node(int depth, PrefixNode root) {
  PrefixTree t;
  t.depth = depth;
  t.root = std::move(root);
  return t;
}

namespace {

std::string node_str(const PrefixNode& n) {
  if (n.children.empty()) return n.symbol;
  std::string out = n.symbol + "(";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) out += ',';
    out += node_str(n.children[i]);
  }
  out += ')';
  return out;
}

PrefixNode truncate_node(const PrefixNode& n, int levels_left) {
  PrefixNode out;
  out.symbol = n.symbol;
  if (levels_left > 1) {
    out.children.reserve(n.children.size());
    for (const auto& c : n.children)
      out.children.push_back(truncate_node(c, levels_left - 1));
  }
  return out;
}

}  // namespace

std::string PrefixTree::str() const {
  if (!root) return "<empty>";
  return node_str(*root);
}

std::vector<PrefixTree> prefix_trees_upto(const RankedAlphabet& sigma, int k) {
  if (k < 0) throw Error(ErrorKind::DepthMismatch, "negative depth");
  if (k == 0) return {PrefixTree::empty()};
  // Build node layers: layer d holds the roots of all depth-d trees.
  std::vector<PrefixNode> layer;
  for (const auto& sym : sigma.symbols()) layer.push_back(PrefixNode{sym.name, {}});
  for (int d = 2; d <= k; ++d) {
    std::vector<PrefixNode> next;
    for (const auto& sym : sigma.symbols()) {
      const int n = sym.arity;
      if (n == 0) {
        next.push_back(PrefixNode{sym.name, {}});
        continue;
      }
      std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
      while (true) {
        PrefixNode node{sym.name, {}};
        node.children.reserve(idx.size());
        for (std::size_t i : idx) node.children.push_back(layer[i]);
        next.push_back(std::move(node));
        int pos = n - 1;
        while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == layer.size()) {
          idx[static_cast<std::size_t>(pos)] = 0;
          --pos;
        }
        if (pos < 0) break;
      }
    }
    layer = std::move(next);
  }
  std::vector<PrefixTree> out;
  out.reserve(layer.size());
  for (auto& n : layer) out.push_back(PrefixTree::node(k, std::move(n)));
  return out;
}

PrefixTree truncate(const PrefixTree& t, int k) {
  if (k < 0 || k > t.depth)
    throw Error(ErrorKind::DepthMismatch, "truncation depth out of range");
  if (k == 0) return PrefixTree::empty();
  return PrefixTree::node(k, truncate_node(*t.root, k));
}

bool is_prefix(const PrefixTree& t, const PrefixTree& s) {
  if (t.depth > s.depth)
    throw Error(ErrorKind::DepthMismatch, "prefix deeper than the tree");
  return truncate(s, t.depth) == t;
}

}  // namespace tracesim
