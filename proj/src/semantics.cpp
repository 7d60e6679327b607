#include "tracesim/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>

#include "tracesim/error.hpp"

namespace tracesim {

namespace {

void require_monad(const System& sys, Monad m, const char* what) {
  if (sys.monad != m)
    throw Error(ErrorKind::MonadMismatch,
                std::string(what) + " needs a " + monad_name(m) + " system");
}

void require_same_alphabet(const System& x, const System& y) {
  if (!(x.alphabet == y.alphabet))
    throw Error(ErrorKind::AlphabetMismatch, "systems use different alphabets");
}

std::size_t state_index(const System& sys, const std::string& id) {
  if (auto i = sys.state_space->find(id)) return *i;
  throw Error(ErrorKind::UnknownState, id);
}

/// Symbol rank in the canonical (arity, name) order.
std::pair<int, std::string> symbol_rank(const RankedAlphabet& sigma,
                                        const std::string& name) {
  return {sigma.arity(name).value_or(0), name};
}

bool node_less(const RankedAlphabet& sigma, const PrefixNode& a,
               const PrefixNode& b) {
  const auto ra = symbol_rank(sigma, a.symbol), rb = symbol_rank(sigma, b.symbol);
  if (ra != rb) return ra < rb;
  for (std::size_t i = 0; i < std::min(a.children.size(), b.children.size());
       ++i) {
    if (node_less(sigma, a.children[i], b.children[i])) return true;
    if (node_less(sigma, b.children[i], a.children[i])) return false;
  }
  return a.children.size() < b.children.size();
}

bool tree_less(const RankedAlphabet& sigma, const PrefixTree& a,
               const PrefixTree& b) {
  if (a.depth != b.depth) return a.depth < b.depth;
  if (!a.root || !b.root) return !a.root && b.root;
  return node_less(sigma, *a.root, *b.root);
}

/// The i'th immediate subtree of a nonempty prefix tree, one level shallower.
PrefixTree subtree(const PrefixTree& t, std::size_t i) {
  if (t.depth <= 1) return PrefixTree::empty();
  return PrefixTree::node(t.depth - 1, t.root->children[i]);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string ProbValue::str() const {
  return exact ? rat_string(rat) : format_double(approx);
}

std::set<std::string> live_states(const System& x) {
  require_monad(x, Monad::Powerset, "live_states");
  const std::size_t n = x.states.size();
  std::vector<bool> live(n, true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!live[i]) continue;
      bool ok = false;
      for (std::size_t j : x.trans.set_row(i)) {
        const FTerm& t = x.term_space->term(j);
        bool all_live = true;
        for (const auto& a : t.args)
          if (!live[*x.state_space->find(a)]) { all_live = false; break; }
        if (all_live) { ok = true; break; }
      }
      if (!ok) {
        live[i] = false;
        changed = true;
      }
    }
  }
  std::set<std::string> out;
  for (std::size_t i = 0; i < n; ++i)
    if (live[i]) out.insert(x.states[i]);
  return out;
}

namespace {

/// Depth-k unfolding restricted to live frontiers, memoized per (state, k).
class PrefixUnfolder {
 public:
  explicit PrefixUnfolder(const System& x)
      : x_(x), live_(live_states(x)) {}

  const std::set<PrefixTree>& lang(std::size_t state, int k) {
    auto key = std::make_pair(state, k);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::set<PrefixTree> out;
    if (k == 0) {
      if (live_.count(x_.states[state])) out.insert(PrefixTree::empty());
    } else {
      for (std::size_t j : x_.trans.set_row(state)) {
        const FTerm& t = x_.term_space->term(j);
        std::vector<PrefixNode> partial = {PrefixNode{t.symbol, {}}};
        for (const auto& arg : t.args) {
          const auto& sub = lang(*x_.state_space->find(arg), k - 1);
          std::vector<PrefixNode> next;
          for (const auto& p : partial)
            for (const auto& s : sub) {
              PrefixNode q = p;
              if (k > 1) q.children.push_back(*s.root);
              next.push_back(std::move(q));
            }
          partial = std::move(next);
          if (partial.empty()) break;
        }
        for (auto& p : partial) out.insert(PrefixTree::node(k, std::move(p)));
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  const System& x_;
  std::set<std::string> live_;
  std::map<std::pair<std::size_t, int>, std::set<PrefixTree>> memo_;
};

}  // namespace

std::set<PrefixTree> prefix_lang(const System& x,
                                 const std::optional<std::string>& from,
                                 int k) {
  require_monad(x, Monad::Powerset, "prefix_lang");
  if (k < 0) throw Error(ErrorKind::DepthMismatch, "negative depth");
  PrefixUnfolder unfolder(x);
  std::set<PrefixTree> out;
  if (from) {
    const auto& sub = unfolder.lang(state_index(x, *from), k);
    out.insert(sub.begin(), sub.end());
  } else {
    for (std::size_t i : x.init.set_row(0)) {
      const auto& sub = unfolder.lang(i, k);
      out.insert(sub.begin(), sub.end());
    }
  }
  return out;
}

namespace {

PrefixTree word_to_tree(const std::vector<std::string>& word) {
  if (word.empty()) return PrefixTree::empty();
  PrefixNode node{word.back(), {}};
  for (auto it = std::next(word.rbegin()); it != word.rend(); ++it)
    node = PrefixNode{*it, {node}};
  return PrefixTree::node(static_cast<int>(word.size()), std::move(node));
}

std::string join_word(const std::vector<std::string>& word) {
  std::string out;
  for (const auto& s : word) out += s;
  return out;
}

}  // namespace

InclusionReport word_inclusion_exact(const System& x, const System& y) {
  require_monad(x, Monad::Powerset, "word_inclusion_exact");
  require_monad(y, Monad::Powerset, "word_inclusion_exact");
  require_same_alphabet(x, y);
  if (!x.alphabet.word_mode())
    throw Error(ErrorKind::NotWordMode, "an arity above one is present");

  const auto live_x = live_states(x);
  const auto live_y = live_states(y);

  // Per-state successor tables over live states, keyed by symbol.
  struct StepTable {
    std::map<std::string, std::set<std::size_t>> letter;  // arity-1 successors
    std::set<std::string> stops;                          // nullary symbols
  };
  auto tabulate = [](const System& sys, const std::set<std::string>& live) {
    std::vector<StepTable> t(sys.states.size());
    for (std::size_t i = 0; i < sys.states.size(); ++i)
      for (std::size_t j : sys.trans.set_row(i)) {
        const FTerm& term = sys.term_space->term(j);
        if (term.args.empty()) {
          t[i].stops.insert(term.symbol);
        } else if (live.count(term.args[0])) {
          t[i].letter[term.symbol].insert(*sys.state_space->find(term.args[0]));
        }
      }
    return t;
  };
  const auto step_x = tabulate(x, live_x);
  const auto step_y = tabulate(y, live_y);

  std::set<std::size_t> start_y;
  for (std::size_t i : y.init.set_row(0))
    if (live_y.count(y.states[i])) start_y.insert(i);

  InclusionReport report;
  report.verdict = Verdict::Included;

  // Position-wise word order under the canonical (arity, name) symbol rank;
  // only same-length words are ever compared.
  auto word_less = [&](const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
      const auto ra = symbol_rank(x.alphabet, a[i]);
      const auto rb = symbol_rank(x.alphabet, b[i]);
      if (ra != rb) return ra < rb;
    }
    return a.size() < b.size();
  };
  auto fail = [&](std::vector<std::string> word) {
    report.verdict = Verdict::NotIncluded;
    InclusionWitness w;
    w.word = join_word(word);
    w.tree = word_to_tree(word);
    w.lhs = "a live run exists";
    w.rhs = "no live run";
    report.witness = std::move(w);
    report.depths_checked = static_cast<int>(word.size());
  };

  struct Node {
    std::size_t state;
    std::set<std::size_t> macro;
    std::vector<std::string> word;
  };
  std::vector<Node> level;
  std::set<std::pair<std::size_t, std::set<std::size_t>>> visited;
  for (std::size_t i : x.init.set_row(0)) {
    if (!live_x.count(x.states[i])) continue;
    if (start_y.empty()) {
      fail({});
      return report;
    }
    if (visited.emplace(i, start_y).second) level.push_back({i, start_y, {}});
  }

  // The witness must be the least failing word. A level can fail on several
  // different words at once (distinct nodes, distinct letters), and freshly
  // discovered pairs can be reached by several words of the same length, so
  // each level is drained completely, keeping the least word per pair, before
  // anything is reported.
  int depth = 0;
  while (!level.empty()) {
    ++depth;
    std::optional<std::vector<std::string>> least_fail;
    auto consider = [&](const Node& node, const std::string& symbol) {
      auto word = node.word;
      word.push_back(symbol);
      if (!least_fail || word_less(word, *least_fail)) least_fail = std::move(word);
    };
    std::map<std::pair<std::size_t, std::set<std::size_t>>,
             std::vector<std::string>>
        discovered;  // fresh pair -> least word of this length reaching it
    for (const Node& node : level) {
      for (const auto& sym : x.alphabet.symbols()) {
        if (sym.arity == 0) {
          if (!step_x[node.state].stops.count(sym.name)) continue;
          bool matched = false;
          for (std::size_t yi : node.macro)
            if (step_y[yi].stops.count(sym.name)) { matched = true; break; }
          if (!matched) consider(node, sym.name);
        } else {
          auto it = step_x[node.state].letter.find(sym.name);
          if (it == step_x[node.state].letter.end()) continue;
          std::set<std::size_t> next_macro;
          for (std::size_t yi : node.macro) {
            auto jt = step_y[yi].letter.find(sym.name);
            if (jt != step_y[yi].letter.end())
              next_macro.insert(jt->second.begin(), jt->second.end());
          }
          if (next_macro.empty()) {
            consider(node, sym.name);
            continue;
          }
          for (std::size_t xi : it->second) {
            auto key = std::make_pair(xi, next_macro);
            if (visited.count(key)) continue;
            auto word = node.word;
            word.push_back(sym.name);
            auto [slot, fresh] = discovered.try_emplace(key, word);
            if (!fresh && word_less(word, slot->second))
              slot->second = std::move(word);
          }
        }
      }
    }
    if (least_fail) {
      fail(std::move(*least_fail));
      return report;
    }
    std::vector<Node> next;
    for (auto& [key, word] : discovered) {
      visited.insert(key);
      next.push_back({key.first, key.second, std::move(word)});
    }
    level = std::move(next);
  }
  report.depths_checked = depth;
  return report;
}

InclusionReport tree_inclusion_upto(const System& x, const System& y, int K) {
  require_monad(x, Monad::Powerset, "tree_inclusion_upto");
  require_monad(y, Monad::Powerset, "tree_inclusion_upto");
  require_same_alphabet(x, y);
  InclusionReport report;
  report.depths_checked = K;
  for (int k = 0; k <= K; ++k) {
    const auto lx = prefix_lang(x, std::nullopt, k);
    const auto ly = prefix_lang(y, std::nullopt, k);
    std::vector<PrefixTree> gap;
    std::set_difference(lx.begin(), lx.end(), ly.begin(), ly.end(),
                        std::back_inserter(gap));
    if (gap.empty()) continue;
    auto least = std::min_element(gap.begin(), gap.end(),
                                  [&](const PrefixTree& a, const PrefixTree& b) {
                                    return tree_less(x.alphabet, a, b);
                                  });
    report.verdict = Verdict::NotIncluded;
    report.depths_checked = k;
    InclusionWitness w;
    w.tree = *least;
    w.lhs = "in lhs prefix language";
    w.rhs = "missing from rhs prefix language";
    report.witness = std::move(w);
    return report;
  }
  report.verdict = Verdict::IncludedUpToDepth;
  return report;
}

BranchingProcess skeleton(const System& x) {
  require_monad(x, Monad::SubDist, "skeleton");
  BranchingProcess bp;
  bp.types = x.states;
  bp.types.push_back("_|_");
  bp.bottom = bp.types.size() - 1;
  bp.rows.resize(bp.types.size());
  for (std::size_t i = 0; i < x.states.size(); ++i) {
    std::map<std::vector<std::size_t>, Rat> merged;
    Rat mass = 0;
    for (const auto& [j, w] : x.trans.dist_row(i)) {
      const FTerm& t = x.term_space->term(j);
      std::vector<std::size_t> population;
      population.reserve(t.args.size());
      for (const auto& a : t.args)
        population.push_back(*x.state_space->find(a));
      merged[population] += w;
      mass += w;
    }
    if (mass < 1) merged[{bp.bottom}] += 1 - mass;
    for (auto& [population, w] : merged)
      bp.rows[i].push_back({population, w});
  }
  bp.rows[bp.bottom].push_back({{bp.bottom}, Rat(1)});
  return bp;
}

namespace {

bool population_has(const std::vector<std::size_t>& population, std::size_t t) {
  return std::find(population.begin(), population.end(), t) != population.end();
}

/// Types from which no row carrying pad mass is reachable.
std::vector<bool> pad_free(const BranchingProcess& bp) {
  const std::size_t n = bp.types.size();
  // reach[u] = types reachable from u through positive-weight populations.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t u = 0; u < n; ++u) {
    std::deque<std::size_t> queue = {u};
    reach[u][u] = true;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (const auto& e : bp.rows[v]) {
        if (e.weight == 0) continue;
        for (std::size_t w : e.population)
          if (!reach[u][w]) {
            reach[u][w] = true;
            queue.push_back(w);
          }
      }
    }
  }
  std::vector<bool> out(n, true);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n && out[u]; ++v) {
      if (!reach[u][v]) continue;
      for (const auto& e : bp.rows[v])
        if (e.weight > 0 && population_has(e.population, bp.bottom)) {
          out[u] = false;
          break;
        }
    }
  return out;
}

/// Boolean survival core: greatest set S with, for each member, some positive
/// pad-free row whose whole population lies in S. Types outside S have
/// survival probability exactly zero.
std::vector<bool> survival_core(const BranchingProcess& bp) {
  const std::size_t n = bp.types.size();
  std::vector<bool> core(n, true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t u = 0; u < n; ++u) {
      if (!core[u]) continue;
      bool ok = false;
      for (const auto& e : bp.rows[u]) {
        if (e.weight == 0 || population_has(e.population, bp.bottom)) continue;
        bool all = true;
        for (std::size_t w : e.population)
          if (!core[w]) { all = false; break; }
        if (all) { ok = true; break; }
      }
      if (!ok) {
        core[u] = false;
        changed = true;
      }
    }
  }
  return core;
}

}  // namespace

Valuation survival(const BranchingProcess& bp, double eps,
                   std::uint64_t max_iter) {
  if (eps <= 0) throw std::invalid_argument("tolerance must be positive");
  if (bp.bottom + 1 != bp.types.size())
    throw std::invalid_argument("the pad type must be listed last");
  const std::size_t n = bp.types.size();
  const auto free = pad_free(bp);
  const auto core = survival_core(bp);

  std::vector<bool> pinned(n, false);
  std::vector<double> v(n, 1.0);
  std::vector<Rat> exact(n, Rat(1));
  for (std::size_t u = 0; u < n; ++u) {
    if (free[u]) {
      pinned[u] = true;  // stays at exactly one
    } else if (!core[u]) {
      pinned[u] = true;
      v[u] = 0.0;
      exact[u] = 0;
    }
  }

  bool all_pinned = std::all_of(pinned.begin(), pinned.end(),
                                [](bool b) { return b; });
  Valuation val;
  val.states.assign(bp.types.begin(), bp.types.end() - 1);

  if (all_pinned) {
    val.mode = Valuation::Mode::Exact;
    val.exact.assign(exact.begin(), exact.end() - 1);
    return val;
  }

  bool converged = false;
  for (std::uint64_t it = 0; it < max_iter && !converged; ++it) {
    double delta = 0;
    std::vector<double> next = v;
    for (std::size_t u = 0; u < n; ++u) {
      if (pinned[u]) continue;
      double sum = 0;
      for (const auto& e : bp.rows[u]) {
        if (population_has(e.population, bp.bottom)) continue;
        double prod = rat_double(e.weight);
        for (std::size_t w : e.population) prod *= v[w];
        sum += prod;
      }
      next[u] = sum;
      delta = std::max(delta, std::abs(v[u] - sum));
    }
    v = std::move(next);
    converged = delta < eps;
  }

  val.mode = Valuation::Mode::Float;
  val.eps = eps;
  val.converged = converged;
  val.approx.assign(v.begin(), v.end() - 1);
  return val;
}

namespace {

/// Evaluates cylinder measures of one SubDist system, reusing one survival
/// valuation across queries.
class CylinderEvaluator {
 public:
  CylinderEvaluator(const System& x, double eps)
      : x_(x), surv_(survival(skeleton(x), eps)) {}

  bool exact() const { return surv_.mode == Valuation::Mode::Exact; }

  Rat eval_exact(std::size_t state, const PrefixTree& t) {
    if (t.depth == 0) return surv_.exact[state];
    const int n = *x_.alphabet.arity(t.root->symbol);
    Rat sum = 0;
    for (const auto& [j, w] : x_.trans.dist_row(state)) {
      const FTerm& term = x_.term_space->term(j);
      if (term.symbol != t.root->symbol) continue;
      Rat prod = w;
      for (int i = 0; i < n && prod != 0; ++i)
        prod *= eval_exact(*x_.state_space->find(term.args[i]),
                           subtree(t, static_cast<std::size_t>(i)));
      sum += prod;
    }
    return sum;
  }

  double eval_float(std::size_t state, const PrefixTree& t) {
    if (t.depth == 0) return surv_.value(state);
    const int n = *x_.alphabet.arity(t.root->symbol);
    double sum = 0;
    for (const auto& [j, w] : x_.trans.dist_row(state)) {
      const FTerm& term = x_.term_space->term(j);
      if (term.symbol != t.root->symbol) continue;
      double prod = rat_double(w);
      for (int i = 0; i < n; ++i)
        prod *= eval_float(*x_.state_space->find(term.args[i]),
                           subtree(t, static_cast<std::size_t>(i)));
      sum += prod;
    }
    return sum;
  }

  ProbValue from(const std::optional<std::string>& from, const PrefixTree& t) {
    ProbValue out;
    out.exact = exact();
    if (from) {
      const std::size_t i = state_index(x_, *from);
      if (out.exact)
        out.rat = eval_exact(i, t);
      else
        out.approx = eval_float(i, t);
      return out;
    }
    if (out.exact) {
      Rat sum = 0;
      for (const auto& [i, w] : x_.init.dist_row(0)) sum += w * eval_exact(i, t);
      out.rat = sum;
    } else {
      double sum = 0;
      for (const auto& [i, w] : x_.init.dist_row(0))
        sum += rat_double(w) * eval_float(i, t);
      out.approx = sum;
    }
    return out;
  }

 private:
  const System& x_;
  Valuation surv_;
};

/// All depth-k trees reachable through positive-weight transitions from the
/// initial distribution, canonically ordered. Cylinders outside this support
/// have measure zero and cannot break domination.
std::vector<PrefixTree> support_trees(const System& x, int k) {
  std::map<std::pair<std::size_t, int>, std::set<PrefixTree>> memo;
  std::function<const std::set<PrefixTree>&(std::size_t, int)> go =
      [&](std::size_t state, int depth) -> const std::set<PrefixTree>& {
    auto key = std::make_pair(state, depth);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::set<PrefixTree> out;
    if (depth == 0) {
      out.insert(PrefixTree::empty());
    } else {
      for (const auto& [j, w] : x.trans.dist_row(state)) {
        const FTerm& term = x.term_space->term(j);
        std::vector<PrefixNode> partial = {PrefixNode{term.symbol, {}}};
        for (const auto& arg : term.args) {
          const auto& sub = go(*x.state_space->find(arg), depth - 1);
          std::vector<PrefixNode> next;
          for (const auto& p : partial)
            for (const auto& s : sub) {
              PrefixNode q = p;
              if (depth > 1) q.children.push_back(*s.root);
              next.push_back(std::move(q));
            }
          partial = std::move(next);
        }
        for (auto& p : partial) out.insert(PrefixTree::node(depth, std::move(p)));
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };
  std::set<PrefixTree> all;
  for (const auto& [i, w] : x.init.dist_row(0)) {
    const auto& sub = go(i, k);
    all.insert(sub.begin(), sub.end());
  }
  std::vector<PrefixTree> out(all.begin(), all.end());
  std::sort(out.begin(), out.end(), [&](const PrefixTree& a, const PrefixTree& b) {
    return tree_less(x.alphabet, a, b);
  });
  return out;
}

}  // namespace

ProbValue cylinder_prob(const System& x, const std::optional<std::string>& from,
                        const PrefixTree& t, double eps) {
  require_monad(x, Monad::SubDist, "cylinder_prob");
  CylinderEvaluator eval(x, eps);
  return eval.from(from, t);
}

InclusionReport prob_inclusion_upto(const System& x, const System& y, int K,
                                    double eps) {
  require_monad(x, Monad::SubDist, "prob_inclusion_upto");
  require_monad(y, Monad::SubDist, "prob_inclusion_upto");
  require_same_alphabet(x, y);
  // Cylinders are compared with slack eps; the survival iterations behind the
  // values run three orders tighter so their own error cannot eat the slack.
  const double inner = std::max(eps * 1e-3, 1e-15);
  CylinderEvaluator ex(x, inner), ey(y, inner);
  InclusionReport report;
  report.depths_checked = K;
  for (int k = 0; k <= K; ++k) {
    for (const PrefixTree& t : support_trees(x, k)) {
      const ProbValue lhs = ex.from(std::nullopt, t);
      const ProbValue rhs = ey.from(std::nullopt, t);
      bool dominated;
      if (lhs.exact && rhs.exact)
        dominated = lhs.rat <= rhs.rat + Rat(eps);
      else
        dominated = lhs.to_double() <= rhs.to_double() + eps;
      if (!dominated) {
        report.verdict = Verdict::NotIncluded;
        report.depths_checked = k;
        InclusionWitness w;
        w.tree = t;
        w.lhs = lhs.str();
        w.rhs = rhs.str();
        report.witness = std::move(w);
        return report;
      }
    }
  }
  report.verdict = Verdict::IncludedUpToDepth;
  return report;
}

std::optional<PrefixTree> lift_output(const System& x, const std::string& from,
                                      int k) {
  require_monad(x, Monad::Lift, "lift_output");
  if (k < 0) throw Error(ErrorKind::DepthMismatch, "negative depth");
  const std::size_t start = state_index(x, from);

  // Any abort reachable in the unfolding poisons the whole output.
  std::deque<std::size_t> queue = {start};
  std::set<std::size_t> seen = {start};
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    const auto& row = x.trans.lift_row(i);
    if (!row) return std::nullopt;
    for (const auto& a : x.term_space->term(*row).args) {
      std::size_t j = *x.state_space->find(a);
      if (seen.insert(j).second) queue.push_back(j);
    }
  }

  if (k == 0) return PrefixTree::empty();
  std::function<PrefixNode(std::size_t, int)> unfold =
      [&](std::size_t state, int levels) {
        const FTerm& t = x.term_space->term(*x.trans.lift_row(state));
        PrefixNode node{t.symbol, {}};
        if (levels > 1)
          for (const auto& a : t.args)
            node.children.push_back(unfold(*x.state_space->find(a), levels - 1));
        return node;
      };
  return PrefixTree::node(k, unfold(start, k));
}

Rat subdist_tree_prob(const System& x, const std::string& from,
                      const PrefixTree& t) {
  require_monad(x, Monad::SubDist, "subdist_tree_prob");
  std::function<Rat(std::size_t, const PrefixTree&)> xi =
      [&](std::size_t state, const PrefixTree& u) -> Rat {
    if (u.depth == 0) return 1;
    const int n = *x.alphabet.arity(u.root->symbol);
    Rat sum = 0;
    for (const auto& [j, w] : x.trans.dist_row(state)) {
      const FTerm& term = x.term_space->term(j);
      if (term.symbol != u.root->symbol) continue;
      Rat prod = w;
      for (int i = 0; i < n && prod != 0; ++i)
        prod *= xi(*x.state_space->find(term.args[i]),
                   subtree(u, static_cast<std::size_t>(i)));
      sum += prod;
    }
    return sum;
  };
  return xi(state_index(x, from), t);
}

}  // namespace tracesim
