#ifndef TRACESIM_SEMANTICS_HPP
#define TRACESIM_SEMANTICS_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tracesim/system.hpp"

namespace tracesim {

/// A [0,1]-valued assignment to the states of a system or process, carrying
/// exact rationals when every entry came from an exact shortcut and binary64
/// iterates otherwise.
struct Valuation {
  enum class Mode { Exact, Float };

  Mode mode = Mode::Exact;
  double eps = 0;  // tolerance used in Float mode
  std::vector<std::string> states;
  std::vector<Rat> exact;      // Mode::Exact
  std::vector<double> approx;  // Mode::Float
  bool converged = true;       // false: iteration hit its step bound

  double value(std::size_t i) const {
    return mode == Mode::Exact ? rat_double(exact[i]) : approx[i];
  }
};

/// A label-free population process: each type spawns a population of child
/// types with some probability, deficiencies padded by an absorbing type.
struct BranchingProcess {
  struct Entry {
    std::vector<std::size_t> population;  // indices into types
    Rat weight;
  };

  std::vector<std::string> types;  // the system's states, then the pad type
  std::size_t bottom = 0;          // index of the absorbing pad type
  std::vector<std::vector<Entry>> rows;  // each row's weights sum to one
};

enum class Verdict { Included, NotIncluded, IncludedUpToDepth };

struct InclusionWitness {
  PrefixTree tree;
  std::string word;  // symbol concatenation, set by the word procedure
  std::string lhs, rhs;
};

struct InclusionReport {
  Verdict verdict = Verdict::IncludedUpToDepth;
  int depths_checked = 0;
  std::optional<InclusionWitness> witness;  // present iff NotIncluded
};

/// States of a Powerset system with nonempty tree language, computed as the
/// greatest fixed point of "some transition has all-live successors" by
/// refinement from the full state set. Nullary transitions make a state live
/// outright.
std::set<std::string> live_states(const System& x);

/// The depth-k prefixes of the trees the system generates from `from` (or
/// from its initial states when absent): depth-k unfolding with frontier
/// restricted to live states.
std::set<PrefixTree> prefix_lang(const System& x,
                                 const std::optional<std::string>& from, int k);

/// Decides tree-language inclusion exactly for word-shaped alphabets (every
/// arity at most one) via the product of the left system's live part with the
/// determinized live part of the right one. NotIncluded carries the shortest,
/// canonically least witness word. Throws Error{NotWordMode} or
/// Error{AlphabetMismatch}.
InclusionReport word_inclusion_exact(const System& x, const System& y);

/// Compares prefix languages from the initial states at every depth up to K;
/// refutation-complete, reports IncludedUpToDepth(K) otherwise.
InclusionReport tree_inclusion_upto(const System& x, const System& y, int K);

/// Forgets labels and pads each deficient row of a SubDist system with the
/// absorbing type.
BranchingProcess skeleton(const System& x);

/// Probability that each type's population never spawns the pad type: the
/// greatest fixed point of the population polynomial, by value iteration from
/// the all-ones valuation. Exact shortcuts: types that cannot reach any pad
/// mass get exactly one; types outside the boolean survival core get exactly
/// zero.
Valuation survival(const BranchingProcess& bp, double eps = 1e-9,
                   std::uint64_t max_iter = 1000000);

struct ProbValue {
  bool exact = true;
  Rat rat;        // exact mode
  double approx;  // float mode

  double to_double() const { return exact ? rat_double(rat) : approx; }
  std::string str() const;
};

/// Measure of the cylinder of t under the tree measure of a SubDist system,
/// by structural recursion with survival probabilities at the frontier.
ProbValue cylinder_prob(const System& x, const std::optional<std::string>& from,
                        const PrefixTree& t, double eps = 1e-9);

/// Checks cylinder-wise domination from the initial distribution at every
/// depth up to K, allowing slack eps; witnesses the first failing cylinder in
/// canonical order.
InclusionReport prob_inclusion_upto(const System& x, const System& y, int K,
                                    double eps = 1e-9);

/// The depth-k prefix of the unique output tree of a Lift system from `from`,
/// or nullopt when some state reachable in the deterministic unfolding
/// aborts.
std::optional<PrefixTree> lift_output(const System& x, const std::string& from,
                                      int k);

/// Weight assigned to the prefix t by a SubDist system read as a
/// per-tree subprobability: depth-0 prefixes get 1, deeper ones multiply
/// transition weights. Exact; antitone in the depth of t.
Rat subdist_tree_prob(const System& x, const std::string& from,
                      const PrefixTree& t);

}  // namespace tracesim

#endif
