#ifndef TRACESIM_SIMULATION_HPP
#define TRACESIM_SIMULATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tracesim/system.hpp"

namespace tracesim {

enum class Direction { Forward, Backward };

/// Row-level properties of a candidate witness arrow. `total` means every
/// element has a nonempty image (full mass one for SubDist, defined for
/// Lift); `image_finite` is trivially satisfied by this finite representation
/// but reported anyway because backward soundness for nondeterminism needs
/// both.
struct RestrictionFlags {
  bool total = false;
  bool image_finite = true;
};

struct Violation {
  std::string condition;  // "init" or "step"
  std::string at;         // offending state, or "*" for the init condition
  std::string lhs, rhs;   // both sides of the failed inequality
};

struct CheckReport {
  bool verdict = false;
  std::vector<Violation> violations;
};

/// Checks whether f : Y -+-> X witnesses stepwise inclusion of x in y from
/// the front: the initial arrow of x is below f after y's, and stepping x
/// after f stays below mapping f through the term functor after stepping y.
CheckReport check_fwd(const System& x, const System& y, const KleisliArrow& f);

/// The backward counterpart for b : X -+-> Y: b after x's initial arrow is
/// below y's, and mapping b through the term functor after stepping x stays
/// below stepping y after b.
CheckReport check_bwd(const System& x, const System& y, const KleisliArrow& b);

/// Computes the restriction flags of a witness whose domain is x's state set.
RestrictionFlags check_restrictions(const System& x, const KleisliArrow& b);

/// Decision procedure for forward witnesses between Powerset systems:
/// computes the largest step-respecting relation R over Y x X by greatest-
/// fixed-point refinement from the full relation, then accepts iff the
/// initial condition holds for R. Step-respecting relations are closed under
/// union here, so the refinement is complete: it finds a witness iff one
/// exists.
std::optional<KleisliArrow> find_fwd_rel(const System& x, const System& y);

struct BwdSearchOptions {
  bool require_total = false;
  bool require_image_finite = false;
  std::uint64_t budget = 1u << 20;  // maximum number of candidate relations
};

/// Exhaustive backward-witness search for Powerset systems: enumerates
/// relations over X x Y by popcount then ascending bitmask and returns the
/// first one passing check_bwd and the requested restrictions. Backward
/// step-respecting relations are not closed under union once an arity of two
/// appears, so no refinement shortcut applies. Throws Error{BudgetExceeded}
/// when 2^(|X|*|Y|) exceeds the budget.
std::optional<KleisliArrow> find_bwd_bruteforce(const System& x,
                                                const System& y,
                                                const BwdSearchOptions& opts);

}  // namespace tracesim

#endif
