#ifndef TRACESIM_KLEISLI_HPP
#define TRACESIM_KLEISLI_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tracesim/rational.hpp"
#include "tracesim/signature.hpp"

namespace tracesim {

enum class Monad { Powerset, SubDist, Lift };

const char* monad_name(Monad m);
std::optional<Monad> monad_from_name(const std::string& name);

/// A finite, ordered universe of elements an arrow can map between: either a
/// set of plain ids (states, or the one-point domain used by initial arrows)
/// or the set of all terms over an alphabet and a base id list.
class ElemSpace {
 public:
  using Ptr = std::shared_ptr<const ElemSpace>;

  static Ptr states(std::vector<std::string> ids);
  static Ptr point();  // the one-point space {*}
  static Ptr terms(const RankedAlphabet& sigma, std::vector<std::string> base);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  std::optional<std::size_t> find(const std::string& label) const;

  bool is_term_space() const { return !terms_.empty() || term_space_flag_; }
  const FTerm& term(std::size_t i) const { return terms_[i]; }
  const std::vector<std::string>& base() const { return base_; }

  /// Spaces are equal when they list the same labels in the same order.
  friend bool operator==(const ElemSpace& a, const ElemSpace& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, std::size_t> index_;
  std::vector<FTerm> terms_;   // parallel to labels_ for term spaces
  std::vector<std::string> base_;
  bool term_space_flag_ = false;
};

/// A finite-support arrow of the Kleisli category for one of the three
/// branching monads. Rows are indexed by dom positions; row entries index cod.
class KleisliArrow {
 public:
  using SetRow = std::set<std::size_t>;
  using DistRow = std::map<std::size_t, Rat>;
  using LiftRow = std::optional<std::size_t>;

  static KleisliArrow powerset(ElemSpace::Ptr dom, ElemSpace::Ptr cod,
                               std::vector<SetRow> rows);
  static KleisliArrow subdist(ElemSpace::Ptr dom, ElemSpace::Ptr cod,
                              std::vector<DistRow> rows);
  static KleisliArrow lift(ElemSpace::Ptr dom, ElemSpace::Ptr cod,
                           std::vector<LiftRow> rows);

  Monad monad() const;
  const ElemSpace& dom() const { return *dom_; }
  const ElemSpace& cod() const { return *cod_; }
  ElemSpace::Ptr dom_ptr() const { return dom_; }
  ElemSpace::Ptr cod_ptr() const { return cod_; }

  const SetRow& set_row(std::size_t i) const;
  const DistRow& dist_row(std::size_t i) const;
  const LiftRow& lift_row(std::size_t i) const;

  /// Total mass of a SubDist row (0 for absent entries).
  Rat row_mass(std::size_t i) const;

  friend bool operator==(const KleisliArrow& a, const KleisliArrow& b);

 private:
  ElemSpace::Ptr dom_, cod_;
  std::variant<std::vector<SetRow>, std::vector<DistRow>, std::vector<LiftRow>>
      rows_;
};

/// Kleisli composition g after f. Requires equal monads and cod(f) = dom(g).
/// Powerset composes relationally, SubDist as an exact matrix product, Lift
/// strictly (an undefined intermediate value makes the composite undefined).
KleisliArrow compose(const KleisliArrow& g, const KleisliArrow& f);

/// Embeds the plain function i -> h(i) as an arrow: singleton images for
/// Powerset, point masses for SubDist, a defined-everywhere row for Lift.
KleisliArrow unit_arrow(ElemSpace::Ptr dom, ElemSpace::Ptr cod,
                        const std::function<std::size_t(std::size_t)>& h,
                        Monad monad);

KleisliArrow identity_arrow(ElemSpace::Ptr space, Monad monad);

struct LeqResult {
  bool holds = true;
  // On failure: the dom element where the order breaks, with both rows printed.
  std::string witness, lhs, rhs;
};

/// The pointwise order on arrows: inclusion of images (Powerset), pointwise
/// weight comparison (SubDist), "undefined or equal" (Lift).
LeqResult leq(const KleisliArrow& f, const KleisliArrow& g);

/// Applies the transition-type functor of `sigma` to a state arrow
/// f : X -+-> Y, giving the term arrow F f : FX -+-> FY. A term (a,x0..xn-1)
/// maps componentwise: choice sets multiply out for Powerset, weights multiply
/// for SubDist, and Lift is defined only when every component is. Nullary
/// terms map to the unit at themselves.
KleisliArrow lift_to_terms(const KleisliArrow& f, const RankedAlphabet& sigma);

/// Greatest lower bound of a pointwise-decreasing sequence of finite
/// valuations; with exact entries this is just the last element. Throws
/// Error{NotDecreasing} when the sequence is empty or not decreasing.
std::vector<Rat> meet_decreasing(const std::vector<std::vector<Rat>>& seq);

/// Renders one row of an arrow in canonical form, e.g. "{(a,z),(b,y)}",
/// "[x->1/2]", "y" or "_|_".
std::string row_string(const KleisliArrow& f, std::size_t i);

}  // namespace tracesim

#endif
