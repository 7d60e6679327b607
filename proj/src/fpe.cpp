#include "tracesim/fpe.hpp"

#include "tracesim/simulation.hpp"

namespace tracesim {

System apply_fpe(const System& x) {
  const std::vector<std::string> new_states = x.term_space->labels();
  auto new_state_space = ElemSpace::states(new_states);
  auto new_term_space = ElemSpace::terms(x.alphabet, new_states);

  // compose(trans, init) lands in the old term universe; rebuild the arrows
  // over the fresh state space (same labels, state flavor).
  const KleisliArrow raw_init = compose(x.trans, x.init);
  const KleisliArrow raw_trans = lift_to_terms(x.trans, x.alphabet);

  auto rebuild = [&](const KleisliArrow& f, ElemSpace::Ptr dom,
                     ElemSpace::Ptr cod) {
    const std::size_t n = dom->size();
    switch (f.monad()) {
      case Monad::Powerset: {
        std::vector<KleisliArrow::SetRow> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = f.set_row(i);
        return KleisliArrow::powerset(dom, cod, std::move(rows));
      }
      case Monad::SubDist: {
        std::vector<KleisliArrow::DistRow> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = f.dist_row(i);
        return KleisliArrow::subdist(dom, cod, std::move(rows));
      }
      case Monad::Lift: {
        std::vector<KleisliArrow::LiftRow> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = f.lift_row(i);
        return KleisliArrow::lift(dom, cod, std::move(rows));
      }
    }
    throw std::logic_error("unreachable");
  };

  return make_system(x.monad, x.alphabet, new_states,
                     rebuild(raw_init, ElemSpace::point(), new_state_space),
                     rebuild(raw_trans, new_state_space, new_term_space));
}

bool fpe_keeps_backward(const System& y) {
  return check_restrictions(y, y.trans).total;
}

}  // namespace tracesim
