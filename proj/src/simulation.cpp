#include "tracesim/simulation.hpp"

#include <algorithm>

#include "tracesim/error.hpp"

namespace tracesim {

namespace {

void require_powerset(const System& sys, const char* what) {
  if (sys.monad != Monad::Powerset)
    throw Error(ErrorKind::MonadMismatch,
                std::string(what) + " handles powerset systems only");
}

/// Collects every domain element where f exceeds g, not just the first.
void collect_violations(CheckReport& report, const char* condition,
                        const KleisliArrow& f, const KleisliArrow& g) {
  for (std::size_t i = 0; i < f.dom().size(); ++i) {
    bool below = true;
    switch (f.monad()) {
      case Monad::Powerset:
        below = std::includes(g.set_row(i).begin(), g.set_row(i).end(),
                              f.set_row(i).begin(), f.set_row(i).end());
        break;
      case Monad::SubDist:
        for (const auto& [j, w] : f.dist_row(i)) {
          auto it = g.dist_row(i).find(j);
          if (w > (it == g.dist_row(i).end() ? Rat(0) : it->second)) {
            below = false;
            break;
          }
        }
        break;
      case Monad::Lift: {
        const auto& lhs = f.lift_row(i);
        below = !lhs || lhs == g.lift_row(i);
        break;
      }
    }
    if (!below)
      report.violations.push_back(
          {condition, f.dom().label(i), row_string(f, i), row_string(g, i)});
  }
}

}  // namespace

CheckReport check_fwd(const System& x, const System& y, const KleisliArrow& f) {
  if (x.monad != y.monad || f.monad() != x.monad)
    throw Error(ErrorKind::MonadMismatch, "mixed monads in check_fwd");
  if (!(f.dom() == *y.state_space) || !(f.cod() == *x.state_space))
    throw Error(ErrorKind::DomainMismatch,
                "a forward witness maps the right states to the left ones");
  CheckReport report;
  collect_violations(report, "init", x.init, compose(f, y.init));
  collect_violations(report, "step", compose(x.trans, f),
                     compose(lift_to_terms(f, x.alphabet), y.trans));
  report.verdict = report.violations.empty();
  return report;
}

CheckReport check_bwd(const System& x, const System& y, const KleisliArrow& b) {
  if (x.monad != y.monad || b.monad() != x.monad)
    throw Error(ErrorKind::MonadMismatch, "mixed monads in check_bwd");
  if (!(b.dom() == *x.state_space) || !(b.cod() == *y.state_space))
    throw Error(ErrorKind::DomainMismatch,
                "a backward witness maps the left states to the right ones");
  CheckReport report;
  collect_violations(report, "init", compose(b, x.init), y.init);
  collect_violations(report, "step",
                     compose(lift_to_terms(b, x.alphabet), x.trans),
                     compose(y.trans, b));
  report.verdict = report.violations.empty();
  return report;
}

RestrictionFlags check_restrictions(const System& x, const KleisliArrow& b) {
  if (b.monad() != x.monad)
    throw Error(ErrorKind::MonadMismatch, "witness monad differs from the system");
  if (!(b.dom() == *x.state_space))
    throw Error(ErrorKind::DomainMismatch, "witness domain is not the state set");
  RestrictionFlags flags;
  flags.total = true;
  flags.image_finite = true;  // finite rows by representation
  for (std::size_t i = 0; i < b.dom().size(); ++i) {
    switch (b.monad()) {
      case Monad::Powerset:
        if (b.set_row(i).empty()) flags.total = false;
        break;
      case Monad::SubDist:
        if (b.row_mass(i) != 1) flags.total = false;
        break;
      case Monad::Lift:
        if (!b.lift_row(i)) flags.total = false;
        break;
    }
  }
  return flags;
}

std::optional<KleisliArrow> find_fwd_rel(const System& x, const System& y) {
  require_powerset(x, "find_fwd_rel");
  require_powerset(y, "find_fwd_rel");
  const std::size_t nx = x.states.size(), ny = y.states.size();

  // rel[q][p]: q in Y simulates p in X so far.
  std::vector<std::vector<bool>> rel(ny, std::vector<bool>(nx, true));

  // Successor views of both transition structures, indexed by state.
  struct Step {
    const FTerm* term;
    std::vector<std::size_t> args;
  };
  auto steps_of = [](const System& sys) {
    std::vector<std::vector<Step>> out(sys.states.size());
    for (std::size_t i = 0; i < sys.states.size(); ++i)
      for (std::size_t j : sys.trans.set_row(i)) {
        Step st;
        st.term = &sys.term_space->term(j);
        for (const auto& a : st.term->args)
          st.args.push_back(*sys.state_space->find(a));
        out[i].push_back(std::move(st));
      }
    return out;
  };
  const auto steps_x = steps_of(x);
  const auto steps_y = steps_of(y);

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t q = 0; q < ny; ++q)
      for (std::size_t p = 0; p < nx; ++p) {
        if (!rel[q][p]) continue;
        bool ok = true;
        for (const Step& sx : steps_x[p]) {
          bool matched = false;
          for (const Step& sy : steps_y[q]) {
            if (sy.term->symbol != sx.term->symbol) continue;
            bool all = true;
            for (std::size_t i = 0; i < sx.args.size(); ++i)
              if (!rel[sy.args[i]][sx.args[i]]) { all = false; break; }
            if (all) { matched = true; break; }
          }
          if (!matched) { ok = false; break; }
        }
        if (!ok) {
          rel[q][p] = false;
          changed = true;
        }
      }
  }

  std::vector<KleisliArrow::SetRow> rows(ny);
  for (std::size_t q = 0; q < ny; ++q)
    for (std::size_t p = 0; p < nx; ++p)
      if (rel[q][p]) rows[q].insert(p);
  auto f = KleisliArrow::powerset(y.state_space, x.state_space, std::move(rows));
  if (!leq(x.init, compose(f, y.init)).holds) return std::nullopt;
  return f;
}

namespace {

/// Bit-level backward-step checker used inside the brute-force enumeration.
/// Semantics match check_bwd on Powerset systems; the equivalence is covered
/// by tests.
class BwdMaskChecker {
 public:
  BwdMaskChecker(const System& x, const System& y) : x_(x), y_(y) {
    ny_ = y.states.size();
    for (std::size_t i : x.init.set_row(0)) init_x_.push_back(i);
    init_y_ = 0;
    for (std::size_t j : y.init.set_row(0)) init_y_ |= 1ull << j;
    // d(q) indexed by term position in Y's term universe.
    d_.resize(ny_);
    for (std::size_t q = 0; q < ny_; ++q)
      for (std::size_t j : y.trans.set_row(q)) d_[q].insert(j);
  }

  bool passes(std::uint64_t mask) const {
    // Initial condition: the image of every initial X state lies in t(*).
    for (std::size_t i : init_x_)
      if ((row(mask, i) & ~init_y_) != 0) return false;
    // Step condition, term by term.
    for (std::size_t p = 0; p < x_.states.size(); ++p) {
      std::set<std::size_t> allowed;  // term indices of the union of d over b(p)
      std::uint64_t image = row(mask, p);
      for (std::size_t q = 0; q < ny_; ++q)
        if (image & (1ull << q)) allowed.insert(d_[q].begin(), d_[q].end());
      for (std::size_t j : x_.trans.set_row(p)) {
        const FTerm& term = x_.term_space->term(j);
        // Every componentwise relabeling of the term must be allowed.
        std::vector<std::uint64_t> arg_images;
        bool empty = false;
        for (const auto& a : term.args) {
          std::uint64_t im = row(mask, *x_.state_space->find(a));
          if (!im) { empty = true; break; }
          arg_images.push_back(im);
        }
        if (empty) continue;  // no relabeling exists
        std::vector<std::size_t> choice(arg_images.size(), 0);
        std::vector<std::vector<std::size_t>> options(arg_images.size());
        for (std::size_t i = 0; i < arg_images.size(); ++i)
          for (std::size_t q = 0; q < ny_; ++q)
            if (arg_images[i] & (1ull << q)) options[i].push_back(q);
        while (true) {
          FTerm relabeled;
          relabeled.symbol = term.symbol;
          for (std::size_t i = 0; i < choice.size(); ++i)
            relabeled.args.push_back(y_.states[options[i][choice[i]]]);
          auto idx = y_.term_space->find(relabeled.str());
          if (!idx || !allowed.count(*idx)) return false;
          std::size_t pos = choice.size();
          while (pos > 0 && ++choice[pos - 1] == options[pos - 1].size())
            choice[--pos] = 0;
          if (pos == 0) break;
        }
      }
    }
    return true;
  }

 private:
  std::uint64_t row(std::uint64_t mask, std::size_t p) const {
    return (mask >> (p * ny_)) & ((ny_ == 64 ? ~0ull : (1ull << ny_) - 1));
  }

  const System& x_;
  const System& y_;
  std::size_t ny_;
  std::vector<std::size_t> init_x_;
  std::uint64_t init_y_;
  std::vector<std::set<std::size_t>> d_;
};

std::uint64_t next_same_popcount(std::uint64_t v) {
  // Gosper's hack.
  std::uint64_t c = v & -v;
  std::uint64_t r = v + c;
  return r | (((v ^ r) >> 2) / c);
}

}  // namespace

std::optional<KleisliArrow> find_bwd_bruteforce(const System& x,
                                                const System& y,
                                                const BwdSearchOptions& opts) {
  require_powerset(x, "find_bwd_bruteforce");
  require_powerset(y, "find_bwd_bruteforce");
  const std::size_t bits = x.states.size() * y.states.size();
  if (bits >= 63 || (1ull << bits) > opts.budget)
    throw Error(ErrorKind::BudgetExceeded,
                "relation space larger than the search budget");

  BwdMaskChecker checker(x, y);
  auto arrow_of = [&](std::uint64_t mask) {
    std::vector<KleisliArrow::SetRow> rows(x.states.size());
    for (std::size_t p = 0; p < x.states.size(); ++p)
      for (std::size_t q = 0; q < y.states.size(); ++q)
        if (mask & (1ull << (p * y.states.size() + q))) rows[p].insert(q);
    return KleisliArrow::powerset(x.state_space, y.state_space, std::move(rows));
  };
  auto admissible = [&](std::uint64_t mask) {
    if (!opts.require_total) return true;
    for (std::size_t p = 0; p < x.states.size(); ++p) {
      std::uint64_t row = (mask >> (p * y.states.size())) &
                          ((1ull << y.states.size()) - 1);
      if (y.states.empty() || row == 0) return false;
    }
    return true;
  };

  const std::uint64_t total = 1ull << bits;
  for (std::size_t pop = 0; pop <= bits; ++pop) {
    std::uint64_t mask = pop == 0 ? 0 : (1ull << pop) - 1;
    while (true) {
      if (admissible(mask) && checker.passes(mask)) {
        auto b = arrow_of(mask);
        // image_finite holds by representation; totality was filtered above.
        return b;
      }
      if (pop == 0 || mask == 0) break;
      std::uint64_t next = next_same_popcount(mask);
      if (next >= total) break;
      mask = next;
    }
  }
  return std::nullopt;
}

}  // namespace tracesim
