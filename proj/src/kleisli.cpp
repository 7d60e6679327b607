#include "tracesim/kleisli.hpp"

#include <algorithm>

#include "tracesim/error.hpp"

namespace tracesim {

const char* monad_name(Monad m) {
  switch (m) {
    case Monad::Powerset: return "powerset";
    case Monad::SubDist: return "subdist";
    case Monad::Lift: return "lift";
  }
  return "?";
}

std::optional<Monad> monad_from_name(const std::string& name) {
  if (name == "powerset") return Monad::Powerset;
  if (name == "subdist") return Monad::SubDist;
  if (name == "lift") return Monad::Lift;
  return std::nullopt;
}

ElemSpace::Ptr ElemSpace::states(std::vector<std::string> ids) {
  auto sp = std::make_shared<ElemSpace>();
  sp->labels_ = std::move(ids);
  for (std::size_t i = 0; i < sp->labels_.size(); ++i)
    if (!sp->index_.emplace(sp->labels_[i], i).second)
      throw Error(ErrorKind::UnknownState, "duplicate id " + sp->labels_[i]);
  return sp;
}

ElemSpace::Ptr ElemSpace::point() {
  static const Ptr instance = states({"*"});
  return instance;
}

ElemSpace::Ptr ElemSpace::terms(const RankedAlphabet& sigma,
                                std::vector<std::string> base) {
  auto sp = std::make_shared<ElemSpace>();
  sp->term_space_flag_ = true;
  sp->base_ = base;
  sp->terms_ = enumerate_fterms(sigma, base);
  sp->labels_.reserve(sp->terms_.size());
  for (std::size_t i = 0; i < sp->terms_.size(); ++i) {
    sp->labels_.push_back(sp->terms_[i].str());
    sp->index_.emplace(sp->labels_[i], i);
  }
  return sp;
}

std::optional<std::size_t> ElemSpace::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

void check_dims(std::size_t rows, std::size_t dom_size) {
  if (rows != dom_size)
    throw Error(ErrorKind::DomainMismatch, "row count does not match domain");
}

}  // namespace

KleisliArrow KleisliArrow::powerset(ElemSpace::Ptr dom, ElemSpace::Ptr cod,
                                    std::vector<SetRow> rows) {
  check_dims(rows.size(), dom->size());
  KleisliArrow f;
  f.dom_ = std::move(dom);
  f.cod_ = std::move(cod);
  for (const auto& row : rows)
    for (std::size_t j : row)
      if (j >= f.cod_->size())
        throw Error(ErrorKind::DomainMismatch, "image index out of range");
  f.rows_ = std::move(rows);
  return f;
}

KleisliArrow KleisliArrow::subdist(ElemSpace::Ptr dom, ElemSpace::Ptr cod,
                                   std::vector<DistRow> rows) {
  check_dims(rows.size(), dom->size());
  KleisliArrow f;
  f.dom_ = std::move(dom);
  f.cod_ = std::move(cod);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Rat mass = 0;
    for (auto it = rows[i].begin(); it != rows[i].end();) {
      if (it->first >= f.cod_->size())
        throw Error(ErrorKind::DomainMismatch, "image index out of range");
      if (it->second < 0 || it->second > 1)
        throw Error(ErrorKind::RowSumExceedsOne,
                    "weight outside [0,1] at " + f.dom_->label(i));
      mass += it->second;
      if (it->second == 0)
        it = rows[i].erase(it);  // keep rows sparse and canonical
      else
        ++it;
    }
    if (mass > 1)
      throw Error(ErrorKind::RowSumExceedsOne,
                  "row mass " + rat_string(mass) + " at " + f.dom_->label(i));
  }
  f.rows_ = std::move(rows);
  return f;
}

KleisliArrow KleisliArrow::lift(ElemSpace::Ptr dom, ElemSpace::Ptr cod,
                                std::vector<LiftRow> rows) {
  check_dims(rows.size(), dom->size());
  KleisliArrow f;
  f.dom_ = std::move(dom);
  f.cod_ = std::move(cod);
  for (const auto& row : rows)
    if (row && *row >= f.cod_->size())
      throw Error(ErrorKind::DomainMismatch, "image index out of range");
  f.rows_ = std::move(rows);
  return f;
}

Monad KleisliArrow::monad() const {
  switch (rows_.index()) {
    case 0: return Monad::Powerset;
    case 1: return Monad::SubDist;
    default: return Monad::Lift;
  }
}

const KleisliArrow::SetRow& KleisliArrow::set_row(std::size_t i) const {
  return std::get<std::vector<SetRow>>(rows_)[i];
}

const KleisliArrow::DistRow& KleisliArrow::dist_row(std::size_t i) const {
  return std::get<std::vector<DistRow>>(rows_)[i];
}

const KleisliArrow::LiftRow& KleisliArrow::lift_row(std::size_t i) const {
  return std::get<std::vector<LiftRow>>(rows_)[i];
}

Rat KleisliArrow::row_mass(std::size_t i) const {
  Rat mass = 0;
  for (const auto& [j, w] : dist_row(i)) mass += w;
  return mass;
}

bool operator==(const KleisliArrow& a, const KleisliArrow& b) {
  return a.monad() == b.monad() && *a.dom_ == *b.dom_ && *a.cod_ == *b.cod_ &&
         a.rows_ == b.rows_;
}

namespace {

void check_composable(const KleisliArrow& g, const KleisliArrow& f) {
  if (g.monad() != f.monad())
    throw Error(ErrorKind::MonadMismatch, "cannot compose across monads");
  if (!(f.cod() == g.dom()))
    throw Error(ErrorKind::DomainMismatch, "cod(f) differs from dom(g)");
}

}  // namespace

KleisliArrow compose(const KleisliArrow& g, const KleisliArrow& f) {
  check_composable(g, f);
  const std::size_t n = f.dom().size();
  switch (f.monad()) {
    case Monad::Powerset: {
      std::vector<KleisliArrow::SetRow> rows(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j : f.set_row(i)) {
          const auto& gj = g.set_row(j);
          rows[i].insert(gj.begin(), gj.end());
        }
      return KleisliArrow::powerset(f.dom_ptr(), g.cod_ptr(), std::move(rows));
    }
    case Monad::SubDist: {
      std::vector<KleisliArrow::DistRow> rows(n);
      for (std::size_t i = 0; i < n; ++i)
        for (const auto& [j, w] : f.dist_row(i))
          for (const auto& [k, v] : g.dist_row(j)) rows[i][k] += w * v;
      return KleisliArrow::subdist(f.dom_ptr(), g.cod_ptr(), std::move(rows));
    }
    case Monad::Lift: {
      std::vector<KleisliArrow::LiftRow> rows(n);
      for (std::size_t i = 0; i < n; ++i)
        if (const auto& mid = f.lift_row(i)) rows[i] = g.lift_row(*mid);
      return KleisliArrow::lift(f.dom_ptr(), g.cod_ptr(), std::move(rows));
    }
  }
  throw std::logic_error("unreachable");
}

KleisliArrow unit_arrow(ElemSpace::Ptr dom, ElemSpace::Ptr cod,
                        const std::function<std::size_t(std::size_t)>& h,
                        Monad monad) {
  const std::size_t n = dom->size();
  switch (monad) {
    case Monad::Powerset: {
      std::vector<KleisliArrow::SetRow> rows(n);
      for (std::size_t i = 0; i < n; ++i) rows[i].insert(h(i));
      return KleisliArrow::powerset(std::move(dom), std::move(cod), std::move(rows));
    }
    case Monad::SubDist: {
      std::vector<KleisliArrow::DistRow> rows(n);
      for (std::size_t i = 0; i < n; ++i) rows[i][h(i)] = 1;
      return KleisliArrow::subdist(std::move(dom), std::move(cod), std::move(rows));
    }
    case Monad::Lift: {
      std::vector<KleisliArrow::LiftRow> rows(n);
      for (std::size_t i = 0; i < n; ++i) rows[i] = h(i);
      return KleisliArrow::lift(std::move(dom), std::move(cod), std::move(rows));
    }
  }
  throw std::logic_error("unreachable");
}

KleisliArrow identity_arrow(ElemSpace::Ptr space, Monad monad) {
  return unit_arrow(space, space, [](std::size_t i) { return i; }, monad);
}

LeqResult leq(const KleisliArrow& f, const KleisliArrow& g) {
  if (f.monad() != g.monad())
    throw Error(ErrorKind::MonadMismatch, "cannot order across monads");
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod()))
    throw Error(ErrorKind::DomainMismatch, "ordered arrows need equal ends");
  const std::size_t n = f.dom().size();
  auto fail = [&](std::size_t i) {
    LeqResult r;
    r.holds = false;
    r.witness = f.dom().label(i);
    r.lhs = row_string(f, i);
    r.rhs = row_string(g, i);
    return r;
  };
  for (std::size_t i = 0; i < n; ++i) {
    switch (f.monad()) {
      case Monad::Powerset:
        if (!std::includes(g.set_row(i).begin(), g.set_row(i).end(),
                           f.set_row(i).begin(), f.set_row(i).end()))
          return fail(i);
        break;
      case Monad::SubDist:
        for (const auto& [j, w] : f.dist_row(i)) {
          auto it = g.dist_row(i).find(j);
          const Rat bound = it == g.dist_row(i).end() ? Rat(0) : it->second;
          if (w > bound) return fail(i);
        }
        break;
      case Monad::Lift: {
        const auto& lhs = f.lift_row(i);
        if (lhs && lhs != g.lift_row(i)) return fail(i);
        break;
      }
    }
  }
  return LeqResult{};
}

KleisliArrow lift_to_terms(const KleisliArrow& f, const RankedAlphabet& sigma) {
  const auto dom = ElemSpace::terms(sigma, f.dom().labels());
  const auto cod = ElemSpace::terms(sigma, f.cod().labels());
  const std::size_t n = dom->size();

  auto cod_index = [&](const std::string& symbol,
                       const std::vector<std::size_t>& args) {
    FTerm t;
    t.symbol = symbol;
    t.args.reserve(args.size());
    for (std::size_t a : args) t.args.push_back(f.cod().label(a));
    return *cod->find(t.str());
  };

  switch (f.monad()) {
    case Monad::Powerset: {
      std::vector<KleisliArrow::SetRow> rows(n);
      for (std::size_t i = 0; i < n; ++i) {
        const FTerm& t = dom->term(i);
        // Product of the componentwise choice sets, built left to right.
        std::vector<std::vector<std::size_t>> acc = {{}};
        for (const auto& a : t.args) {
          const auto& row = f.set_row(*f.dom().find(a));
          std::vector<std::vector<std::size_t>> next;
          for (const auto& tuple : acc)
            for (std::size_t j : row) {
              auto extended = tuple;
              extended.push_back(j);
              next.push_back(std::move(extended));
            }
          acc = std::move(next);
        }
        for (const auto& tuple : acc) rows[i].insert(cod_index(t.symbol, tuple));
      }
      return KleisliArrow::powerset(dom, cod, std::move(rows));
    }
    case Monad::SubDist: {
      std::vector<KleisliArrow::DistRow> rows(n);
      for (std::size_t i = 0; i < n; ++i) {
        const FTerm& t = dom->term(i);
        // Accumulate (argument tuple, product weight) pairs left to right.
        std::vector<std::pair<std::vector<std::size_t>, Rat>> acc = {
            {{}, Rat(1)}};
        for (const auto& a : t.args) {
          const auto& row = f.dist_row(*f.dom().find(a));
          std::vector<std::pair<std::vector<std::size_t>, Rat>> next;
          for (const auto& [tuple, w] : acc)
            for (const auto& [j, v] : row) {
              auto extended = tuple;
              extended.push_back(j);
              next.emplace_back(std::move(extended), w * v);
            }
          acc = std::move(next);
        }
        for (const auto& [tuple, w] : acc) rows[i][cod_index(t.symbol, tuple)] += w;
      }
      return KleisliArrow::subdist(dom, cod, std::move(rows));
    }
    case Monad::Lift: {
      std::vector<KleisliArrow::LiftRow> rows(n);
      for (std::size_t i = 0; i < n; ++i) {
        const FTerm& t = dom->term(i);
        std::vector<std::size_t> args;
        bool defined = true;
        for (const auto& a : t.args) {
          const auto& row = f.lift_row(*f.dom().find(a));
          if (!row) { defined = false; break; }
          args.push_back(*row);
        }
        if (defined) rows[i] = cod_index(t.symbol, args);
      }
      return KleisliArrow::lift(dom, cod, std::move(rows));
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<Rat> meet_decreasing(const std::vector<std::vector<Rat>>& seq) {
  if (seq.empty()) throw Error(ErrorKind::NotDecreasing, "empty sequence");
  for (std::size_t s = 1; s < seq.size(); ++s) {
    if (seq[s].size() != seq[0].size())
      throw Error(ErrorKind::NotDecreasing, "ragged sequence");
    for (std::size_t i = 0; i < seq[s].size(); ++i)
      if (seq[s][i] > seq[s - 1][i])
        throw Error(ErrorKind::NotDecreasing,
                    "increase at position " + std::to_string(i));
  }
  return seq.back();
}

std::string row_string(const KleisliArrow& f, std::size_t i) {
  switch (f.monad()) {
    case Monad::Powerset: {
      std::string out = "{";
      bool first = true;
      for (std::size_t j : f.set_row(i)) {
        if (!first) out += ',';
        out += f.cod().label(j);
        first = false;
      }
      return out + "}";
    }
    case Monad::SubDist: {
      std::string out = "[";
      bool first = true;
      for (const auto& [j, w] : f.dist_row(i)) {
        if (!first) out += ',';
        out += f.cod().label(j) + "->" + rat_string(w);
        first = false;
      }
      return out + "]";
    }
    case Monad::Lift: {
      const auto& row = f.lift_row(i);
      return row ? f.cod().label(*row) : "_|_";
    }
  }
  return "?";
}

}  // namespace tracesim
