#ifndef TRACESIM_TESTS_HELPERS_HPP
#define TRACESIM_TESTS_HELPERS_HPP

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tracesim/fpe.hpp"
#include "tracesim/semantics.hpp"
#include "tracesim/simulation.hpp"
#include "tracesim/system.hpp"

namespace tracesim::testing {

inline std::string corpus_path(const std::string& name) {
  return std::string(TRACESIM_CORPUS_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline System corpus(const std::string& name) {
  return load_system_file(corpus_path(name));
}

/// splitmix64: tiny deterministic generator, stable across platforms.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // In [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  bool chance(double p) { return static_cast<double>(next() >> 11) / 9007199254740992.0 < p; }
};

inline std::vector<std::string> state_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("s" + std::to_string(i));
  return out;
}

/// Random word-shaped Powerset system over {stop:0, a:1, b:1}-like alphabets.
inline System random_word_powerset(Rng& rng, std::size_t max_states = 4,
                                   std::size_t letters = 2) {
  std::vector<RankedAlphabet::Symbol> symbols = {{"v", 0}};
  for (std::size_t i = 0; i < letters; ++i)
    symbols.push_back({std::string(1, static_cast<char>('a' + i)), 1});
  auto sigma = RankedAlphabet::validate(symbols);

  const std::size_t n = 1 + rng.below(max_states);
  const auto states = state_names(n);
  auto space = ElemSpace::states(states);
  auto terms = ElemSpace::terms(sigma, states);

  std::vector<KleisliArrow::SetRow> rows(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < terms->size(); ++j)
      if (rng.chance(0.3)) rows[i].insert(j);

  KleisliArrow::SetRow init;
  for (std::size_t i = 0; i < n; ++i)
    if (rng.chance(0.5)) init.insert(i);
  if (init.empty()) init.insert(0);

  return make_system(Monad::Powerset, sigma, states,
                     KleisliArrow::powerset(ElemSpace::point(), space, {init}),
                     KleisliArrow::powerset(space, terms, std::move(rows)));
}

/// Random SubDist system over a word-shaped alphabet; rows sum to exactly one
/// when `stochastic`, and to at most one otherwise. Weights are k/d for a
/// small fixed denominator, so everything stays exact.
inline System random_word_subdist(Rng& rng, bool stochastic,
                                  std::size_t max_states = 3,
                                  std::size_t letters = 2) {
  std::vector<RankedAlphabet::Symbol> symbols = {{"v", 0}};
  for (std::size_t i = 0; i < letters; ++i)
    symbols.push_back({std::string(1, static_cast<char>('a' + i)), 1});
  auto sigma = RankedAlphabet::validate(symbols);

  const std::size_t n = 1 + rng.below(max_states);
  const auto states = state_names(n);
  auto space = ElemSpace::states(states);
  auto terms = ElemSpace::terms(sigma, states);

  const std::uint64_t denom = 8;
  std::vector<KleisliArrow::DistRow> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t left = stochastic ? denom : rng.below(denom + 1);
    while (left > 0) {
      const std::size_t j = rng.below(terms->size());
      const std::uint64_t take = 1 + rng.below(left);
      rows[i][j] += Rat(take, denom);
      left -= take;
    }
  }

  KleisliArrow::DistRow init;
  std::uint64_t left = denom;
  while (left > 0) {
    const std::size_t i = rng.below(n);
    const std::uint64_t take = 1 + rng.below(left);
    init[i] += Rat(take, denom);
    left -= take;
  }

  return make_system(Monad::SubDist, sigma, states,
                     KleisliArrow::subdist(ElemSpace::point(), space, {init}),
                     KleisliArrow::subdist(space, terms, std::move(rows)));
}

/// Random small arrow between the given spaces.
inline KleisliArrow random_arrow(Rng& rng, Monad monad, ElemSpace::Ptr dom,
                                 ElemSpace::Ptr cod) {
  const std::size_t n = dom->size(), m = cod->size();
  switch (monad) {
    case Monad::Powerset: {
      std::vector<KleisliArrow::SetRow> rows(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
          if (rng.chance(0.4)) rows[i].insert(j);
      return KleisliArrow::powerset(dom, cod, std::move(rows));
    }
    case Monad::SubDist: {
      const std::uint64_t denom = 6;
      std::vector<KleisliArrow::DistRow> rows(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t left = rng.below(denom + 1);
        while (left > 0 && m > 0) {
          const std::size_t j = rng.below(m);
          const std::uint64_t take = 1 + rng.below(left);
          rows[i][j] += Rat(take, denom);
          left -= take;
        }
      }
      return KleisliArrow::subdist(dom, cod, std::move(rows));
    }
    case Monad::Lift: {
      std::vector<KleisliArrow::LiftRow> rows(n);
      for (std::size_t i = 0; i < n; ++i)
        if (m > 0 && rng.chance(0.7)) rows[i] = rng.below(m);
      return KleisliArrow::lift(dom, cod, std::move(rows));
    }
  }
  throw std::logic_error("unreachable");
}

/// A random arrow below f in the pointwise order (shrinks images / weights).
inline KleisliArrow shrink_arrow(Rng& rng, const KleisliArrow& f) {
  const std::size_t n = f.dom().size();
  switch (f.monad()) {
    case Monad::Powerset: {
      std::vector<KleisliArrow::SetRow> rows(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j : f.set_row(i))
          if (rng.chance(0.7)) rows[i].insert(j);
      return KleisliArrow::powerset(f.dom_ptr(), f.cod_ptr(), std::move(rows));
    }
    case Monad::SubDist: {
      std::vector<KleisliArrow::DistRow> rows(n);
      for (std::size_t i = 0; i < n; ++i)
        for (const auto& [j, w] : f.dist_row(i)) {
          const Rat r = Rat(rng.below(3), 2);  // 0, 1/2 or keep
          rows[i][j] = r < 1 ? w * r : w;
        }
      return KleisliArrow::subdist(f.dom_ptr(), f.cod_ptr(), std::move(rows));
    }
    case Monad::Lift: {
      std::vector<KleisliArrow::LiftRow> rows(n);
      for (std::size_t i = 0; i < n; ++i)
        if (f.lift_row(i) && rng.chance(0.7)) rows[i] = f.lift_row(i);
      return KleisliArrow::lift(f.dom_ptr(), f.cod_ptr(), std::move(rows));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace tracesim::testing

#endif
