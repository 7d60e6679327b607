#include <doctest.h>

#include <map>

#include "helpers.hpp"
#include "tracesim/semantics.hpp"

using namespace tracesim;
using tracesim::testing::Rng;
using tracesim::testing::corpus;
using tracesim::testing::random_word_powerset;
using tracesim::testing::random_word_subdist;

namespace {

std::set<std::string> tree_strings(const std::set<PrefixTree>& trees) {
  std::set<std::string> out;
  for (const auto& t : trees) out.insert(t.str());
  return out;
}

System one_state_powerset(bool dead) {
  auto sigma = RankedAlphabet::validate({{"✓", 0}, {"a", 1}});
  auto space = ElemSpace::states({"x"});
  auto terms = ElemSpace::terms(sigma, {"x"});
  KleisliArrow::SetRow row;
  if (!dead) row.insert(*terms->find("(a,x)"));
  return make_system(Monad::Powerset, sigma, {"x"},
                     KleisliArrow::powerset(ElemSpace::point(), space, {{0}}),
                     KleisliArrow::powerset(space, terms, {row}));
}

/// One-state SubDist loop: x -> (a,x) with `loop` weight, x -> stop with
/// `stop` weight; the rest of the mass aborts.
System loop_subdist(const Rat& loop, const Rat& stop) {
  auto sigma = RankedAlphabet::validate({{"✓", 0}, {"a", 1}});
  auto space = ElemSpace::states({"x"});
  auto terms = ElemSpace::terms(sigma, {"x"});
  KleisliArrow::DistRow row;
  if (loop != 0) row[*terms->find("(a,x)")] = loop;
  if (stop != 0) row[*terms->find("✓")] = stop;
  return make_system(Monad::SubDist, sigma, {"x"},
                     KleisliArrow::subdist(ElemSpace::point(), space,
                                           {{{0, Rat(1)}}}),
                     KleisliArrow::subdist(space, terms, {row}));
}

PrefixTree word_tree(const std::vector<std::string>& symbols) {
  PrefixNode node{symbols.back(), {}};
  for (auto it = std::next(symbols.rbegin()); it != symbols.rend(); ++it)
    node = PrefixNode{*it, {node}};
  return PrefixTree::node(static_cast<int>(symbols.size()), std::move(node));
}

}  // namespace

TEST_CASE("liveness as a greatest fixed point") {
  CHECK(live_states(corpus("fig1_X.sys")) ==
        std::set<std::string>{"x0", "z", "y"});
  CHECK(live_states(one_state_powerset(true)).empty());
  CHECK(live_states(one_state_powerset(false)) == std::set<std::string>{"x"});
  CHECK(live_states(corpus("a22_X.sys")) ==
        std::set<std::string>{"x0", "x1", "x2"});

  // A state whose only transition leads to a dead state is dead too.
  const char* doc = R"({"monad":"powerset",
    "alphabet":[{"symbol":"a","arity":1}],
    "states":["u","v"],
    "init":["u"],
    "trans":{"u":[["a","v"]],"v":[]}})";
  CHECK(live_states(parse_system(doc)).empty());
}

TEST_CASE("prefix languages of the drawn automaton") {
  const System x = corpus("fig1_X.sys");
  CHECK(tree_strings(prefix_lang(x, std::nullopt, 1)) ==
        std::set<std::string>{"a", "b"});
  CHECK(tree_strings(prefix_lang(x, std::nullopt, 2)) ==
        std::set<std::string>{"a(b)", "b(✓)"});
  CHECK(prefix_lang(one_state_powerset(true), std::nullopt, 1).empty());
  CHECK(prefix_lang(one_state_powerset(true), std::nullopt, 0).empty());
}

TEST_CASE("prefix languages truncate consistently") {
  Rng rng(17);
  for (int round = 0; round < 30; ++round) {
    const System sys = random_word_powerset(rng);
    for (int k = 0; k <= 3; ++k) {
      const auto shallow = prefix_lang(sys, std::nullopt, k);
      const auto deep = prefix_lang(sys, std::nullopt, k + 1);
      std::set<PrefixTree> image;
      for (const auto& t : deep) image.insert(truncate(t, k));
      CHECK(image == shallow);
    }
  }
}

TEST_CASE("exact word inclusion on the drawn automata") {
  const System x = corpus("fig1_X.sys");
  const System y = corpus("fig1_Y.sys");

  const auto xy = word_inclusion_exact(x, y);
  CHECK(xy.verdict == Verdict::NotIncluded);
  REQUIRE(xy.witness.has_value());
  CHECK(xy.witness->word == "abb");

  const auto yx = word_inclusion_exact(y, x);
  CHECK(yx.verdict == Verdict::NotIncluded);
  REQUIRE(yx.witness.has_value());
  CHECK(yx.witness->word == "aa");

  CHECK(word_inclusion_exact(x, x).verdict == Verdict::Included);

  const auto a22 = word_inclusion_exact(corpus("a22_X.sys"), corpus("a22_Y.sys"));
  CHECK(a22.verdict == Verdict::NotIncluded);
  REQUIRE(a22.witness.has_value());
  CHECK(a22.witness->word == "aa");

  CHECK(word_inclusion_exact(corpus("a23_X.sys"), corpus("a23_Y.sys")).verdict ==
        Verdict::Included);
  CHECK(word_inclusion_exact(corpus("a23_Y.sys"), corpus("a23_X.sys")).verdict ==
        Verdict::Included);
}

TEST_CASE("the word witness is least even across initial states") {
  // Two initial states that fail on different letters: the earlier-declared
  // state fails on the later letter, so naive first-found reporting would
  // return "b" instead of the least witness "a".
  const char* xs = R"({"monad":"powerset",
    "alphabet":[{"symbol":"✓","arity":0},{"symbol":"a","arity":1},{"symbol":"b","arity":1}],
    "states":["x1","x2","u"],
    "init":["x1","x2"],
    "trans":{"x1":[["b","u"]],"x2":[["a","u"]],"u":[["✓"]]}})";
  const char* ys = R"({"monad":"powerset",
    "alphabet":[{"symbol":"✓","arity":0},{"symbol":"a","arity":1},{"symbol":"b","arity":1}],
    "states":["y0"],
    "init":["y0"],
    "trans":{"y0":[["✓"]]}})";
  const System x = parse_system(xs);
  const System y = parse_system(ys);
  const auto r = word_inclusion_exact(x, y);
  CHECK(r.verdict == Verdict::NotIncluded);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->word == "a");
  const auto t = tree_inclusion_upto(x, y, 2);
  REQUIRE(t.witness.has_value());
  CHECK(t.witness->tree == r.witness->tree);
}

TEST_CASE("word inclusion rejects unsuitable inputs") {
  auto sigma = RankedAlphabet::validate({{"f", 2}});
  auto space = ElemSpace::states({"x"});
  auto terms = ElemSpace::terms(sigma, {"x"});
  const System tree =
      make_system(Monad::Powerset, sigma, {"x"},
                  KleisliArrow::powerset(ElemSpace::point(), space, {{0}}),
                  KleisliArrow::powerset(space, terms, {{}}));
  CHECK_THROWS_AS(word_inclusion_exact(tree, tree), Error);
  CHECK_THROWS_AS(word_inclusion_exact(corpus("fig1_X.sys"), corpus("a22_X.sys")),
                  Error);
}

TEST_CASE("bounded tree inclusion") {
  const System x = corpus("fig1_X.sys");
  const System y = corpus("fig1_Y.sys");

  const auto r = tree_inclusion_upto(x, y, 3);
  CHECK(r.verdict == Verdict::NotIncluded);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->tree.str() == "a(b(b))");
  CHECK(r.depths_checked == 3);

  CHECK(tree_inclusion_upto(x, y, 2).verdict == Verdict::IncludedUpToDepth);
  CHECK(tree_inclusion_upto(x, x, 4).verdict == Verdict::IncludedUpToDepth);

  // Adding transitions only enlarges the language.
  Rng rng(23);
  for (int round = 0; round < 20; ++round) {
    const System sys = random_word_powerset(rng);
    std::vector<KleisliArrow::SetRow> bigger;
    for (std::size_t i = 0; i < sys.states.size(); ++i) {
      auto row = sys.trans.set_row(i);
      row.insert(rng.below(sys.term_space->size()));
      bigger.push_back(std::move(row));
    }
    const System sup = make_system(
        sys.monad, sys.alphabet, sys.states, sys.init,
        KleisliArrow::powerset(sys.state_space, sys.term_space, std::move(bigger)));
    CHECK(tree_inclusion_upto(sys, sup, 3).verdict == Verdict::IncludedUpToDepth);
  }
}

TEST_CASE("tree languages with genuine branching") {
  // Two states over a binary symbol: u spawns (f,u,v) or stops, v only stops.
  const char* doc = R"({"monad":"powerset",
    "alphabet":[{"symbol":"✓","arity":0},{"symbol":"f","arity":2}],
    "states":["u","v"],
    "init":["u"],
    "trans":{"u":[["✓"],["f","u","v"]],"v":[["✓"]]}})";
  const System sys = parse_system(doc);

  CHECK(tree_strings(prefix_lang(sys, std::nullopt, 1)) ==
        std::set<std::string>{"✓", "f"});
  CHECK(tree_strings(prefix_lang(sys, std::nullopt, 2)) ==
        std::set<std::string>{"✓", "f(✓,✓)", "f(f,✓)"});

  CHECK(tree_inclusion_upto(sys, sys, 4).verdict == Verdict::IncludedUpToDepth);

  // Dropping the stop rule at the root shrinks the language strictly.
  const char* smaller_doc = R"({"monad":"powerset",
    "alphabet":[{"symbol":"✓","arity":0},{"symbol":"f","arity":2}],
    "states":["u","v"],
    "init":["u"],
    "trans":{"u":[["f","u","v"]],"v":[["✓"]]}})";
  const System smaller = parse_system(smaller_doc);
  CHECK(tree_inclusion_upto(smaller, sys, 3).verdict ==
        Verdict::IncludedUpToDepth);
  const auto gap = tree_inclusion_upto(sys, smaller, 3);
  CHECK(gap.verdict == Verdict::NotIncluded);
  REQUIRE(gap.witness.has_value());
  CHECK(gap.witness->tree.str() == "✓");

  // One-step execution preserves branching languages too.
  const System stepped = apply_fpe(sys);
  for (int k = 0; k <= 3; ++k)
    CHECK(prefix_lang(sys, std::nullopt, k) ==
          prefix_lang(stepped, std::nullopt, k));
}

TEST_CASE("exact word and bounded tree verdicts agree on word systems") {
  // The stabilization bound |X| * 2^|Y| + 1 grows fast and the prefix
  // languages grow exponentially in the depth, so the property population
  // stays at two states per side.
  Rng rng(29);
  for (int round = 0; round < 60; ++round) {
    const System a = random_word_powerset(rng, 2);
    const System b = random_word_powerset(rng, 2);
    const int bound =
        static_cast<int>(a.states.size() * (1u << b.states.size())) + 1;
    const auto exact = word_inclusion_exact(a, b);
    const auto bounded = tree_inclusion_upto(a, b, bound);
    if (exact.verdict == Verdict::Included)
      CHECK(bounded.verdict == Verdict::IncludedUpToDepth);
    else {
      CHECK(bounded.verdict == Verdict::NotIncluded);
      REQUIRE(exact.witness.has_value());
      REQUIRE(bounded.witness.has_value());
      CHECK(static_cast<int>(exact.witness->tree.depth) <= bound);
      // Both procedures pick the same canonical witness: the least word at
      // the first depth where the languages separate.
      CHECK(exact.witness->tree == bounded.witness->tree);
    }
  }
}

TEST_CASE("the skeleton forgets labels and pads deficiencies") {
  const System z = corpus("fig1_Z.sys");
  const BranchingProcess bp = skeleton(z);
  REQUIRE(bp.types == std::vector<std::string>{"x", "y", "z", "_|_"});

  auto weight = [&](const std::string& type, std::vector<std::string> pop) {
    std::vector<std::size_t> indices;
    for (const auto& p : pop)
      indices.push_back(static_cast<std::size_t>(
          std::find(bp.types.begin(), bp.types.end(), p) - bp.types.begin()));
    const std::size_t t = static_cast<std::size_t>(
        std::find(bp.types.begin(), bp.types.end(), type) - bp.types.begin());
    for (const auto& e : bp.rows[t])
      if (e.population == indices) return e.weight;
    return Rat(0);
  };

  CHECK(weight("x", {"z"}) == Rat(2, 3));
  CHECK(weight("x", {"y"}) == Rat(1, 3));
  CHECK(weight("y", {"y"}) == Rat(1, 2));
  CHECK(weight("y", {}) == Rat(1, 2));
  CHECK(weight("z", {"z"}) == Rat(1));  // labels b and c merge
  CHECK(weight("x", {"_|_"}) == Rat(0));
  CHECK(weight("_|_", {"_|_"}) == Rat(1));

  // Padding tops every row up to mass one.
  const System half = loop_subdist(Rat(1, 2), Rat(0));
  const BranchingProcess hbp = skeleton(half);
  Rat mass = 0;
  for (const auto& e : hbp.rows[0]) mass += e.weight;
  CHECK(mass == Rat(1));
  bool has_pad = false;
  for (const auto& e : hbp.rows[0])
    if (e.population == std::vector<std::size_t>{hbp.bottom})
      has_pad = e.weight == Rat(1, 2);
  CHECK(has_pad);
}

TEST_CASE("survival probabilities") {
  SUBCASE("stochastic rows survive surely, exactly") {
    const Valuation v = survival(skeleton(corpus("fig1_Z.sys")));
    REQUIRE(v.mode == Valuation::Mode::Exact);
    for (const auto& r : v.exact) CHECK(r == Rat(1));
  }

  SUBCASE("a fair abort loop dies") {
    const Valuation v = survival(skeleton(loop_subdist(Rat(1, 2), Rat(0))));
    REQUIRE(v.mode == Valuation::Mode::Float);
    CHECK(v.converged);
    CHECK(v.approx[0] == doctest::Approx(0.0).epsilon(1e-8));
  }

  SUBCASE("loop with escape hits the interior fixed point") {
    const Valuation v =
        survival(skeleton(loop_subdist(Rat(1, 2), Rat(1, 4))));
    REQUIRE(v.mode == Valuation::Mode::Float);
    CHECK(v.approx[0] == doctest::Approx(0.5).epsilon(1e-8));
  }

  SUBCASE("all-dead subprocesses are exactly zero") {
    // Every row carries pad mass only.
    const System dead = loop_subdist(Rat(0), Rat(0));
    const Valuation v = survival(skeleton(dead));
    REQUIRE(v.mode == Valuation::Mode::Exact);
    CHECK(v.exact[0] == Rat(0));
  }

  SUBCASE("adding pad mass never raises survival") {
    Rng rng(31);
    for (int round = 0; round < 25; ++round) {
      const System sys = random_word_subdist(rng, false);
      BranchingProcess bp = skeleton(sys);
      // Shift half of one positive non-pad entry onto the pad type.
      bool shifted = false;
      for (auto& row : bp.rows) {
        for (auto& e : row) {
          if (shifted || e.weight == 0) continue;
          if (e.population == std::vector<std::size_t>{bp.bottom}) continue;
          const Rat delta = e.weight / 2;
          e.weight -= delta;
          bool padded = false;
          for (auto& other : row)
            if (other.population == std::vector<std::size_t>{bp.bottom}) {
              other.weight += delta;
              padded = true;
            }
          if (!padded) row.push_back({{bp.bottom}, delta});
          shifted = true;
        }
        if (shifted) break;
      }
      if (!shifted) continue;
      const Valuation before = survival(skeleton(sys));
      const Valuation after = survival(bp);
      for (std::size_t i = 0; i < before.states.size(); ++i)
        CHECK(after.value(i) <= before.value(i) + 1e-9);
    }
  }
}

TEST_CASE("cylinder measures of the drawn probabilistic pair") {
  const System z = corpus("fig1_Z.sys");
  const System w = corpus("fig1_W.sys");

  auto exact = [](const ProbValue& v) {
    REQUIRE(v.exact);
    return v.rat;
  };

  CHECK(exact(cylinder_prob(z, std::nullopt, word_tree({"b", "✓"}))) ==
        Rat(1, 6));
  CHECK(exact(cylinder_prob(z, std::nullopt, word_tree({"b", "a", "✓"}))) ==
        Rat(1, 12));
  CHECK(exact(cylinder_prob(z, std::nullopt, word_tree({"b", "a", "a", "✓"}))) ==
        Rat(1, 24));
  CHECK(exact(cylinder_prob(z, std::nullopt, word_tree({"a"}))) == Rat(2, 3));

  CHECK(exact(cylinder_prob(w, std::nullopt, word_tree({"b", "✓"}))) ==
        Rat(1, 2));
  CHECK(exact(cylinder_prob(w, std::nullopt, word_tree({"b", "a", "✓"}))) ==
        Rat(1, 4));
  CHECK(exact(cylinder_prob(w, std::nullopt, word_tree({"b", "a", "a", "✓"}))) ==
        Rat(1, 8));
  CHECK(exact(cylinder_prob(w, std::nullopt, word_tree({"a"}))) == Rat(0));

  CHECK(exact(cylinder_prob(z, std::nullopt, PrefixTree::empty())) == Rat(1));
}

TEST_CASE("cylinder-wise domination") {
  const System z = corpus("fig1_Z.sys");
  const System w = corpus("fig1_W.sys");

  const auto zw = prob_inclusion_upto(z, w, 1);
  CHECK(zw.verdict == Verdict::NotIncluded);
  REQUIRE(zw.witness.has_value());
  CHECK(zw.witness->tree.str() == "a");
  CHECK(zw.witness->lhs == "2/3");
  CHECK(zw.witness->rhs == "0/1");

  CHECK(prob_inclusion_upto(z, w, 3).verdict == Verdict::NotIncluded);
  CHECK(prob_inclusion_upto(w, w, 3).verdict == Verdict::IncludedUpToDepth);
}

TEST_CASE("sums over one-step extensions are conserved") {
  Rng rng(37);
  int tested = 0;
  for (int round = 0; round < 40; ++round) {
    const System sys = random_word_subdist(rng, true);
    for (int k = 0; k <= 3; ++k)
      for (const auto& t : prefix_trees_upto(sys.alphabet, k)) {
        const ProbValue vt = cylinder_prob(sys, std::nullopt, t);
        REQUIRE(vt.exact);
        Rat sum = 0;
        for (const auto& s : prefix_trees_upto(sys.alphabet, k + 1)) {
          if (!is_prefix(t, s)) continue;
          const ProbValue vs = cylinder_prob(sys, std::nullopt, s);
          REQUIRE(vs.exact);
          sum += vs.rat;
        }
        CHECK(sum == vt.rat);
        ++tested;
      }
  }
  CHECK(tested > 100);
}

TEST_CASE("outputs of aborting systems") {
  const char* doc = R"({"monad":"lift",
    "alphabet":[{"symbol":"✓","arity":0},{"symbol":"a","arity":1}],
    "states":["x","y","w"],
    "init":"x",
    "trans":{"x":["a","x"],"y":["a","w"],"w":null}})";
  const System sys = parse_system(doc);

  const auto loop = lift_output(sys, "x", 3);
  REQUIRE(loop.has_value());
  CHECK(loop->str() == "a(a(a))");
  CHECK_FALSE(lift_output(sys, "y", 3).has_value());
  CHECK_FALSE(lift_output(sys, "w", 1).has_value());

  const char* stop_doc = R"({"monad":"lift",
    "alphabet":[{"symbol":"✓","arity":0},{"symbol":"a","arity":1}],
    "states":["x"],
    "init":"x",
    "trans":{"x":["✓"]}})";
  const auto stop = lift_output(parse_system(stop_doc), "x", 2);
  REQUIRE(stop.has_value());
  CHECK(stop->str() == "✓");
}

TEST_CASE("per-tree weights") {
  const System half = loop_subdist(Rat(1, 2), Rat(0));
  CHECK(subdist_tree_prob(half, "x", PrefixTree::empty()) == Rat(1));
  for (int k = 1; k <= 5; ++k) {
    std::vector<std::string> word(static_cast<std::size_t>(k), "a");
    Rat expected = 1;
    for (int i = 0; i < k; ++i) expected /= 2;
    CHECK(subdist_tree_prob(half, "x", word_tree(word)) == expected);
  }

  // A sure chain weights its own prefixes with one, everything else zero.
  const System sure = loop_subdist(Rat(1), Rat(0));
  CHECK(subdist_tree_prob(sure, "x", word_tree({"a", "a"})) == Rat(1));
  CHECK(subdist_tree_prob(sure, "x", word_tree({"✓"})) == Rat(0));

  SUBCASE("weights are antitone in depth") {
    Rng rng(41);
    for (int round = 0; round < 30; ++round) {
      const System sys = random_word_subdist(rng, false);
      for (const auto& deep : prefix_trees_upto(sys.alphabet, 4)) {
        Rat prev = subdist_tree_prob(sys, sys.states[0], truncate(deep, 0));
        for (int k = 1; k <= 4; ++k) {
          const Rat cur = subdist_tree_prob(sys, sys.states[0], truncate(deep, k));
          CHECK(cur <= prev);
          prev = cur;
        }
      }
    }
  }
}
