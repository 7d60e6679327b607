#include "tracesim/system.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tracesim {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void syntax_error(const std::string& what) {
  throw Error(ErrorKind::SyntaxError, what);
}

std::size_t state_index(const ElemSpace& space, const std::string& id) {
  if (auto i = space.find(id)) return *i;
  throw Error(ErrorKind::UnknownState, id);
}

FTerm parse_term(const Json& j, const RankedAlphabet& sigma,
                 const ElemSpace& states) {
  if (!j.is_array() || j.empty() || !j[0].is_string())
    syntax_error("a term must be an array [symbol, arg...]");
  FTerm t;
  t.symbol = j[0].get<std::string>();
  const auto n = sigma.arity(t.symbol);
  if (!n) throw Error(ErrorKind::UnknownSymbol, t.symbol);
  if (static_cast<int>(j.size()) - 1 != *n)
    throw Error(ErrorKind::ArityMismatch,
                t.symbol + " expects " + std::to_string(*n) + " arguments");
  for (std::size_t i = 1; i < j.size(); ++i) {
    if (!j[i].is_string()) syntax_error("term arguments must be state ids");
    const auto id = j[i].get<std::string>();
    state_index(states, id);  // reject dangling references
    t.args.push_back(id);
  }
  return t;
}

std::size_t term_index(const Json& j, const RankedAlphabet& sigma,
                       const ElemSpace& states, const ElemSpace& terms) {
  return *terms.find(parse_term(j, sigma, states).str());
}

Rat parse_prob(const Json& j) {
  if (!j.is_string()) syntax_error("probabilities must be \"p/q\" strings");
  Rat r;
  try {
    r = parse_rat(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    syntax_error(e.what());
  }
  return r;
}

// Reads one monad-shaped mapping (an init arrow target list or a trans row)
// as a single-row arrow over the one-point domain. `resolve` translates one
// JSON target into a cod index.
template <typename Resolve>
KleisliArrow parse_row_arrow(Monad monad, const Json& j, ElemSpace::Ptr cod,
                             Resolve resolve, const std::string& at) {
  const ElemSpace::Ptr dom = ElemSpace::point();
  switch (monad) {
    case Monad::Powerset: {
      if (!j.is_array()) syntax_error("expected an array of targets at " + at);
      KleisliArrow::SetRow row;
      for (const auto& e : j) row.insert(resolve(e));
      return KleisliArrow::powerset(dom, cod, {std::move(row)});
    }
    case Monad::SubDist: {
      if (!j.is_array())
        syntax_error("expected an array of weighted targets at " + at);
      KleisliArrow::DistRow row;
      for (const auto& e : j) {
        if (!e.is_object() || !e.contains("prob"))
          syntax_error("weighted target needs a \"prob\" field at " + at);
        const char* key = e.contains("term") ? "term"
                          : e.contains("state") ? "state" : nullptr;
        if (!key) syntax_error("weighted target needs \"term\" or \"state\"");
        row[resolve(e.at(key))] += parse_prob(e.at("prob"));
      }
      try {
        return KleisliArrow::subdist(dom, cod, {std::move(row)});
      } catch (const Error& e) {
        if (e.kind == ErrorKind::RowSumExceedsOne)
          throw Error(ErrorKind::RowSumExceedsOne, "at " + at);
        throw;
      }
    }
    case Monad::Lift: {
      KleisliArrow::LiftRow row;
      if (!j.is_null()) row = resolve(j);
      return KleisliArrow::lift(dom, cod, {row});
    }
  }
  throw std::logic_error("unreachable");
}

// Stacks single-row arrows into one arrow over `dom`.
KleisliArrow stack_rows(Monad monad, ElemSpace::Ptr dom, ElemSpace::Ptr cod,
                        const std::vector<KleisliArrow>& rows) {
  switch (monad) {
    case Monad::Powerset: {
      std::vector<KleisliArrow::SetRow> all;
      for (const auto& r : rows) all.push_back(r.set_row(0));
      return KleisliArrow::powerset(dom, cod, std::move(all));
    }
    case Monad::SubDist: {
      std::vector<KleisliArrow::DistRow> all;
      for (const auto& r : rows) all.push_back(r.dist_row(0));
      return KleisliArrow::subdist(dom, cod, std::move(all));
    }
    case Monad::Lift: {
      std::vector<KleisliArrow::LiftRow> all;
      for (const auto& r : rows) all.push_back(r.lift_row(0));
      return KleisliArrow::lift(dom, cod, std::move(all));
    }
  }
  throw std::logic_error("unreachable");
}

Json term_json(const FTerm& t) {
  Json j = Json::array();
  j.push_back(t.symbol);
  for (const auto& a : t.args) j.push_back(a);
  return j;
}

Json row_json(const System& sys, const KleisliArrow& f, std::size_t i,
              bool targets_are_terms) {
  auto target_json = [&](std::size_t j) -> Json {
    if (targets_are_terms) return term_json(sys.term_space->term(j));
    return f.cod().label(j);
  };
  switch (sys.monad) {
    case Monad::Powerset: {
      Json out = Json::array();
      for (std::size_t j : f.set_row(i)) out.push_back(target_json(j));
      return out;
    }
    case Monad::SubDist: {
      Json out = Json::array();
      for (const auto& [j, w] : f.dist_row(i)) {
        Json e;
        e[targets_are_terms ? "term" : "state"] = target_json(j);
        e["prob"] = rat_string(w);
        out.push_back(std::move(e));
      }
      return out;
    }
    case Monad::Lift: {
      const auto& row = f.lift_row(i);
      if (!row) return nullptr;
      return target_json(*row);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

System make_system(Monad monad, RankedAlphabet alphabet,
                   std::vector<std::string> states, KleisliArrow init,
                   KleisliArrow trans) {
  System sys{monad,
             std::move(alphabet),
             std::move(states),
             nullptr,
             nullptr,
             std::move(init),
             std::move(trans)};
  sys.state_space = ElemSpace::states(sys.states);
  sys.term_space = ElemSpace::terms(sys.alphabet, sys.states);
  if (sys.init.monad() != monad || sys.trans.monad() != monad)
    throw Error(ErrorKind::MonadMismatch, "arrows disagree with the system tag");
  if (!(sys.init.dom() == *ElemSpace::point()) ||
      !(sys.init.cod() == *sys.state_space))
    throw Error(ErrorKind::DomainMismatch, "init must map {*} to the states");
  if (!(sys.trans.dom() == *sys.state_space) ||
      !(sys.trans.cod() == *sys.term_space))
    throw Error(ErrorKind::DomainMismatch, "trans must map states to terms");
  return sys;
}

System parse_system(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::SyntaxError,
                "byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) syntax_error("top level must be an object");
  for (const char* field : {"monad", "alphabet", "states", "init", "trans"})
    if (!doc.contains(field)) syntax_error(std::string("missing \"") + field + "\"");

  if (!doc["monad"].is_string())
    throw Error(ErrorKind::MonadFieldInvalid, "monad must be a string");
  const auto monad = monad_from_name(doc["monad"].get<std::string>());
  if (!monad)
    throw Error(ErrorKind::MonadFieldInvalid, doc["monad"].get<std::string>());

  if (!doc["alphabet"].is_array()) syntax_error("alphabet must be an array");
  std::vector<RankedAlphabet::Symbol> entries;
  for (const auto& e : doc["alphabet"]) {
    if (!e.is_object() || !e.contains("symbol") || !e.contains("arity") ||
        !e["symbol"].is_string() || !e["arity"].is_number_integer())
      syntax_error("alphabet entries are {\"symbol\": str, \"arity\": int}");
    entries.push_back({e["symbol"].get<std::string>(), e["arity"].get<int>()});
  }
  RankedAlphabet sigma = RankedAlphabet::validate(entries);

  if (!doc["states"].is_array()) syntax_error("states must be an array");
  std::vector<std::string> states;
  for (const auto& s : doc["states"]) {
    if (!s.is_string()) syntax_error("state ids must be strings");
    states.push_back(s.get<std::string>());
  }
  auto state_space = ElemSpace::states(states);
  auto term_space = ElemSpace::terms(sigma, states);

  auto resolve_state = [&](const Json& j) -> std::size_t {
    if (!j.is_string()) syntax_error("expected a state id");
    return state_index(*state_space, j.get<std::string>());
  };
  auto resolve_term = [&](const Json& j) -> std::size_t {
    return term_index(j, sigma, *state_space, *term_space);
  };

  KleisliArrow init =
      parse_row_arrow(*monad, doc["init"], state_space, resolve_state, "init");

  if (!doc["trans"].is_object()) syntax_error("trans must be an object");
  std::vector<KleisliArrow> rows;
  for (const auto& id : states) {
    if (!doc["trans"].contains(id))
      throw Error(ErrorKind::UnknownState, "missing trans row for " + id);
    rows.push_back(
        parse_row_arrow(*monad, doc["trans"][id], term_space, resolve_term, id));
  }
  for (const auto& [key, value] : doc["trans"].items())
    if (!state_space->find(key)) throw Error(ErrorKind::UnknownState, key);

  return make_system(*monad, std::move(sigma), std::move(states),
                     std::move(init), stack_rows(*monad, state_space,
                                                 term_space, rows));
}

std::string serialize_system(const System& sys) {
  Json doc;
  doc["monad"] = monad_name(sys.monad);
  doc["alphabet"] = Json::array();
  for (const auto& s : sys.alphabet.symbols()) {
    Json e;
    e["symbol"] = s.name;
    e["arity"] = s.arity;
    doc["alphabet"].push_back(std::move(e));
  }
  doc["states"] = sys.states;
  doc["init"] = row_json(sys, sys.init, 0, /*targets_are_terms=*/false);
  doc["trans"] = Json::object();
  for (std::size_t i = 0; i < sys.states.size(); ++i)
    doc["trans"][sys.states[i]] =
        row_json(sys, sys.trans, i, /*targets_are_terms=*/true);
  return doc.dump(2) + "\n";
}

std::vector<Diagnostic> validate_system(const System& sys) {
  std::vector<Diagnostic> out;
  if (sys.init.monad() != sys.monad || sys.trans.monad() != sys.monad)
    out.push_back({ErrorKind::MonadMismatch, "",
                   "arrows do not carry the system's monad tag"});
  if (!(sys.trans.dom() == *sys.state_space))
    out.push_back({ErrorKind::DomainMismatch, "", "trans domain is not the state set"});
  if (!(sys.trans.cod() == *sys.term_space))
    out.push_back({ErrorKind::DomainMismatch, "", "trans codomain is not the term universe"});
  for (std::size_t i = 0; i < sys.term_space->size(); ++i) {
    const FTerm& t = sys.term_space->term(i);
    const auto n = sys.alphabet.arity(t.symbol);
    if (!n)
      out.push_back({ErrorKind::UnknownSymbol, t.str(), "undeclared symbol"});
    else if (static_cast<int>(t.args.size()) != *n)
      out.push_back({ErrorKind::ArityMismatch, t.str(), "malformed term"});
  }
  if (sys.monad == Monad::SubDist) {
    if (sys.init.row_mass(0) > 1)
      out.push_back({ErrorKind::RowSumExceedsOne, "*", "initial mass above one"});
    for (std::size_t i = 0; i < sys.states.size(); ++i)
      if (sys.trans.row_mass(i) > 1)
        out.push_back({ErrorKind::RowSumExceedsOne, sys.states[i],
                       "row mass above one"});
  }
  return out;
}

System load_system_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::SyntaxError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

}  // namespace tracesim
