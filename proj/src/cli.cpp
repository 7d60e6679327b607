#include "tracesim/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tracesim/error.hpp"
#include "tracesim/fpe.hpp"
#include "tracesim/semantics.hpp"
#include "tracesim/simulation.hpp"

namespace tracesim {

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::SyntaxError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Included: return "Included";
    case Verdict::NotIncluded: return "NotIncluded";
    case Verdict::IncludedUpToDepth: return "IncludedUpToDepth";
  }
  return "?";
}

Json witness_json(const InclusionWitness& w) {
  Json j;
  j["tree"] = w.tree.str();
  if (!w.word.empty() || w.tree.depth == 0) j["word"] = w.word;
  j["lhs"] = w.lhs;
  j["rhs"] = w.rhs;
  return j;
}

Json report_base(const std::string& command) {
  Json j;
  j["command"] = command;
  return j;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

int verdict_exit(Verdict v) { return v == Verdict::NotIncluded ? 1 : 0; }

/// Bounded output comparison for Lift systems: outputs must be equal unless
/// the left one aborts.
InclusionReport lift_inclusion_upto(const System& x, const System& y, int K) {
  if (!(x.alphabet == y.alphabet))
    throw Error(ErrorKind::AlphabetMismatch, "systems use different alphabets");
  InclusionReport report;
  report.depths_checked = K;
  report.verdict = Verdict::IncludedUpToDepth;
  const auto& sx = x.init.lift_row(0);
  if (!sx) return report;  // aborting output is below everything
  const auto& sy = y.init.lift_row(0);
  for (int k = 0; k <= K; ++k) {
    const auto lhs = lift_output(x, x.states[*sx], k);
    if (!lhs) return report;
    const auto rhs = sy ? lift_output(y, y.states[*sy], k) : std::nullopt;
    if (!rhs || !(*lhs == *rhs)) {
      report.verdict = Verdict::NotIncluded;
      report.depths_checked = k;
      InclusionWitness w;
      w.tree = *lhs;
      w.lhs = lhs->str();
      w.rhs = rhs ? rhs->str() : "_|_";
      report.witness = std::move(w);
      return report;
    }
  }
  return report;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const System sys = parse_system(read_file(path));
  const auto diagnostics = validate_system(sys);
  Json j = report_base("validate");
  j["verdict"] = diagnostics.empty();
  j["diagnostics"] = Json::array();
  for (const auto& d : diagnostics) {
    Json e;
    e["kind"] = error_kind_name(d.kind);
    e["at"] = d.at;
    e["message"] = d.message;
    j["diagnostics"].push_back(std::move(e));
  }
  emit(out, j);
  return diagnostics.empty() ? 0 : 1;
}

int cmd_check_sim(const std::string& dir, const std::string& witness_path,
                  const std::string& xp, const std::string& yp,
                  std::ostream& out) {
  const System x = parse_system(read_file(xp));
  const System y = parse_system(read_file(yp));
  const WitnessDoc doc = parse_witness(read_file(witness_path), x, y);
  if (doc.dir != dir)
    throw Error(ErrorKind::SyntaxError,
                "witness file is for direction " + doc.dir);
  const CheckReport report = dir == "fwd" ? check_fwd(x, y, doc.arrow)
                                          : check_bwd(x, y, doc.arrow);
  const RestrictionFlags flags =
      dir == "fwd" ? check_restrictions(y, doc.arrow)
                   : check_restrictions(x, doc.arrow);
  Json j = report_base("check-sim");
  j["dir"] = dir;
  j["verdict"] = report.verdict;
  j["violations"] = Json::array();
  for (const auto& v : report.violations) {
    Json e;
    e["condition"] = v.condition;
    e["at"] = v.at;
    e["lhs"] = v.lhs;
    e["rhs"] = v.rhs;
    j["violations"].push_back(std::move(e));
  }
  j["restrictions"]["total"] = flags.total;
  j["restrictions"]["image_finite"] = flags.image_finite;
  emit(out, j);
  return report.verdict ? 0 : 1;
}

int cmd_find_sim(const std::string& dir, const std::vector<std::string>& require,
                 std::uint64_t budget, const std::string& xp,
                 const std::string& yp, std::ostream& out) {
  const System x = parse_system(read_file(xp));
  const System y = parse_system(read_file(yp));
  std::optional<KleisliArrow> found;
  if (dir == "fwd") {
    if (!require.empty())
      throw Error(ErrorKind::SyntaxError, "--require applies to --dir bwd");
    found = find_fwd_rel(x, y);
  } else {
    BwdSearchOptions opts;
    opts.budget = budget;
    for (const auto& r : require) {
      if (r == "total")
        opts.require_total = true;
      else if (r == "image-finite")
        opts.require_image_finite = true;
      else
        throw Error(ErrorKind::SyntaxError, "unknown restriction " + r);
    }
    found = find_bwd_bruteforce(x, y, opts);
  }
  Json j = report_base("find-sim");
  j["dir"] = dir;
  j["verdict"] = found.has_value();
  if (found) {
    j["witness"] = Json::parse(serialize_witness(dir, *found));
    const RestrictionFlags flags = dir == "fwd" ? check_restrictions(y, *found)
                                                : check_restrictions(x, *found);
    j["restrictions"]["total"] = flags.total;
    j["restrictions"]["image_finite"] = flags.image_finite;
  }
  emit(out, j);
  return found ? 0 : 1;
}

int cmd_fpe(const std::string& xp, const std::string& out_path,
            std::ostream& out) {
  const System sys = parse_system(read_file(xp));
  const std::string doc = serialize_system(apply_fpe(sys));
  if (out_path.empty()) {
    out << doc;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw Error(ErrorKind::SyntaxError, "cannot write " + out_path);
    f << doc;
  }
  return 0;
}

int cmd_trace(const std::string& xp, const std::string& from, int depth,
              double eps, std::ostream& out) {
  const System sys = parse_system(read_file(xp));
  std::optional<std::string> origin;
  if (!from.empty()) origin = from;
  Json j = report_base("trace");
  j["monad"] = monad_name(sys.monad);
  j["depth"] = depth;
  switch (sys.monad) {
    case Monad::Powerset: {
      Json values;
      for (int k = 0; k <= depth; ++k) {
        Json level = Json::array();
        for (const auto& t : prefix_lang(sys, origin, k)) level.push_back(t.str());
        values[std::to_string(k)] = std::move(level);
      }
      j["values"] = std::move(values);
      break;
    }
    case Monad::SubDist: {
      Json values = Json::array();
      for (int k = 0; k <= depth; ++k)
        for (const auto& t : prefix_trees_upto(sys.alphabet, k)) {
          const ProbValue v = cylinder_prob(sys, origin, t, eps);
          if (!v.exact && v.approx == 0) continue;
          if (v.exact && v.rat == 0) continue;
          Json e;
          e["depth"] = k;
          e["tree"] = t.str();
          e["value"] = v.str();
          values.push_back(std::move(e));
        }
      j["values"] = std::move(values);
      break;
    }
    case Monad::Lift: {
      std::optional<PrefixTree> output;
      if (origin) {
        output = lift_output(sys, *origin, depth);
      } else if (const auto& s = sys.init.lift_row(0)) {
        output = lift_output(sys, sys.states[*s], depth);
      }
      j["values"]["output"] = output ? Json(output->str()) : Json(nullptr);
      break;
    }
  }
  emit(out, j);
  return 0;
}

int cmd_inclusion(bool exact_word, int depth, double eps, const std::string& xp,
                  const std::string& yp, std::ostream& out) {
  const System x = parse_system(read_file(xp));
  const System y = parse_system(read_file(yp));
  if (x.monad != y.monad)
    throw Error(ErrorKind::MonadMismatch, "systems have different monads");
  InclusionReport report;
  std::string mode;
  if (exact_word) {
    mode = "exact-word";
    report = word_inclusion_exact(x, y);
  } else if (x.monad == Monad::Powerset) {
    mode = "tree";
    report = tree_inclusion_upto(x, y, depth);
  } else if (x.monad == Monad::SubDist) {
    mode = "prob";
    report = prob_inclusion_upto(x, y, depth, eps);
  } else {
    mode = "lift-output";
    report = lift_inclusion_upto(x, y, depth);
  }
  Json j = report_base("inclusion");
  j["mode"] = mode;
  j["verdict"] = verdict_name(report.verdict);
  j["depths_checked"] = report.depths_checked;
  if (report.witness) j["witness"] = witness_json(*report.witness);
  emit(out, j);
  return verdict_exit(report.verdict);
}

}  // namespace

WitnessDoc parse_witness(const std::string& text, const System& x,
                         const System& y) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::SyntaxError,
                "byte " + std::to_string(e.byte) + ": " + e.what());
  }
  for (const char* field : {"dir", "monad", "map"})
    if (!doc.contains(field))
      throw Error(ErrorKind::SyntaxError, std::string("missing \"") + field + "\"");
  const std::string dir = doc["dir"].get<std::string>();
  if (dir != "fwd" && dir != "bwd")
    throw Error(ErrorKind::SyntaxError, "dir must be \"fwd\" or \"bwd\"");
  const auto monad = monad_from_name(doc["monad"].get<std::string>());
  if (!monad || *monad != x.monad)
    throw Error(ErrorKind::MonadMismatch, "witness monad differs from the systems");

  const System& from = dir == "fwd" ? y : x;
  const System& to = dir == "fwd" ? x : y;

  auto resolve = [&](const Json& j) -> std::size_t {
    if (!j.is_string())
      throw Error(ErrorKind::SyntaxError, "witness targets are state ids");
    if (auto i = to.state_space->find(j.get<std::string>())) return *i;
    throw Error(ErrorKind::UnknownState, j.get<std::string>());
  };

  std::vector<KleisliArrow::SetRow> set_rows;
  std::vector<KleisliArrow::DistRow> dist_rows;
  std::vector<KleisliArrow::LiftRow> lift_rows;
  for (const auto& id : from.states) {
    if (!doc["map"].contains(id))
      throw Error(ErrorKind::UnknownState, "missing witness row for " + id);
    const Json& row = doc["map"][id];
    switch (*monad) {
      case Monad::Powerset: {
        KleisliArrow::SetRow r;
        for (const auto& e : row) r.insert(resolve(e));
        set_rows.push_back(std::move(r));
        break;
      }
      case Monad::SubDist: {
        KleisliArrow::DistRow r;
        for (const auto& e : row)
          r[resolve(e.at("state"))] += parse_rat(e.at("prob").get<std::string>());
        dist_rows.push_back(std::move(r));
        break;
      }
      case Monad::Lift: {
        KleisliArrow::LiftRow r;
        if (!row.is_null()) r = resolve(row);
        lift_rows.push_back(r);
        break;
      }
    }
  }
  for (const auto& [key, value] : doc["map"].items())
    if (!from.state_space->find(key)) throw Error(ErrorKind::UnknownState, key);

  KleisliArrow arrow = [&] {
    switch (*monad) {
      case Monad::Powerset:
        return KleisliArrow::powerset(from.state_space, to.state_space,
                                      std::move(set_rows));
      case Monad::SubDist:
        return KleisliArrow::subdist(from.state_space, to.state_space,
                                     std::move(dist_rows));
      default:
        return KleisliArrow::lift(from.state_space, to.state_space,
                                  std::move(lift_rows));
    }
  }();
  return WitnessDoc{dir, std::move(arrow)};
}

std::string serialize_witness(const std::string& dir,
                              const KleisliArrow& arrow) {
  Json j;
  j["dir"] = dir;
  j["monad"] = monad_name(arrow.monad());
  j["map"] = Json::object();
  for (std::size_t i = 0; i < arrow.dom().size(); ++i) {
    const std::string& id = arrow.dom().label(i);
    switch (arrow.monad()) {
      case Monad::Powerset: {
        Json row = Json::array();
        for (std::size_t q : arrow.set_row(i)) row.push_back(arrow.cod().label(q));
        j["map"][id] = std::move(row);
        break;
      }
      case Monad::SubDist: {
        Json row = Json::array();
        for (const auto& [q, w] : arrow.dist_row(i)) {
          Json e;
          e["state"] = arrow.cod().label(q);
          e["prob"] = rat_string(w);
          row.push_back(std::move(e));
        }
        j["map"][id] = std::move(row);
        break;
      }
      case Monad::Lift: {
        const auto& row = arrow.lift_row(i);
        j["map"][id] = row ? Json(arrow.cod().label(*row)) : Json(nullptr);
        break;
      }
    }
  }
  return j.dump(2) + "\n";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Simulation checks, one-step execution and trace oracles for "
               "finite branching systems"};
  app.require_subcommand(1);

  std::string file_a, file_b, witness_path, dir, out_path, from;
  std::vector<std::string> require;
  int depth = 6;
  double eps = 1e-9;
  std::uint64_t budget = 1u << 20;
  bool exact_word = false;

  auto* validate = app.add_subcommand("validate", "Parse and validate a system");
  validate->add_option("system", file_a)->required();

  auto* check = app.add_subcommand("check-sim", "Check a simulation witness");
  check->add_option("--dir", dir, "fwd or bwd")->required()
      ->check(CLI::IsMember({"fwd", "bwd"}));
  check->add_option("--witness", witness_path)->required();
  check->add_option("lhs", file_a)->required();
  check->add_option("rhs", file_b)->required();

  auto* find = app.add_subcommand("find-sim", "Search for a simulation witness");
  find->add_option("--dir", dir, "fwd or bwd")->required()
      ->check(CLI::IsMember({"fwd", "bwd"}));
  find->add_option("--require", require, "total,image-finite")->delimiter(',');
  find->add_option("--budget", budget);
  find->add_option("lhs", file_a)->required();
  find->add_option("rhs", file_b)->required();

  auto* fpe = app.add_subcommand("fpe", "Execute a system one step forward");
  fpe->add_option("system", file_a)->required();
  fpe->add_option("-o,--out", out_path);

  auto* trace = app.add_subcommand("trace", "Trace semantics of one system");
  trace->add_option("system", file_a)->required();
  trace->add_option("--from", from);
  trace->add_option("--depth", depth);
  trace->add_option("--eps", eps);

  auto* inclusion = app.add_subcommand("inclusion", "Compare trace semantics");
  inclusion->add_flag("--exact-word", exact_word);
  inclusion->add_option("--depth", depth);
  inclusion->add_option("--eps", eps);
  inclusion->add_option("lhs", file_a)->required();
  inclusion->add_option("rhs", file_b)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(file_a, out);
    if (check->parsed())
      return cmd_check_sim(dir, witness_path, file_a, file_b, out);
    if (find->parsed())
      return cmd_find_sim(dir, require, budget, file_a, file_b, out);
    if (fpe->parsed()) return cmd_fpe(file_a, out_path, out);
    if (trace->parsed()) return cmd_trace(file_a, from, depth, eps, out);
    if (inclusion->parsed())
      return cmd_inclusion(exact_word, depth, eps, file_a, file_b, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 2;
  }
  err << "no subcommand\n";
  return 2;
}

}  // namespace tracesim
