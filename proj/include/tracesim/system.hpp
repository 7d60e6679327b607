#ifndef TRACESIM_SYSTEM_HPP
#define TRACESIM_SYSTEM_HPP

#include <string>
#include <vector>

#include "tracesim/kleisli.hpp"
#include "tracesim/signature.hpp"

namespace tracesim {

/// A finite-state branching system: a monad tag for the branching type, a
/// ranked alphabet for the transition type, an ordered state list, an initial
/// arrow {*} -+-> states and a transition arrow states -+-> terms.
///
/// State declaration order is canonical and drives every deterministic
/// enumeration (term universes, search orders, reports).
struct System {
  Monad monad = Monad::Powerset;
  RankedAlphabet alphabet;
  std::vector<std::string> states;
  ElemSpace::Ptr state_space;  // states in declaration order
  ElemSpace::Ptr term_space;   // all terms over (alphabet, states)
  KleisliArrow init;
  KleisliArrow trans;
};

/// Assembles and fully validates a system from its parts.
System make_system(Monad monad, RankedAlphabet alphabet,
                   std::vector<std::string> states, KleisliArrow init,
                   KleisliArrow trans);

/// Parses the JSON document format:
///   {"monad": "powerset"|"subdist"|"lift",
///    "alphabet": [{"symbol": str, "arity": int}, ...],
///    "states": [str, ...],
///    "init": <monad-shaped>,
///    "trans": {state: <monad-shaped row>, ...}}
/// Terms are arrays [symbol, arg...]; rationals are "p/q" strings; Lift
/// encodes an aborting row as null. Throws Error with a position-carrying
/// SyntaxError for malformed documents and a specific kind for each broken
/// invariant.
System parse_system(const std::string& text);

/// Canonical serialization; parse(serialize(sys)) reproduces sys bit-exactly.
std::string serialize_system(const System& sys);

struct Diagnostic {
  ErrorKind kind;
  std::string at;       // offending state, or "" for document-level issues
  std::string message;
};

/// Re-checks every System invariant on an already-constructed value. Returns
/// an empty list iff all invariants hold.
std::vector<Diagnostic> validate_system(const System& sys);

System load_system_file(const std::string& path);

}  // namespace tracesim

#endif
