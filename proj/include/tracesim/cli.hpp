#ifndef TRACESIM_CLI_HPP
#define TRACESIM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "tracesim/system.hpp"

namespace tracesim {

/// A simulation witness read from or written to a witness document
/// {"dir": "fwd"|"bwd", "monad": ..., "map": {state: row}}.
struct WitnessDoc {
  std::string dir;  // "fwd" or "bwd"
  KleisliArrow arrow;
};

/// dir selects the orientation: forward witnesses map y-states to x-states,
/// backward ones the other way around.
WitnessDoc parse_witness(const std::string& text, const System& x,
                         const System& y);
std::string serialize_witness(const std::string& dir, const KleisliArrow& arrow);

/// Entry point behind the tracesim binary. Returns the process exit code:
/// 0 when the queried property holds, 1 when it is refuted, 2 on usage or
/// input errors. Reports go to `out` as JSON documents, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace tracesim

#endif
