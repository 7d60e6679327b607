#ifndef TRACESIM_FPE_HPP
#define TRACESIM_FPE_HPP

#include "tracesim/system.hpp"

namespace tracesim {

/// Executes a system one step forward: the new states are the terms over the
/// old ones (named by their canonical print), the new initial arrow is the
/// old transition composed with the old initial arrow, and the new transition
/// maps the old one through the term functor. Traces are preserved exactly;
/// the transform can create forward witnesses the original system lacks.
System apply_fpe(const System& x);

/// True when transforming this system on the right-hand side of a backward
/// check keeps existing restricted backward witnesses usable: every
/// transition row must be total (nonempty image / full mass one / defined).
/// Image-finiteness, also required for nondeterminism, holds by
/// representation.
bool fpe_keeps_backward(const System& y);

}  // namespace tracesim

#endif
