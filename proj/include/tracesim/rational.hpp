#ifndef TRACESIM_RATIONAL_HPP
#define TRACESIM_RATIONAL_HPP

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace tracesim {

// Arbitrary-precision rational. All probability weights in this library are
// exact; floating point appears only in the value-iteration solver.
using Rat = boost::multiprecision::cpp_rational;

/// Parses "p/q" or a bare integer "p". Throws std::invalid_argument on
/// malformed input, zero denominators, or negative values.
Rat parse_rat(const std::string& text);

/// Canonical form "p/q" with q >= 1 and gcd(p,q) = 1 (e.g. "0/1", "1/1").
std::string rat_string(const Rat& r);

double rat_double(const Rat& r);

}  // namespace tracesim

#endif
