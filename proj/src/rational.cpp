#include "tracesim/rational.hpp"

#include <stdexcept>

namespace tracesim {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rat parse_rat(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!all_digits(text)) throw std::invalid_argument("bad rational: " + text);
    return Rat(boost::multiprecision::cpp_int(text));
  }
  const std::string num = text.substr(0, slash);
  const std::string den = text.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw std::invalid_argument("bad rational: " + text);
  boost::multiprecision::cpp_int p(num), q(den);
  if (q == 0) throw std::invalid_argument("zero denominator: " + text);
  return Rat(p, q);
}

std::string rat_string(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

double rat_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace tracesim
