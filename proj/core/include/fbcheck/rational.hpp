#pragma once

// Exact rational arithmetic for every tally path. Winners, boundaries and
// classifications are decided by exact sign tests; floating point is never
// used for them. Counts and vector components stay tiny at desk scale, so
// int64 numerators/denominators have ample headroom.

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace fbc {

using Rat = boost::rational<long long>;

// Parses "3", "-3", "3/4", "-3/4" (surrounding whitespace allowed).
// Throws std::invalid_argument on malformed input or a zero denominator.
Rat parse_rational(const std::string& text);

// Canonical text: integers render bare ("3"), everything else "n/d" reduced,
// sign on the numerator.
std::string format_rational(const Rat& value);

inline int sign(const Rat& value) {
  if (value.numerator() > 0) return 1;
  if (value.numerator() < 0) return -1;
  return 0;
}

}  // namespace fbc
