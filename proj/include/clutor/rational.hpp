#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace clutor {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat(long n, long d = 1) {
  Rat q(n, d);
  q.canonicalize();
  return q;
}

inline double to_double(const Rat& q) { return q.get_d(); }

std::string to_string(const Rat& q);

// Accepts "n" or "n/d"; rejects anything else.
std::optional<Rat> parse_rational(const std::string& s);

// Best rational approximation of x within tol, by continued fractions.
// Fails when no denominator <= max_den gets close enough.
std::optional<Rat> snap_rational(double x, double tol, unsigned long max_den);

}  // namespace clutor
