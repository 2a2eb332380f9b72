#include "clutor/rational.hpp"

#include <cmath>
#include <cstdlib>

namespace clutor {

std::string to_string(const Rat& q) { return q.get_str(); }

std::optional<Rat> parse_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  Rat q;
  if (q.set_str(s, 10) != 0) return std::nullopt;
  if (q.get_den() == 0) return std::nullopt;
  q.canonicalize();
  return q;
}

std::optional<Rat> snap_rational(double x, double tol, unsigned long max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  // Continued fraction convergents p/q of x.
  double r = x;
  Int p0 = 1, q0 = 0;  // previous convergent
  Int p1, q1;          // current convergent
  {
    double a0 = std::floor(r);
    p1 = Int(a0);
    q1 = 1;
    r -= a0;
  }
  for (int iter = 0; iter < 64; ++iter) {
    Rat cand(p1, q1);
    cand.canonicalize();
    if (std::abs(to_double(cand) - x) <= tol) return cand;
    if (r == 0.0) break;
    r = 1.0 / r;
    if (!std::isfinite(r) || std::abs(r) > 1e18) break;
    double a = std::floor(r);
    Int ai(a);
    Int p2 = ai * p1 + p0;
    Int q2 = ai * q1 + q0;
    if (q2 > Int(max_den)) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    r -= a;
  }
  Rat cand(p1, q1);
  cand.canonicalize();
  if (std::abs(to_double(cand) - x) <= tol) return cand;
  return std::nullopt;
}

}  // namespace clutor
