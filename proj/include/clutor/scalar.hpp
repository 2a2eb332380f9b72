#pragma once

#include <cmath>
#include <complex>
#include <optional>

#include "clutor/quadfield.hpp"
#include "clutor/rational.hpp"

namespace clutor {

using Cplx = std::complex<double>;

// |denominator| below this raises SingularEvaluation in numeric evaluation.
inline constexpr double kSingularTol = 1e-12;
// A complex number this close to an integer is reported as that integer.
inline constexpr double kIntegerSnapTol = 1e-8;

// Uniform scalar interface over the kinds the evaluators run on:
// complex doubles, exact rationals, quadratic-field values, and (via
// dual.hpp) dual numbers over any of those.
template <class K>
struct ScalarOps;

template <>
struct ScalarOps<Cplx> {
  static Cplx zero() { return {0.0, 0.0}; }
  static Cplx one() { return {1.0, 0.0}; }
  static Cplx zero_like(const Cplx&) { return zero(); }
  static Cplx one_like(const Cplx&) { return one(); }
  static Cplx from_rat(const Rat& q) { return {to_double(q), 0.0}; }
  static bool near_zero(const Cplx& x) { return std::abs(x) < kSingularTol; }
  static bool exact_zero(const Cplx& x) { return x == Cplx(0.0, 0.0); }
  static double abs_approx(const Cplx& x) { return std::abs(x); }
};

template <>
struct ScalarOps<Rat> {
  static Rat zero() { return rat(0); }
  static Rat one() { return rat(1); }
  static Rat zero_like(const Rat&) { return zero(); }
  static Rat one_like(const Rat&) { return one(); }
  static Rat from_rat(const Rat& q) { return q; }
  static bool near_zero(const Rat& x) { return x == 0; }
  static bool exact_zero(const Rat& x) { return x == 0; }
  static double abs_approx(const Rat& x) { return std::abs(to_double(x)); }
};

template <>
struct ScalarOps<Quad> {
  static Quad zero() { return Quad(); }
  static Quad one() { return Quad::integer(1); }
  static Quad zero_like(const Quad&) { return zero(); }
  static Quad one_like(const Quad&) { return one(); }
  static Quad from_rat(const Rat& q) { return Quad(q); }
  static bool near_zero(const Quad& x) { return x.is_zero(); }
  static bool exact_zero(const Quad& x) { return x.is_zero(); }
  static double abs_approx(const Quad& x) { return std::abs(x.to_complex()); }
};

template <class K>
K scalar_pow(K base, long e) {
  if (e < 0) {
    base = ScalarOps<K>::one_like(base) / base;
    e = -e;
  }
  K acc = ScalarOps<K>::one_like(base);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    if (e >>= 1) base = base * base;
  }
  return acc;
}

inline std::optional<long> snap_integer(const Cplx& z, double tol = kIntegerSnapTol) {
  double r = std::round(z.real());
  if (std::abs(z.real() - r) <= tol && std::abs(z.imag()) <= tol &&
      std::abs(r) < 9.0e15)
    return static_cast<long>(r);
  return std::nullopt;
}

// z ~ a + b*sqrt(d) with rational a, b. For d < 0 the sqrt contributes to the
// imaginary part; for d > 0 snapping is ambiguous and not attempted.
inline std::optional<Quad> snap_quad(const Cplx& z, long d, double tol,
                                     unsigned long max_den = 1000000) {
  if (d >= 0) return std::nullopt;
  auto a = snap_rational(z.real(), tol, max_den);
  auto b = snap_rational(z.imag() / std::sqrt(double(-d)), tol, max_den);
  if (!a || !b) return std::nullopt;
  Quad q(*a, *b, d);
  if (std::abs(q.to_complex() - z) > 10 * tol) return std::nullopt;
  return q;
}

}  // namespace clutor
