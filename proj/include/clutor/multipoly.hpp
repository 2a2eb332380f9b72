#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clutor/error.hpp"
#include "clutor/scalar.hpp"

namespace clutor {

using Expo = std::vector<int>;

// Graded lexicographic: compare total degree first, then exponents left to
// right. Fixes normalization signs, gcd leading terms and printing order.
struct GrlexLess {
  bool operator()(const Expo& a, const Expo& b) const;
};

// Exact sparse polynomial over Q in variables y1..yl.
class MultiPoly {
 public:
  using TermMap = std::map<Expo, Rat, GrlexLess>;

  // Normalization (gcd) is skipped once an intermediate result would carry
  // more than this many terms; the fraction is then carried unreduced.
  static constexpr std::size_t kTermCap = 200000;

  explicit MultiPoly(int nvars) : nvars_(nvars) {}
  static MultiPoly constant(int nvars, Rat c);
  static MultiPoly variable(int nvars, int i);

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  // -1 for the zero polynomial.
  int total_degree() const;
  int degree_in(int v) const;
  Rat constant_value() const;  // requires is_constant
  Rat leading_coeff() const;   // grlex-largest term; 0 for zero poly

  void add_term(const Expo& e, const Rat& c);

  friend MultiPoly operator-(const MultiPoly& a);
  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly& operator+=(const MultiPoly& b) { return *this = *this + b; }
  MultiPoly& operator-=(const MultiPoly& b) { return *this = *this - b; }
  MultiPoly& operator*=(const MultiPoly& b) { return *this = *this * b; }
  bool operator==(const MultiPoly& b) const {
    return nvars_ == b.nvars_ && terms_ == b.terms_;
  }

  MultiPoly scaled(const Rat& c) const;
  MultiPoly pow(long e) const;
  MultiPoly derivative(int v) const;

  template <class K>
  K eval(const std::vector<K>& point) const {
    K acc = ScalarOps<K>::zero();
    for (const auto& [e, c] : terms_) {
      K t = ScalarOps<K>::from_rat(c);
      for (int v = 0; v < nvars_; ++v)
        if (e[v] != 0) t = t * scalar_pow(point[v], e[v]);
      acc = acc + t;
    }
    return acc;
  }

  // gcd of numerators over lcm of denominators, carrying the sign of the
  // grlex-leading coefficient; p / rational_content() is integral, primitive
  // and has positive leading coefficient. Zero for the zero polynomial.
  Rat rational_content() const;
  MultiPoly primitive_integer() const;

  static std::optional<MultiPoly> exact_divide(const MultiPoly& a,
                                               const MultiPoly& b);

  // Recursive content/primitive-part Euclidean gcd over the lowest active
  // variable. Result is primitive integral with positive leading coefficient
  // (1 for coprime inputs). Throws SizeCapExceeded past kTermCap.
  static MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);

  // Canonical text: terms in ascending grlex order, explicit * and ^,
  // e.g. "1 + 2*y3 + y3^2*y8".
  std::string to_string() const;

 private:
  int nvars_;
  TermMap terms_;
};

}  // namespace clutor
