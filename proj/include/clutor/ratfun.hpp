#pragma once

#include <string>
#include <vector>

#include "clutor/multipoly.hpp"

namespace clutor {

// Quotient of two MultiPoly. Canonical form: numerator and denominator
// coprime, denominator primitive integral with positive grlex-leading
// coefficient. When normalization would blow past the term cap the fraction
// is carried unreduced and reduced() reports false.
class RationalFunction {
 public:
  explicit RationalFunction(int nvars)
      : num_(MultiPoly(nvars)), den_(MultiPoly::constant(nvars, rat(1))),
        reduced_(true) {}
  RationalFunction(MultiPoly num, MultiPoly den);

  static RationalFunction constant(int nvars, const Rat& c);
  static RationalFunction variable(int nvars, int i);

  int nvars() const { return num_.nvars(); }
  const MultiPoly& num() const { return num_; }
  const MultiPoly& den() const { return den_; }
  bool reduced() const { return reduced_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

  friend RationalFunction operator-(const RationalFunction& f);
  friend RationalFunction operator+(const RationalFunction& f,
                                    const RationalFunction& g);
  friend RationalFunction operator-(const RationalFunction& f,
                                    const RationalFunction& g);
  friend RationalFunction operator*(const RationalFunction& f,
                                    const RationalFunction& g);
  friend RationalFunction operator/(const RationalFunction& f,
                                    const RationalFunction& g);
  RationalFunction& operator+=(const RationalFunction& g) {
    return *this = *this + g;
  }
  RationalFunction& operator*=(const RationalFunction& g) {
    return *this = *this * g;
  }

  RationalFunction inverse() const;
  RationalFunction pow(long e) const;

  // Quotient-rule partial derivative in variable i, normalized.
  RationalFunction derivative(int i) const;

  // Exact canonical equality; falls back to cross-multiplication when either
  // side is carried unreduced.
  bool equals(const RationalFunction& g) const;

  template <class K>
  K eval(const std::vector<K>& point) const {
    K d = den_.eval(point);
    if (ScalarOps<K>::near_zero(d))
      throw SingularEvaluation("denominator vanishes at evaluation point");
    return num_.eval(point) / d;
  }

  std::string to_string() const;

 private:
  void normalize();

  MultiPoly num_, den_;
  bool reduced_;
};

// Substitute args[i] for variable i of f. args must all live in a common
// variable space; composition clears denominators per variable before one
// final reduction.
RationalFunction compose(const RationalFunction& f,
                         const std::vector<RationalFunction>& args);

// Recursive-descent parser for the canonical text form: integers, yK,
// + - * / ^ and parentheses. Understands everything to_string emits.
RationalFunction parse_ratfun(const std::string& text, int nvars);

// Symbolic coordinates run through the same generic evaluators as numeric
// scalars; identities are sized from a model value.
template <>
struct ScalarOps<RationalFunction> {
  static RationalFunction zero_like(const RationalFunction& m) {
    return RationalFunction(m.nvars());
  }
  static RationalFunction one_like(const RationalFunction& m) {
    return RationalFunction::constant(m.nvars(), rat(1));
  }
  static bool near_zero(const RationalFunction& f) { return f.is_zero(); }
  static bool exact_zero(const RationalFunction& f) { return f.is_zero(); }
};

}  // namespace clutor
