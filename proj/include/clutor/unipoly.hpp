#pragma once

#include <algorithm>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "clutor/error.hpp"
#include "clutor/scalar.hpp"

namespace clutor {

// Dense univariate polynomial in t; coeff(i) multiplies t^i. The scalar kind
// K is complex, rational or quadratic-field.
template <class K>
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UniPoly constant(K v) { return UniPoly(std::vector<K>{std::move(v)}); }
  // t - root
  static UniPoly linear_minus(const K& root) {
    return UniPoly(std::vector<K>{-root, ScalarOps<K>::one()});
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  K coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i]
                                                       : ScalarOps<K>::zero();
  }
  const std::vector<K>& coeffs() const { return c_; }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<K> r(std::max(a.c_.size(), b.c_.size()),
                     ScalarOps<K>::zero());
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    return UniPoly(std::move(r));
  }
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    std::vector<K> r(std::max(a.c_.size(), b.c_.size()),
                     ScalarOps<K>::zero());
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
    return UniPoly(std::move(r));
  }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly();
    std::vector<K> r(a.c_.size() + b.c_.size() - 1, ScalarOps<K>::zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    return UniPoly(std::move(r));
  }

  UniPoly scaled(const K& s) const {
    std::vector<K> r = c_;
    for (auto& x : r) x = x * s;
    return UniPoly(std::move(r));
  }

  K eval(const K& t) const {
    K acc = ScalarOps<K>::zero();
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  // Synthetic division by (t - root): quotient plus remainder.
  std::pair<UniPoly, K> divide_linear(const K& root) const {
    if (is_zero()) return {UniPoly(), ScalarOps<K>::zero()};
    std::vector<K> q(c_.size() - 1, ScalarOps<K>::zero());
    K carry = c_.back();
    for (int i = static_cast<int>(c_.size()) - 2; i >= 0; --i) {
      q[i] = carry;
      carry = c_[i] + root * carry;
    }
    return {UniPoly(std::move(q)), carry};
  }

  double max_abs_coeff() const {
    double m = 0;
    for (const auto& x : c_) m = std::max(m, ScalarOps<K>::abs_approx(x));
    return m;
  }

  // Exact division by (t - root)^k, verified by the remainder at each step.
  // tol scales with the coefficient magnitude; tol <= 0 requires exactly
  // zero remainders (the exact-arithmetic mode).
  UniPoly divided_by_linear_power(const K& root, int k, double tol) const {
    UniPoly p = *this;
    double scale = 1.0 + max_abs_coeff();
    for (int i = 0; i < k; ++i) {
      auto [q, rem] = p.divide_linear(root);
      if (!remainder_ok(rem, tol, scale))
        throw MultiplicityMismatch(
            "root multiplicity below requested power: remainder " +
            std::to_string(ScalarOps<K>::abs_approx(rem)));
      p = std::move(q);
    }
    return p;
  }

  // Largest k with (t - root)^k dividing the polynomial within tolerance.
  int multiplicity_at(const K& root, double tol) const {
    UniPoly p = *this;
    double scale = 1.0 + max_abs_coeff();
    int k = 0;
    while (!p.is_zero()) {
      auto [q, rem] = p.divide_linear(root);
      if (!remainder_ok(rem, tol, scale)) break;
      p = std::move(q);
      ++k;
    }
    return k;
  }

  std::string to_string(
      const std::function<std::string(const K&)>& fmt) const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = 0; i < static_cast<int>(c_.size()); ++i) {
      if (ScalarOps<K>::exact_zero(c_[i])) continue;
      if (!first) out << " + ";
      first = false;
      out << "(" << fmt(c_[i]) << ")";
      if (i == 1) out << "*t";
      if (i > 1) out << "*t^" << i;
    }
    return out.str();
  }

 private:
  static bool remainder_ok(const K& rem, double tol, double scale) {
    if (tol <= 0) return ScalarOps<K>::exact_zero(rem);
    return ScalarOps<K>::abs_approx(rem) <= tol * scale;
  }

  void trim() {
    while (!c_.empty() && ScalarOps<K>::exact_zero(c_.back())) c_.pop_back();
  }

  std::vector<K> c_;
};

}  // namespace clutor
