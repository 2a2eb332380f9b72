#pragma once

#include <vector>

#include "clutor/scalar.hpp"

namespace clutor {

// Forward-mode dual number carrying a value and a gradient with respect to
// the l ambient coordinates. An empty gradient vector means "identically
// zero gradient" so constants never allocate.
template <class K>
class Dual {
 public:
  Dual() : value_(ScalarOps<K>::zero()) {}
  explicit Dual(K v) : value_(std::move(v)) {}
  Dual(K v, std::vector<K> g) : value_(std::move(v)), grad_(std::move(g)) {}

  // Coordinate i of an l-dimensional evaluation point: gradient e_i.
  static Dual seed(K v, std::size_t l, std::size_t i) {
    std::vector<K> g(l, ScalarOps<K>::zero());
    g[i] = ScalarOps<K>::one();
    return Dual(std::move(v), std::move(g));
  }

  const K& value() const { return value_; }
  const std::vector<K>& grad() const { return grad_; }
  K grad_at(std::size_t i) const {
    return i < grad_.size() ? grad_[i] : ScalarOps<K>::zero();
  }

  friend Dual operator-(const Dual& x) {
    std::vector<K> g(x.grad_.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = -x.grad_[i];
    return Dual(-x.value_, std::move(g));
  }

  friend Dual operator+(const Dual& x, const Dual& y) {
    return Dual(x.value_ + y.value_, zip(x.grad_, y.grad_, /*sub=*/false));
  }
  friend Dual operator-(const Dual& x, const Dual& y) {
    return Dual(x.value_ - y.value_, zip(x.grad_, y.grad_, /*sub=*/true));
  }
  friend Dual operator*(const Dual& x, const Dual& y) {
    std::size_t n = std::max(x.grad_.size(), y.grad_.size());
    std::vector<K> g(n, ScalarOps<K>::zero());
    for (std::size_t i = 0; i < n; ++i) {
      if (i < x.grad_.size()) g[i] = g[i] + x.grad_[i] * y.value_;
      if (i < y.grad_.size()) g[i] = g[i] + x.value_ * y.grad_[i];
    }
    return Dual(x.value_ * y.value_, std::move(g));
  }
  friend Dual operator/(const Dual& x, const Dual& y) {
    K inv = ScalarOps<K>::one() / y.value_;
    K v = x.value_ * inv;
    std::size_t n = std::max(x.grad_.size(), y.grad_.size());
    std::vector<K> g(n, ScalarOps<K>::zero());
    for (std::size_t i = 0; i < n; ++i) {
      K num = ScalarOps<K>::zero();
      if (i < x.grad_.size()) num = num + x.grad_[i];
      if (i < y.grad_.size()) num = num - v * y.grad_[i];
      g[i] = num * inv;
    }
    return Dual(std::move(v), std::move(g));
  }

  Dual& operator+=(const Dual& y) { return *this = *this + y; }
  Dual& operator*=(const Dual& y) { return *this = *this * y; }

 private:
  static std::vector<K> zip(const std::vector<K>& a, const std::vector<K>& b,
                            bool sub) {
    std::size_t n = std::max(a.size(), b.size());
    std::vector<K> g(n, ScalarOps<K>::zero());
    for (std::size_t i = 0; i < n; ++i) {
      if (i < a.size()) g[i] = g[i] + a[i];
      if (i < b.size()) g[i] = sub ? g[i] - b[i] : g[i] + b[i];
    }
    return g;
  }

  K value_;
  std::vector<K> grad_;
};

template <class K>
struct ScalarOps<Dual<K>> {
  static Dual<K> zero() { return Dual<K>(ScalarOps<K>::zero()); }
  static Dual<K> one() { return Dual<K>(ScalarOps<K>::one()); }
  static Dual<K> zero_like(const Dual<K>&) { return zero(); }
  static Dual<K> one_like(const Dual<K>&) { return one(); }
  static Dual<K> from_rat(const Rat& q) {
    return Dual<K>(ScalarOps<K>::from_rat(q));
  }
  static bool near_zero(const Dual<K>& x) {
    return ScalarOps<K>::near_zero(x.value());
  }
  static bool exact_zero(const Dual<K>& x) {
    return ScalarOps<K>::exact_zero(x.value());
  }
  static double abs_approx(const Dual<K>& x) {
    return ScalarOps<K>::abs_approx(x.value());
  }
};

using DualC = Dual<Cplx>;
using DualQ = Dual<Quad>;

}  // namespace clutor
