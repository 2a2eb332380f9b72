#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include "clutor/rational.hpp"

namespace clutor {

// Element a + b*sqrt(d) of the quadratic field Q(sqrt(d)), d a square-free
// integer fixed per computation. Values with b == 0 are plain rationals and
// combine with any discriminant.
class Quad {
 public:
  Quad() : a_(0), b_(0), d_(0) {}
  explicit Quad(Rat a) : a_(std::move(a)), b_(0), d_(0) {}
  Quad(Rat a, Rat b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
    if (b_ == 0) d_ = 0;
  }
  static Quad integer(long n) { return Quad(rat(n)); }
  static Quad sqrt_d(long d) { return Quad(rat(0), rat(1), d); }

  const Rat& a() const { return a_; }
  const Rat& b() const { return b_; }
  long d() const { return d_; }
  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  friend Quad operator-(const Quad& x) { return Quad(-x.a_, -x.b_, x.d_); }

  friend Quad operator+(const Quad& x, const Quad& y) {
    long d = joint_d(x, y);
    return Quad(x.a_ + y.a_, x.b_ + y.b_, d);
  }
  friend Quad operator-(const Quad& x, const Quad& y) { return x + (-y); }
  friend Quad operator*(const Quad& x, const Quad& y) {
    long d = joint_d(x, y);
    return Quad(x.a_ * y.a_ + x.b_ * y.b_ * rat(d),
                x.a_ * y.b_ + x.b_ * y.a_, d);
  }
  friend Quad operator/(const Quad& x, const Quad& y) {
    long d = joint_d(x, y);
    Rat n = y.a_ * y.a_ - y.b_ * y.b_ * rat(d);
    if (n == 0) throw std::domain_error("Quad: division by zero");
    Quad conj(y.a_, -y.b_, d);
    Quad num = x * conj;
    return Quad(num.a_ / n, num.b_ / n, d);
  }
  Quad& operator+=(const Quad& y) { return *this = *this + y; }
  Quad& operator-=(const Quad& y) { return *this = *this - y; }
  Quad& operator*=(const Quad& y) { return *this = *this * y; }
  Quad& operator/=(const Quad& y) { return *this = *this / y; }

  friend bool operator==(const Quad& x, const Quad& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || x.d_ == y.d_);
  }
  friend bool operator!=(const Quad& x, const Quad& y) { return !(x == y); }

  Quad conj() const { return Quad(a_, -b_, d_); }

  std::complex<double> to_complex() const {
    double av = to_double(a_), bv = to_double(b_);
    if (d_ >= 0) return {av + bv * std::sqrt(double(d_)), 0.0};
    return {av, bv * std::sqrt(double(-d_))};
  }

  std::string to_string() const {
    if (b_ == 0) return clutor::to_string(a_);
    std::string s = clutor::to_string(a_);
    s += " + ";
    s += clutor::to_string(b_);
    s += "*sqrt(" + std::to_string(d_) + ")";
    return s;
  }

 private:
  static long joint_d(const Quad& x, const Quad& y) {
    if (x.b_ == 0) return y.d_;
    if (y.b_ == 0) return x.d_;
    if (x.d_ != y.d_)
      throw std::domain_error("Quad: mixed discriminants");
    return x.d_;
  }

  Rat a_, b_;
  long d_;
};

}  // namespace clutor
