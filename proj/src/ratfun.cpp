#include "clutor/ratfun.hpp"

#include <cctype>
#include <sstream>

namespace clutor {

RationalFunction::RationalFunction(MultiPoly num, MultiPoly den)
    : num_(std::move(num)), den_(std::move(den)), reduced_(false) {
  if (num_.nvars() != den_.nvars())
    throw ValidationError("rational function: variable count mismatch");
  if (den_.is_zero())
    throw ValidationError("rational function: zero denominator");
  normalize();
}

RationalFunction RationalFunction::constant(int nvars, const Rat& c) {
  RationalFunction f(nvars);
  f.num_ = MultiPoly::constant(nvars, c);
  return f;
}

RationalFunction RationalFunction::variable(int nvars, int i) {
  RationalFunction f(nvars);
  f.num_ = MultiPoly::variable(nvars, i);
  return f;
}

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = MultiPoly::constant(num_.nvars(), rat(1));
    reduced_ = true;
    return;
  }
  try {
    if (!den_.is_constant()) {
      MultiPoly g = MultiPoly::gcd(num_, den_);
      if (!g.is_one()) {
        num_ = *MultiPoly::exact_divide(num_, g);
        den_ = *MultiPoly::exact_divide(den_, g);
      }
    }
    Rat c = den_.rational_content();
    num_ = num_.scaled(1 / c);
    den_ = den_.scaled(1 / c);
    reduced_ = true;
  } catch (const SizeCapExceeded&) {
    reduced_ = false;
  }
}

RationalFunction operator-(const RationalFunction& f) {
  RationalFunction r = f;
  r.num_ = -r.num_;
  return r;
}

RationalFunction operator+(const RationalFunction& f,
                           const RationalFunction& g) {
  return RationalFunction(f.num_ * g.den_ + g.num_ * f.den_,
                          f.den_ * g.den_);
}

RationalFunction operator-(const RationalFunction& f,
                           const RationalFunction& g) {
  return RationalFunction(f.num_ * g.den_ - g.num_ * f.den_,
                          f.den_ * g.den_);
}

RationalFunction operator*(const RationalFunction& f,
                           const RationalFunction& g) {
  return RationalFunction(f.num_ * g.num_, f.den_ * g.den_);
}

RationalFunction operator/(const RationalFunction& f,
                           const RationalFunction& g) {
  if (g.num_.is_zero())
    throw SingularEvaluation("division by the zero rational function");
  return RationalFunction(f.num_ * g.den_, f.den_ * g.num_);
}

RationalFunction RationalFunction::inverse() const {
  if (num_.is_zero())
    throw SingularEvaluation("inverse of the zero rational function");
  return RationalFunction(den_, num_);
}

RationalFunction RationalFunction::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  return RationalFunction(num_.pow(e), den_.pow(e));
}

RationalFunction RationalFunction::derivative(int i) const {
  // (n/d)' = (n'd - nd') / d^2
  MultiPoly n = num_.derivative(i) * den_ - num_ * den_.derivative(i);
  return RationalFunction(std::move(n), den_ * den_);
}

bool RationalFunction::equals(const RationalFunction& g) const {
  if (reduced_ && g.reduced_) return num_ == g.num_ && den_ == g.den_;
  return num_ * g.den_ == g.num_ * den_;
}

std::string RationalFunction::to_string() const {
  if (den_.is_one()) return num_.to_string();
  std::ostringstream out;
  out << "(" << num_.to_string() << ") / (" << den_.to_string() << ")";
  return out.str();
}

RationalFunction compose(const RationalFunction& f,
                         const std::vector<RationalFunction>& args) {
  int l = f.nvars();
  if (static_cast<int>(args.size()) != l)
    throw ValidationError("compose: argument count mismatch");
  if (args.empty()) return f;
  int m = args[0].nvars();
  for (const auto& a : args) {
    if (a.nvars() != m)
      throw ValidationError("compose: arguments in different variable spaces");
    if (a.is_zero())
      throw SingularEvaluation("compose: zero rational function argument");
  }

  // Per-variable max degrees across numerator and denominator let both be
  // cleared by one common denominator prod_i den_i^D_i.
  std::vector<int> dmax(l, 0);
  for (int v = 0; v < l; ++v)
    dmax[v] = std::max(f.num().degree_in(v), f.den().degree_in(v));

  auto lift = [&](const MultiPoly& p) {
    MultiPoly acc(m);
    for (const auto& [e, c] : p.terms()) {
      MultiPoly term = MultiPoly::constant(m, c);
      for (int v = 0; v < l; ++v) {
        if (e[v] > 0) term *= args[v].num().pow(e[v]);
        if (dmax[v] - e[v] > 0) term *= args[v].den().pow(dmax[v] - e[v]);
      }
      acc += term;
    }
    return acc;
  };

  MultiPoly num = lift(f.num());
  MultiPoly den = lift(f.den());
  if (den.is_zero())
    throw SingularEvaluation("compose: substitution produced zero denominator");
  return RationalFunction(std::move(num), std::move(den));
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, int nvars) : s_(text), nvars_(nvars) {}

  RationalFunction parse() {
    RationalFunction r = expression();
    skip_ws();
    if (pos_ != s_.size())
      throw ParseError("trailing input at offset " + std::to_string(pos_));
    return r;
  }

 private:
  // expression := term (('+'|'-') term)*
  RationalFunction expression() {
    RationalFunction acc = term();
    for (;;) {
      skip_ws();
      if (eat('+'))
        acc += term();
      else if (eat('-'))
        acc = acc - term();
      else
        return acc;
    }
  }

  // term := factor (('*'|'/') factor)*
  RationalFunction term() {
    RationalFunction acc = factor();
    for (;;) {
      skip_ws();
      if (eat('*'))
        acc *= factor();
      else if (eat('/'))
        acc = acc / factor();
      else
        return acc;
    }
  }

  // factor := ('-'|'+')* primary ('^' integer)?
  RationalFunction factor() {
    skip_ws();
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    RationalFunction base = primary();
    skip_ws();
    if (eat('^')) {
      skip_ws();
      bool neg = eat('-');
      long e = integer();
      return base.pow(neg ? -e : e);
    }
    return base;
  }

  RationalFunction primary() {
    skip_ws();
    if (eat('(')) {
      RationalFunction r = expression();
      skip_ws();
      if (!eat(')')) throw ParseError("expected ')'");
      return r;
    }
    if (peek() == 'y') {
      ++pos_;
      long idx = integer();
      if (idx < 1 || idx > nvars_)
        throw ParseError("variable y" + std::to_string(idx) +
                         " out of range 1.." + std::to_string(nvars_));
      return RationalFunction::variable(nvars_, static_cast<int>(idx - 1));
    }
    if (std::isdigit(static_cast<unsigned char>(peek())))
      return RationalFunction::constant(nvars_, rat(integer()));
    throw ParseError("unexpected character at offset " + std::to_string(pos_));
  }

  long integer() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError("expected integer at offset " + std::to_string(pos_));
    long v = 0;
    while (pos_ < s_.size() &&
           std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  void skip_ws() {
    while (pos_ < s_.size() &&
           std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int nvars_;
};

}  // namespace

RationalFunction parse_ratfun(const std::string& text, int nvars) {
  return Parser(text, nvars).parse();
}

}  // namespace clutor
