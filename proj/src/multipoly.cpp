#include "clutor/multipoly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace clutor {

bool GrlexLess::operator()(const Expo& a, const Expo& b) const {
  int da = std::accumulate(a.begin(), a.end(), 0);
  int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

MultiPoly MultiPoly::constant(int nvars, Rat c) {
  MultiPoly p(nvars);
  if (c != 0) p.terms_.emplace(Expo(nvars, 0), std::move(c));
  return p;
}

MultiPoly MultiPoly::variable(int nvars, int i) {
  MultiPoly p(nvars);
  Expo e(nvars, 0);
  e.at(i) = 1;
  p.terms_.emplace(std::move(e), rat(1));
  return p;
}

bool MultiPoly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && total_degree() == 0;
}

bool MultiPoly::is_one() const {
  return is_constant() && !terms_.empty() && terms_.begin()->second == 1;
}

int MultiPoly::total_degree() const {
  if (terms_.empty()) return -1;
  const Expo& e = terms_.rbegin()->first;  // grlex max has max total degree
  return std::accumulate(e.begin(), e.end(), 0);
}

int MultiPoly::degree_in(int v) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[v]);
  return d;
}

Rat MultiPoly::constant_value() const {
  return terms_.empty() ? rat(0) : terms_.begin()->second;
}

Rat MultiPoly::leading_coeff() const {
  return terms_.empty() ? rat(0) : terms_.rbegin()->second;
}

void MultiPoly::add_term(const Expo& e, const Rat& c) {
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiPoly operator-(const MultiPoly& a) {
  MultiPoly r(a.nvars_);
  for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, -c);
  return r;
}

namespace {
void require_same_vars(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars() != b.nvars())
    throw ValidationError("polynomial arithmetic: variable count mismatch");
}
}  // namespace

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
  require_same_vars(a, b);
  MultiPoly r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(e, c);
  return r;
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
  require_same_vars(a, b);
  MultiPoly r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
  return r;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  require_same_vars(a, b);
  if (static_cast<long long>(a.terms_.size()) * b.terms_.size() > 10000000LL)
    throw SizeCapExceeded("polynomial product too large");
  MultiPoly r(a.nvars_);
  Expo e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int v = 0; v < a.nvars_; ++v) e[v] = ea[v] + eb[v];
      r.add_term(e, ca * cb);
    }
    if (r.terms_.size() > MultiPoly::kTermCap * 2)
      throw SizeCapExceeded("polynomial product exceeds term cap");
  }
  return r;
}

MultiPoly MultiPoly::scaled(const Rat& c) const {
  MultiPoly r(nvars_);
  if (c == 0) return r;
  for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
  return r;
}

MultiPoly MultiPoly::pow(long e) const {
  MultiPoly acc = constant(nvars_, rat(1));
  MultiPoly base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = (e >>= 1) ? base * base : base;
  }
  return acc;
}

MultiPoly MultiPoly::derivative(int v) const {
  MultiPoly r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[v] == 0) continue;
    Expo de = e;
    de[v] -= 1;
    r.add_term(de, c * rat(e[v]));
  }
  return r;
}

Rat MultiPoly::rational_content() const {
  if (terms_.empty()) return rat(0);
  Int num_gcd = 0, den_lcm = 1;
  for (const auto& [e, c] : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(),
            c.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
            c.get_den().get_mpz_t());
  }
  Rat content(num_gcd, den_lcm);
  content.canonicalize();
  if (leading_coeff() < 0) content = -content;
  return content;
}

MultiPoly MultiPoly::primitive_integer() const {
  if (terms_.empty()) return *this;
  return scaled(1 / rational_content());
}

std::optional<MultiPoly> MultiPoly::exact_divide(const MultiPoly& a,
                                                 const MultiPoly& b) {
  if (b.is_zero()) return std::nullopt;
  MultiPoly q(a.nvars_);
  MultiPoly r = a;
  const Expo& eb = b.terms_.rbegin()->first;
  const Rat& cb = b.terms_.rbegin()->second;
  Expo eq(a.nvars_);
  while (!r.is_zero()) {
    const Expo& er = r.terms_.rbegin()->first;
    for (int v = 0; v < a.nvars_; ++v) {
      eq[v] = er[v] - eb[v];
      if (eq[v] < 0) return std::nullopt;
    }
    Rat cq = r.terms_.rbegin()->second / cb;
    MultiPoly m(a.nvars_);
    m.terms_.emplace(eq, cq);
    q.add_term(eq, cq);
    r -= m * b;
  }
  return q;
}

namespace {

// Multivariate Euclidean gcd can stall on coefficient blowup long before the
// term cap fires; a per-call work budget cuts those off so normalization
// falls back to carrying the fraction unreduced.
thread_local long gcd_budget = 0;

void spend(long units) {
  gcd_budget -= units;
  if (gcd_budget < 0)
    throw SizeCapExceeded("gcd work budget exhausted");
}

// Univariate view in variable v: degree -> coefficient polynomial (with the
// v-exponent zeroed out).
std::map<int, MultiPoly> univar_view(const MultiPoly& p, int v) {
  std::map<int, MultiPoly> view;
  for (const auto& [e, c] : p.terms()) {
    Expo rest = e;
    int d = rest[v];
    rest[v] = 0;
    auto it = view.try_emplace(d, MultiPoly(p.nvars())).first;
    it->second.add_term(rest, c);
  }
  return view;
}

int lowest_active_var(const MultiPoly& a, const MultiPoly& b) {
  for (int v = 0; v < a.nvars(); ++v)
    if (a.degree_in(v) > 0 || b.degree_in(v) > 0) return v;
  return -1;
}

MultiPoly gcd_rec(const MultiPoly& a, const MultiPoly& b);

MultiPoly content_in(const MultiPoly& p, int v) {
  auto view = univar_view(p, v);
  MultiPoly g(p.nvars());
  for (const auto& [d, coeff] : view) {
    g = g.is_zero() ? coeff.primitive_integer() : gcd_rec(g, coeff);
    if (g.is_one()) break;
  }
  return g;
}

void check_cap(const MultiPoly& p) {
  if (p.term_count() > MultiPoly::kTermCap)
    throw SizeCapExceeded("gcd intermediate exceeds term cap");
}

// Pseudo-remainder of a by b, univariate in v. Multiplies a by powers of
// lc(b) as needed so every division step stays exact.
MultiPoly prem(const MultiPoly& a, const MultiPoly& b, int v) {
  auto bv = univar_view(b, v);
  int db = bv.rbegin()->first;
  const MultiPoly& lcb = bv.rbegin()->second;
  MultiPoly r = a;
  while (!r.is_zero()) {
    auto rv = univar_view(r, v);
    int dr = rv.rbegin()->first;
    if (dr < db) break;
    const MultiPoly& lcr = rv.rbegin()->second;
    spend(static_cast<long>(lcb.term_count()) * r.term_count() +
          static_cast<long>(lcr.term_count()) * b.term_count());
    // r <- lcb*r - lcr*v^(dr-db)*b
    MultiPoly shift(a.nvars());
    Expo e(a.nvars(), 0);
    e[v] = dr - db;
    shift.add_term(e, rat(1));
    r = lcb * r - lcr * shift * b;
    check_cap(r);
  }
  return r;
}

MultiPoly gcd_rec(const MultiPoly& a, const MultiPoly& b) {
  spend(static_cast<long>(a.term_count()) + b.term_count() + 1);
  if (a.is_zero()) return b.primitive_integer();
  if (b.is_zero()) return a.primitive_integer();
  if (a.is_constant() || b.is_constant())
    return MultiPoly::constant(a.nvars(), rat(1));
  int v = lowest_active_var(a, b);
  if (v < 0) return MultiPoly::constant(a.nvars(), rat(1));
  if (a.degree_in(v) == 0) return gcd_rec(a, content_in(b, v));
  if (b.degree_in(v) == 0) return gcd_rec(content_in(a, v), b);

  MultiPoly ca = content_in(a, v);
  MultiPoly cb = content_in(b, v);
  MultiPoly c = gcd_rec(ca, cb);
  MultiPoly A = *MultiPoly::exact_divide(a.primitive_integer(), ca);
  MultiPoly B = *MultiPoly::exact_divide(b.primitive_integer(), cb);
  if (A.degree_in(v) < B.degree_in(v)) std::swap(A, B);
  while (!B.is_zero()) {
    MultiPoly r = prem(A, B, v);
    A = B;
    if (r.is_zero()) {
      B = MultiPoly(a.nvars());
    } else {
      MultiPoly cr = content_in(r, v);
      B = *MultiPoly::exact_divide(r.primitive_integer(), cr);
    }
    check_cap(A);
  }
  // A is the primitive gcd of the primitive parts; restore the content.
  return (c * A).primitive_integer();
}

}  // namespace

MultiPoly MultiPoly::gcd(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars() != b.nvars())
    throw ValidationError("gcd: variable count mismatch");
  gcd_budget = 2000000;
  return gcd_rec(a, b);
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rat coeff = c;
    if (first) {
      if (coeff < 0) {
        out << "-";
        coeff = -coeff;
      }
    } else {
      out << (coeff < 0 ? " - " : " + ");
      if (coeff < 0) coeff = -coeff;
    }
    first = false;
    bool has_vars = false;
    std::ostringstream vars;
    for (int v = 0; v < nvars_; ++v) {
      if (e[v] == 0) continue;
      if (has_vars) vars << "*";
      vars << "y" << (v + 1);
      if (e[v] > 1) vars << "^" << e[v];
      has_vars = true;
    }
    if (!has_vars) {
      out << clutor::to_string(coeff);
    } else if (coeff == 1) {
      out << vars.str();
    } else {
      out << clutor::to_string(coeff) << "*" << vars.str();
    }
  }
  return out.str();
}

}  // namespace clutor
