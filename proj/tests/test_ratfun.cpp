#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "clutor/dual.hpp"
#include "clutor/ratfun.hpp"
#include "clutor/unipoly.hpp"
#include "golden_torus.hpp"
#include "oracles.hpp"

using namespace clutor;

namespace {
MultiPoly P(const std::string& s, int nvars) {
  RationalFunction f = parse_ratfun(s, nvars);
  REQUIRE(f.den().is_one());
  return f.num();
}
}  // namespace

TEST_CASE("polynomial arithmetic examples") {
  CHECK(P("(y1+1) + (y1-1)", 1) == P("2*y1", 1));
  CHECK(P("(y1+y2)*(y1-y2)", 2) == P("y1^2 - y2^2", 2));
  // Denominator product of the first generator component: expansion done by
  // hand before implementation.
  CHECK(P("(1+y3)*(1+y3+y3*y8+y3*y6*y8)", 8) ==
        P("1 + 2*y3 + y3^2 + y3*y8 + y3^2*y8 + y3*y6*y8 + y3^2*y6*y8", 8));

  MultiPoly a = P("y1+1", 1);
  MultiPoly b(2);
  b.add_term({1, 0}, rat(1));
  CHECK_THROWS_AS((void)(a * b), ValidationError);
}

TEST_CASE("ring axioms hold exactly on random triples") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    int nvars = 1 + static_cast<int>(rng() % 4);
    MultiPoly a = oracle::random_poly(rng, nvars);
    MultiPoly b = oracle::random_poly(rng, nvars);
    MultiPoly c = oracle::random_poly(rng, nvars);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
  }
}

TEST_CASE("gcd examples") {
  CHECK(MultiPoly::gcd(P("y1^2-y2^2", 2), P("y1-y2", 2)) == P("y1-y2", 2));
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    MultiPoly p = oracle::random_poly(rng, 3, 4, 2, true);
    CHECK(MultiPoly::gcd(p, P("1", 3)).is_one());
  }

  MultiPoly f = P("(1+y3)^2*(1+y6)", 8);
  MultiPoly g = P("(1+y3)*(1+y6)^2", 8);
  MultiPoly expect = P("(1+y3)*(1+y6)", 8);
  MultiPoly got = MultiPoly::gcd(f, g);
  CHECK(got == expect);
  // verify by division
  CHECK(MultiPoly::exact_divide(f, got).has_value());
  CHECK(MultiPoly::exact_divide(g, got).has_value());

  // gcd with zero returns the other argument normalized
  MultiPoly zero(8);
  CHECK(MultiPoly::gcd(P("2*y1+2", 8), zero) == P("y1+1", 8));
}

TEST_CASE("gcd divides and reduces random products") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    int nvars = 2 + static_cast<int>(rng() % 2);
    MultiPoly a = oracle::random_poly(rng, nvars, 4, 2, true);
    MultiPoly b = oracle::random_poly(rng, nvars, 4, 2, true);
    MultiPoly c = oracle::random_poly(rng, nvars, 3, 2, true);
    MultiPoly g = MultiPoly::gcd(a * c, b * c);
    // c divides the gcd, and the gcd divides both products
    CHECK(MultiPoly::exact_divide(g, c.primitive_integer()).has_value());
    CHECK(MultiPoly::exact_divide(a * c, g).has_value());
    CHECK(MultiPoly::exact_divide(b * c, g).has_value());
  }
}

TEST_CASE("rational function composition examples") {
  // identity projection
  RationalFunction y1 = RationalFunction::variable(2, 0);
  RationalFunction f = parse_ratfun("(y1+3*y2)/(1+y2)", 2);
  std::vector<RationalFunction> args = {f, RationalFunction::variable(2, 1)};
  CHECK(compose(y1, args).equals(f));

  // involution
  RationalFunction inv = parse_ratfun("1/y1", 1);
  CHECK(compose(inv, {inv}).equals(RationalFunction::variable(1, 0)));

  // the composite generator map: R* component composed with all of L*
  RationalFunction outer = parse_ratfun(golden::kRStar[0], 8);
  std::vector<RationalFunction> inner;
  for (const auto& s : golden::kLStar) inner.push_back(parse_ratfun(s, 8));
  RationalFunction expect = parse_ratfun(golden::phi_star()[0], 8);
  CHECK(compose(outer, inner).equals(expect));
}

TEST_CASE("derivative: quotient rule against finite differences") {
  RationalFunction f = parse_ratfun(golden::kLStar[4], 8);  // (1+y6)/((1+y3)*y4*y6)
  RationalFunction df = f.derivative(3);                    // d/dy4
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Cplx> p = oracle::random_point(rng, 8);
    double h = 1e-6;
    std::vector<Cplx> up = p, dn = p;
    up[3] += h;
    dn[3] -= h;
    Cplx fd = (f.eval(up) - f.eval(dn)) / (2.0 * h);
    Cplx sym = df.eval(p);
    CHECK(std::abs(fd - sym) <= 1e-6 * (1.0 + std::abs(sym)));
  }

  // trivial cases
  CHECK(parse_ratfun("y1*y2", 2).derivative(0).equals(parse_ratfun("y2", 2)));
  CHECK(parse_ratfun("1/y1", 1).derivative(0).equals(
      parse_ratfun("0 - 1/(y1^2)", 1)));
}

TEST_CASE("evaluation: exact quadratic field and singularities") {
  RationalFunction f = parse_ratfun("(y1+y2)/y3", 3);
  std::vector<Cplx> p = {{1, 0}, {2, 0}, {3, 0}};
  CHECK(std::abs(f.eval(p) - Cplx(1, 0)) < 1e-15);

  // (1+y6)/((1+y3)*y4*y6) at y3 = y6 = w, y4 = 1 equals conj(w) exactly
  RationalFunction L5 = parse_ratfun(golden::kLStar[4], 8);
  Quad w(rat(-1, 2), rat(1, 2), -3);
  std::vector<Quad> q(8, Quad::integer(1));
  q[2] = w;
  q[5] = w;
  CHECK(L5.eval(q) == w.conj());

  std::vector<Cplx> sing = {{1, 0}, {2, 0}, {0, 0}};
  CHECK_THROWS_AS((void)f.eval(sing), SingularEvaluation);
}

TEST_CASE("normalized and raw fractions evaluate identically") {
  std::mt19937_64 rng(17);
  int checked = 0;
  while (checked < 100) {
    int nvars = 2;
    MultiPoly a = oracle::random_poly(rng, nvars, 4, 2, true);
    MultiPoly b = oracle::random_poly(rng, nvars, 4, 2, true);
    MultiPoly c = oracle::random_poly(rng, nvars, 3, 2, true);
    RationalFunction f(a * c, b * c);  // normalizes on construction
    std::vector<Cplx> p = oracle::random_point(rng, nvars);
    Cplx den = (b * c).eval(p);
    if (std::abs(den) < 1e-6) continue;
    Cplx raw = (a * c).eval(p) / den;
    Cplx cooked = f.eval(p);
    CHECK(std::abs(raw - cooked) <= 1e-10 * (1.0 + std::abs(raw)));
    ++checked;
  }
}

TEST_CASE("dual-number gradients match derive-then-evaluate") {
  std::mt19937_64 rng(23);
  RationalFunction f = parse_ratfun(golden::kRStar[3], 8);
  std::vector<RationalFunction> grads;
  for (int i = 0; i < 8; ++i) grads.push_back(f.derivative(i));
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Cplx> p = oracle::random_point(rng, 8);
    std::vector<DualC> dp;
    for (int i = 0; i < 8; ++i) dp.push_back(DualC::seed(p[i], 8, i));
    DualC out = f.eval(dp);
    for (int i = 0; i < 8; ++i) {
      Cplx expect = grads[i].eval(p);
      CHECK(std::abs(out.grad_at(i) - expect) <=
            1e-10 * (1.0 + std::abs(expect)));
    }
  }
}

TEST_CASE("univariate polynomials in t") {
  using UP = UniPoly<Rat>;
  UP five = UP::constant(rat(5));
  UP tm1 = UP::linear_minus(rat(1));
  UP p = tm1 * tm1 * five;
  UP q = p.divided_by_linear_power(rat(1), 2, 0.0);
  CHECK(q.degree() == 0);
  CHECK(q.eval(rat(1)) == 5);

  UP six(std::vector<Rat>{rat(1), rat(-5), rat(6)});  // 6t^2 - 5t + 1 reversed?
  // coefficients ascending: 1 - 5t + 6t^2
  CHECK(six.eval(rat(1)) == 2);

  // the reference polynomial: divide by (t-1)^2 and evaluate at 1
  UP alex = UP::constant(rat(1));
  for (const auto& factor : golden::kAlexanderFactors) {
    std::vector<Rat> cs;
    for (long c : factor) cs.push_back(rat(c));
    alex = alex * UP(std::move(cs));
  }
  CHECK(alex.degree() == 8);
  UP reduced = alex.divided_by_linear_power(rat(1), 2, 0.0);
  CHECK(reduced.eval(rat(1)) == -84);

  // division by a higher power than the multiplicity must fail
  CHECK_THROWS_AS(alex.divided_by_linear_power(rat(1), 3, 0.0),
                  MultiplicityMismatch);
  CHECK(alex.multiplicity_at(rat(1), 0.0) == 2);

  // divide then multiply reproduces the input exactly
  UP back = reduced * tm1 * tm1;
  CHECK(back.degree() == alex.degree());
  for (int i = 0; i <= back.degree(); ++i) CHECK(back.coeff(i) == alex.coeff(i));
}

TEST_CASE("canonical text round-trips exactly") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    int nvars = 1 + static_cast<int>(rng() % 5);
    MultiPoly num = oracle::random_poly(rng, nvars, 5, 3, true);
    MultiPoly den = oracle::random_poly(rng, nvars, 4, 2, true);
    RationalFunction f(num, den);
    RationalFunction g = parse_ratfun(f.to_string(), nvars);
    CHECK(f.equals(g));
  }
  CHECK_THROWS_AS(parse_ratfun("y1 + ", 2), ParseError);
  CHECK_THROWS_AS(parse_ratfun("y9", 2), ParseError);
  CHECK_THROWS_AS(parse_ratfun("(y1", 2), ParseError);
}
