#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "clutor/cluster.hpp"
#include "golden_torus.hpp"
#include "oracles.hpp"

using namespace clutor;

namespace {

const Cplx kOmega(-0.5, std::sqrt(3.0) / 2.0);

Quiver mutated_quiver(std::mt19937_64& rng, int steps = 5) {
  Quiver q = Quiver::build(Triangulation::four_punctured_sphere(), 2);
  for (int i = 0; i < steps; ++i)
    q = q.mutated(static_cast<int>(rng() % q.size()));
  return q;
}

// The double flip lands on an isomorphic triangulation; the composite map is
// the identity only after transporting labels through both flip quads.
double double_flip_identity_error(const Triangulation& tri, int edge, int n,
                                  std::mt19937_64& rng) {
  Quiver q = Quiver::build(tri, n);
  ClusterMap f1 = flip_map(q, tri, edge, n);
  auto [t2, rec1] = tri.flip(edge);
  ClusterMap f2 = flip_map(f1.final_quiver(), t2, edge, n);
  auto [t3, rec2] = t2.flip(edge);
  ClusterMap round = f1.then(f2);

  std::vector<int> b1 =
      vertex_bijection(q, f1.final_quiver(), FlipCorrespondence{rec1, n});
  std::vector<int> b2 = vertex_bijection(f1.final_quiver(), f2.final_quiver(),
                                         FlipCorrespondence{rec2, n});
  std::vector<Cplx> p = oracle::random_point(rng, q.size());
  std::vector<Cplx> image = apply_map(round, p);
  double err = 0;
  for (int i = 0; i < q.size(); ++i)
    err = std::max(err, std::abs(image[b2[b1[i]]] - p[i]));
  return err;
}

}  // namespace

TEST_CASE("x-mutation follows the three-case rule") {
  // two-vertex quiver with one arrow: (2, 3) mutates at the source to
  // (1/2, 9) since the target sees eps = -1 and picks up (1 + y_1)
  {
    Quiver two = Quiver::from_matrix({VertexLoc::edge_vertex(0, 1),
                                      VertexLoc::edge_vertex(1, 1)},
                                     {{0, 1}, {-1, 0}});
    std::vector<Cplx> p = {{2, 0}, {3, 0}};
    std::vector<Cplx> out = mutate_x(p, two, 0);
    CHECK(std::abs(out[0] - Cplx(0.5, 0)) < 1e-14);
    CHECK(std::abs(out[1] - Cplx(9, 0)) < 1e-14);
  }

  Quiver markov = Quiver::build(Triangulation::once_punctured_torus(), 2);
  // eps(b, a) = 2 in the frozen order; point (2,3,5): mutating at a divides
  // y_a, multiplies the eps<0 neighbor by (1+y_a)^2 and divides the eps>0
  // neighbor by (1+1/y_a)^2.
  int a = markov.index_of(VertexLoc::edge_vertex(0, 1));
  int b = markov.index_of(VertexLoc::edge_vertex(1, 1));
  int c = markov.index_of(VertexLoc::edge_vertex(2, 1));
  std::vector<Cplx> p(3);
  p[a] = {2, 0};
  p[b] = {3, 0};
  p[c] = {5, 0};
  std::vector<Cplx> out = mutate_x(p, markov, a);
  CHECK(std::abs(out[a] - Cplx(0.5, 0)) < 1e-14);
  // eps(b,a) = 2 >= 0: 3 / (1 + 1/2)^2 = 4/3
  CHECK(std::abs(out[b] - Cplx(4.0 / 3.0, 0)) < 1e-14);
  // eps(c,a) = -2 <= 0: 5 * (1+2)^2 = 45
  CHECK(std::abs(out[c] - Cplx(45, 0)) < 1e-14);

  // pole: a neighbor of a coordinate at -1 is singular
  std::vector<Cplx> pole = p;
  pole[a] = {-1, 0};
  CHECK_THROWS_AS((void)mutate_x(pole, markov, a), SingularEvaluation);
  std::vector<Cplx> zero = p;
  zero[a] = {0, 0};
  CHECK_THROWS_AS((void)mutate_x(zero, markov, a), SingularEvaluation);
}

TEST_CASE("x-mutation involutivity over all scalar kinds") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    Quiver q = mutated_quiver(rng);
    int k = static_cast<int>(rng() % q.size());
    std::vector<Cplx> p = oracle::random_point(rng, q.size());
    std::vector<Cplx> back = mutate_x(mutate_x(p, q, k), q.mutated(k), k);
    for (int i = 0; i < q.size(); ++i)
      CHECK(std::abs(back[i] - p[i]) <= 1e-9 * (1.0 + std::abs(p[i])));
  }

  // symbolic involutivity
  Quiver q = Quiver::build(Triangulation::once_punctured_torus(), 2);
  std::vector<RationalFunction> ys;
  for (int i = 0; i < q.size(); ++i)
    ys.push_back(RationalFunction::variable(q.size(), i));
  for (int k = 0; k < q.size(); ++k) {
    auto once = mutate_x(ys, q, k);
    auto twice = mutate_x(once, q.mutated(k), k);
    for (int i = 0; i < q.size(); ++i) CHECK(twice[i].equals(ys[i]));
  }

  // exact quadratic-field involutivity
  Quad w(rat(-1, 2), rat(1, 2), -3);
  std::vector<Quad> qp = {Quad::integer(1), w, w.conj()};
  auto once = mutate_x(qp, q, 1);
  auto twice = mutate_x(once, q.mutated(1), 1);
  for (int i = 0; i < 3; ++i) CHECK(twice[i] == qp[i]);
}

TEST_CASE("flip_map structure and consistency") {
  Triangulation tri = Triangulation::once_punctured_torus();

  // rank 2: a single mutation plus the re-indexing permute
  Quiver q2 = Quiver::build(tri, 2);
  ClusterMap f2 = flip_map(q2, tri, 1, 2);
  int mutates = 0;
  for (const Step& s : f2.steps())
    if (s.kind == Step::Kind::Mutate) ++mutates;
  CHECK(mutates == 1);
  f2.verify();

  // rank 3: four mutations, edge pair first
  Quiver q3 = Quiver::build(tri, 3);
  ClusterMap f3 = flip_map(q3, tri, 1, 3);
  std::vector<int> seq;
  for (const Step& s : f3.steps())
    if (s.kind == Step::Kind::Mutate) seq.push_back(s.vertex);
  REQUIRE(seq.size() == 4);
  CHECK(q3.vertex(seq[0]).on_edge);
  CHECK(q3.vertex(seq[1]).on_edge);
  CHECK(!q3.vertex(seq[2]).on_edge);
  CHECK(!q3.vertex(seq[3]).on_edge);
  f3.verify();

  CHECK_THROWS_AS(flip_map(q3, tri, 7, 3), ValidationError);

  // flip consistency: the mutated quiver equals the rebuilt one under the
  // quad bijection (checked internally; verify() re-walks the chain)
  for (Triangulation t : {Triangulation::once_punctured_torus(),
                          Triangulation::four_punctured_sphere()}) {
    for (int n = 2; n <= 4; ++n) {
      Quiver q = Quiver::build(t, n);
      for (int e = 0; e < t.edge_count(); ++e) flip_map(q, t, e, n).verify();
    }
  }
}

TEST_CASE("double flip is the identity after label transport") {
  std::mt19937_64 rng(29);
  for (Triangulation tri : {Triangulation::once_punctured_torus(),
                            Triangulation::four_punctured_sphere()}) {
    for (int n = 2; n <= 4; ++n)
      for (int e = 0; e < tri.edge_count(); ++e)
        CHECK(double_flip_identity_error(tri, e, n, rng) < 1e-9);
  }
}

TEST_CASE("mapping class maps match the reference formulas") {
  Triangulation tri = Triangulation::once_punctured_torus();

  ClusterMap empty = mapping_class_map(tri, MappingWord::torus_word(""), 3);
  CHECK(empty.steps().empty());
  std::mt19937_64 rng(31);
  std::vector<Cplx> p = oracle::random_point(rng, 8);
  CHECK(apply_map(empty, p) == p);

  ClusterMap L = mapping_class_map(tri, MappingWord::torus_word("L"), 3);
  ClusterMap LR = mapping_class_map(tri, MappingWord::torus_word("LR"), 3);
  L.verify();
  LR.verify();
  std::vector<RationalFunction> refL, refPhi;
  for (int i = 0; i < 8; ++i) {
    refL.push_back(parse_ratfun(golden::kLStar[i], 8));
    refPhi.push_back(parse_ratfun(golden::phi_star()[i], 8));
  }
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Cplx> y = oracle::random_point(rng, 8);
    std::vector<Cplx> mineL = apply_map(L, y);
    std::vector<Cplx> minePhi = apply_map(LR, y);
    for (int i = 0; i < 8; ++i) {
      Cplx el = refL[i].eval(y);
      Cplx ep = refPhi[i].eval(y);
      CHECK(std::abs(mineL[i] - el) <= 1e-9 * (1.0 + std::abs(el)));
      CHECK(std::abs(minePhi[i] - ep) <= 1e-9 * (1.0 + std::abs(ep)));
    }
  }
}

TEST_CASE("generic flip programs agree with the torus letters") {
  Triangulation tri = Triangulation::once_punctured_torus();
  for (const std::string word : {"L", "R", "LR", "RL", "LLR"}) {
    FlipProgram fp = word_to_flips(tri, MappingWord::torus_word(word));
    ClusterMap via_letters =
        mapping_class_map(tri, MappingWord::torus_word(word), 3);
    ClusterMap via_generic = mapping_class_map(
        tri, MappingWord::generic(fp.flips, fp.relabel), 3);
    via_generic.verify();
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Cplx> y = oracle::random_point(rng, 8);
      std::vector<Cplx> a = apply_map(via_letters, y);
      std::vector<Cplx> b = apply_map(via_generic, y);
      for (int i = 0; i < 8; ++i)
        CHECK(std::abs(a[i] - b[i]) <= 1e-9 * (1.0 + std::abs(a[i])));
    }
  }
}

TEST_CASE("two flip sequences for one mapping class give the same map") {
  // the identity class, realized as the empty word and as flip-flip-back at
  // edge b with the transport derived from the flip quadrilateral
  Triangulation tri = Triangulation::once_punctured_torus();
  Relabeling back;
  back.edge_image = {{0, false}, {1, true}, {2, false}};
  back.tri_image = {{1, 2}, {0, 1}};
  for (int n : {2, 3}) {
    ClusterMap doubled =
        mapping_class_map(tri, MappingWord::generic({1, 1}, back), n);
    doubled.verify();
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Cplx> p = oracle::random_point(rng, doubled.dim());
      std::vector<Cplx> image = apply_map(doubled, p);
      for (int i = 0; i < doubled.dim(); ++i)
        CHECK(std::abs(image[i] - p[i]) <= 1e-9 * (1.0 + std::abs(p[i])));
    }
  }
}

TEST_CASE("apply_map at the reference solution is exact in Q(sqrt(-3))") {
  Triangulation tri = Triangulation::once_punctured_torus();
  ClusterMap phi = mapping_class_map(tri, MappingWord::torus_word("LR"), 3);
  Quad w(rat(-1, 2), rat(1, 2), -3);
  std::vector<Quad> point(8, Quad::integer(1));
  point[2] = w;
  point[5] = w;
  point[4] = w.conj();
  point[6] = w.conj();
  std::vector<Quad> image = apply_map(phi, point);
  for (int i = 0; i < 8; ++i) CHECK(image[i] == point[i]);

  // a generic point is not fixed
  std::vector<Cplx> generic(8, Cplx(1.3, 0.2));
  std::vector<Cplx> moved = apply_map(phi, generic);
  double dist = 0;
  for (int i = 0; i < 8; ++i) dist = std::max(dist, std::abs(moved[i] - generic[i]));
  CHECK(dist > 1e-3);
}

TEST_CASE("symbolic_map emits reduced canonical components") {
  Triangulation tri = Triangulation::once_punctured_torus();
  ClusterMap ident = mapping_class_map(tri, MappingWord::torus_word(""), 3);
  SymbolicMap sym = symbolic_map(ident);
  CHECK(sym.fully_reduced);
  for (int i = 0; i < 8; ++i)
    CHECK(sym.components[i].equals(RationalFunction::variable(8, i)));

  ClusterMap L = mapping_class_map(tri, MappingWord::torus_word("L"), 3);
  SymbolicMap sl = symbolic_map(L);
  CHECK(sl.fully_reduced);
  CHECK(sl.components[6].equals(parse_ratfun("(1+y3) / (y3*(1+y6)*y8)", 8)));

  ClusterMap LR = mapping_class_map(tri, MappingWord::torus_word("LR"), 3);
  SymbolicMap sp = symbolic_map(LR);
  CHECK(sp.components[4].equals(parse_ratfun(golden::phi_star()[4], 8)));
}

TEST_CASE("rank-2 embedding copies edges and fills interiors with 1") {
  Triangulation tri = Triangulation::once_punctured_torus();
  Quiver q2 = Quiver::build(tri, 2);
  Quiver q3 = Quiver::build(tri, 3);

  // all-ones maps to all-ones
  std::vector<Cplx> ones(3, Cplx(1, 0));
  std::vector<Cplx> up = embed_pgl2(ones, q2, q3);
  for (const Cplx& c : up) CHECK(std::abs(c - Cplx(1, 0)) < 1e-15);

  // the reference rank-2 point fills the figure coordinates
  std::vector<Cplx> p2(3);
  p2[q2.index_of(VertexLoc::edge_vertex(0, 1))] = Cplx(1, 0);
  p2[q2.index_of(VertexLoc::edge_vertex(2, 1))] = kOmega;
  p2[q2.index_of(VertexLoc::edge_vertex(1, 1))] = std::conj(kOmega);
  std::vector<Cplx> p3 = embed_pgl2(p2, q2, q3);
  CHECK(std::abs(p3[0] - Cplx(1, 0)) < 1e-15);  // y1
  CHECK(std::abs(p3[1] - Cplx(1, 0)) < 1e-15);  // y2
  CHECK(std::abs(p3[2] - kOmega) < 1e-15);      // y3
  CHECK(std::abs(p3[3] - Cplx(1, 0)) < 1e-15);  // y4 interior
  CHECK(std::abs(p3[4] - std::conj(kOmega)) < 1e-15);
  CHECK(std::abs(p3[5] - kOmega) < 1e-15);
  CHECK(std::abs(p3[6] - std::conj(kOmega)) < 1e-15);
  CHECK(std::abs(p3[7] - Cplx(1, 0)) < 1e-15);

  // equivariance: phi* o iota = iota o phi* at random points
  ClusterMap phi2 = mapping_class_map(tri, MappingWord::torus_word("LR"), 2);
  ClusterMap phi3 = mapping_class_map(tri, MappingWord::torus_word("LR"), 3);
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Cplx> x = oracle::random_point(rng, 3);
    std::vector<Cplx> lhs = apply_map(phi3, embed_pgl2(x, q2, q3));
    std::vector<Cplx> rhs = embed_pgl2(apply_map(phi2, x), q2, q3);
    for (int i = 0; i < 8; ++i)
      CHECK(std::abs(lhs[i] - rhs[i]) <= 1e-9 * (1.0 + std::abs(rhs[i])));
  }
}

TEST_CASE("program serialization lists steps and snapshots") {
  Triangulation tri = Triangulation::once_punctured_torus();
  ClusterMap L = mapping_class_map(tri, MappingWord::torus_word("L"), 2);
  std::string js = L.to_json();
  CHECK(js.find("\"mutate\"") != std::string::npos);
  CHECK(js.find("\"permute\"") != std::string::npos);
  CHECK(js.find("\"epsilon\"") != std::string::npos);
}

TEST_CASE("jacobian of a composition is the product of step jacobians") {
  Triangulation tri = Triangulation::once_punctured_torus();
  ClusterMap L = mapping_class_map(tri, MappingWord::torus_word("L"), 2);
  ClusterMap R = mapping_class_map(tri, MappingWord::torus_word("R"), 2);
  ClusterMap LR = mapping_class_map(tri, MappingWord::torus_word("LR"), 2);
  std::mt19937_64 rng(59);
  std::vector<Cplx> y = oracle::random_point(rng, 3);

  auto dual_jac = [&](const ClusterMap& m, const std::vector<Cplx>& at) {
    std::vector<DualC> duals;
    for (int i = 0; i < 3; ++i) duals.push_back(DualC::seed(at[i], 3, i));
    auto out = apply_map(m, duals);
    std::vector<std::vector<Cplx>> J(3, std::vector<Cplx>(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) J[i][j] = out[j].grad_at(i);
    return J;
  };

  auto JL = dual_jac(L, y);
  std::vector<Cplx> mid = apply_map(L, y);
  auto JR = dual_jac(R, mid);
  auto JLR = dual_jac(LR, y);
  // chain rule: d(R o L)_ij = sum_k dL_ik dR_kj
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Cplx acc(0, 0);
      for (int k = 0; k < 3; ++k) acc += JL[i][k] * JR[k][j];
      CHECK(std::abs(acc - JLR[i][j]) <= 1e-9 * (1.0 + std::abs(acc)));
    }
}
