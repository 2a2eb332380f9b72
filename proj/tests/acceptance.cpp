// Acceptance suite: the six gate criteria, one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "clutor/cluster.hpp"
#include "clutor/torsion.hpp"
#include "golden_torus.hpp"
#include "oracles.hpp"

using namespace clutor;

namespace {

const Cplx kOmega(-0.5, std::sqrt(3.0) / 2.0);

int failures = 0;

void report(int index, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << index << ": "
            << name;
  if (!detail.empty()) std::cout << "  [" << detail << "]";
  std::cout << "\n";
  if (!ok) ++failures;
}

std::vector<Cplx> reference_fixed_point() {
  std::vector<Cplx> p(8, Cplx(1, 0));
  p[2] = kOmega;
  p[5] = kOmega;
  p[4] = std::conj(kOmega);
  p[6] = std::conj(kOmega);
  return p;
}

UniPoly<Rat> reference_alexander() {
  UniPoly<Rat> alex = UniPoly<Rat>::constant(rat(1));
  for (const auto& factor : golden::kAlexanderFactors) {
    std::vector<Rat> cs;
    for (long c : factor) cs.push_back(rat(c));
    alex = alex * UniPoly<Rat>(std::move(cs));
  }
  return alex;
}

// ---------------------------------------------------------------------------
// 1. End-to-end figure-eight run: torsion +-84, the reference fixed point,
//    and a sub-10-second wall clock.
void criterion_1(const TorsionReport& rep, double seconds) {
  std::ostringstream detail;
  bool ok = rep.ok();
  if (ok) {
    double gap = std::abs(std::abs(rep.torsion->raw) - 84.0);
    detail << "| |torsion|-84 | = " << gap;
    ok = gap < 1e-6;
    std::vector<Cplx> ref = reference_fixed_point();
    double worst = 0;
    for (int i = 0; i < 8; ++i)
      worst = std::max(worst, std::abs(rep.fixed_point[i] - ref[i]));
    detail << ", max coordinate error " << worst;
    ok = ok && worst < 1e-10;
    detail << ", " << seconds << " s";
    ok = ok && seconds < 10.0;
  } else {
    detail << "pipeline diagnosis: " << rep.diagnosis;
  }
  report(1, "figure-eight end-to-end torsion 84", ok, detail.str());
}

// ---------------------------------------------------------------------------
// 2. Alexander polynomial coefficients: within 1e-6 before snapping, equal
//    after snapping, and reproduced with zero tolerance in Q(sqrt(-3)).
void criterion_2(const TorsionReport& numeric, const TorsionReport& exact) {
  UniPoly<Rat> ref = reference_alexander();
  bool ok = numeric.ok() && numeric.alexander.degree() == ref.degree();
  double worst = 0;
  if (ok) {
    for (int i = 0; i <= ref.degree(); ++i) {
      double gap =
          std::abs(numeric.alexander.coeff(i) -
                   Cplx(to_double(ref.coeff(i)), 0.0));
      worst = std::max(worst, gap);
    }
    ok = worst < 1e-6;
    ok = ok && numeric.alexander_snapped.has_value();
    if (ok)
      for (int i = 0; i <= ref.degree(); ++i)
        ok = ok && rat((*numeric.alexander_snapped)[i]) == ref.coeff(i);
  }
  bool exact_ok = exact.exact.attempted && exact.exact.fixed_point_exact &&
                  static_cast<int>(exact.exact.alexander.size()) ==
                      ref.degree() + 1;
  if (exact_ok)
    for (int i = 0; i <= ref.degree(); ++i)
      exact_ok = exact_ok && exact.exact.alexander[i] == Quad(ref.coeff(i));
  std::ostringstream detail;
  detail << "max numeric gap " << worst
         << (exact_ok ? ", exact coefficients identical" : ", exact check FAILED");
  report(2, "Alexander polynomial matches the reference factorization",
         ok && exact_ok, detail.str());
}

// ---------------------------------------------------------------------------
// 3. Multiplicity of the root t = 1 is exactly m(n-1) = 2.
void criterion_3(const TorsionReport& rep) {
  bool ok = rep.t1_multiplicity == 2 && rep.normalization_exponent == 2;
  report(3, "t=1 root multiplicity equals m(n-1) = 2", ok,
         "multiplicity " + std::to_string(rep.t1_multiplicity));
}

// ---------------------------------------------------------------------------
// 4. Symbolic generator and composite maps equal the reference formulas,
//    canonically and at 50 random points.
void criterion_4() {
  Triangulation tri = Triangulation::once_punctured_torus();
  SymbolicMap L =
      symbolic_map(mapping_class_map(tri, MappingWord::torus_word("L"), 3));
  SymbolicMap R =
      symbolic_map(mapping_class_map(tri, MappingWord::torus_word("R"), 3));
  SymbolicMap phi =
      symbolic_map(mapping_class_map(tri, MappingWord::torus_word("LR"), 3));
  auto phi_ref = golden::phi_star();

  bool canonical = L.fully_reduced && R.fully_reduced && phi.fully_reduced;
  for (int i = 0; i < 8 && canonical; ++i) {
    canonical = canonical &&
                L.components[i].equals(parse_ratfun(golden::kLStar[i], 8)) &&
                R.components[i].equals(parse_ratfun(golden::kRStar[i], 8)) &&
                phi.components[i].equals(parse_ratfun(phi_ref[i], 8));
  }

  bool numeric = true;
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 50 && numeric; ++trial) {
    std::vector<Cplx> y = oracle::random_point(rng, 8);
    for (int i = 0; i < 8 && numeric; ++i) {
      Cplx mine = phi.components[i].eval(y);
      Cplx ref = parse_ratfun(phi_ref[i], 8).eval(y);
      numeric = std::abs(mine - ref) <= 1e-9 * (1.0 + std::abs(ref));
    }
  }
  report(4, "printed-formula golden files (L*, R*, phi*)", canonical && numeric,
         canonical ? "canonical forms equal" : "canonical mismatch");
}

// ---------------------------------------------------------------------------
// 5. Property suites.
void criterion_5() {
  std::mt19937_64 rng(505);
  bool ok = true;
  std::ostringstream detail;

  // (a) involutivity of quiver and X mutation, 1000 random cases each
  {
    Quiver base = Quiver::build(Triangulation::four_punctured_sphere(), 3);
    bool inv = true;
    for (int trial = 0; trial < 1000 && inv; ++trial) {
      Quiver q = base;
      int walk = static_cast<int>(rng() % 6);
      for (int w = 0; w < walk; ++w)
        q = q.mutated(static_cast<int>(rng() % q.size()));
      int k = static_cast<int>(rng() % q.size());
      inv = inv && q.mutated(k).mutated(k).eps_matrix() == q.eps_matrix();
      std::vector<Cplx> p = oracle::random_point(rng, q.size());
      std::vector<Cplx> back = mutate_x(mutate_x(p, q, k), q.mutated(k), k);
      for (int i = 0; i < q.size(); ++i)
        inv = inv && std::abs(back[i] - p[i]) <= 1e-9 * (1.0 + std::abs(p[i]));
    }
    ok = ok && inv;
    if (!inv) detail << "involutivity failed; ";
  }

  // (b) flip consistency: torus n = 2,3,4 and four-punctured sphere n = 2,3
  {
    bool flips = true;
    auto run = [&](const Triangulation& tri, int nmax) {
      for (int n = 2; n <= nmax; ++n) {
        Quiver q = Quiver::build(tri, n);
        for (int e = 0; e < tri.edge_count(); ++e) {
          try {
            flip_map(q, tri, e, n);
          } catch (const std::exception&) {
            flips = false;
          }
        }
      }
    };
    run(Triangulation::once_punctured_torus(), 4);
    run(Triangulation::four_punctured_sphere(), 3);
    ok = ok && flips;
    if (!flips) detail << "flip consistency failed; ";
  }

  // (c) embedding equivariance at 50 random points
  {
    Triangulation tri = Triangulation::once_punctured_torus();
    Quiver q2 = Quiver::build(tri, 2);
    Quiver q3 = Quiver::build(tri, 3);
    ClusterMap phi2 = mapping_class_map(tri, MappingWord::torus_word("LR"), 2);
    ClusterMap phi3 = mapping_class_map(tri, MappingWord::torus_word("LR"), 3);
    bool equi = true;
    for (int trial = 0; trial < 50 && equi; ++trial) {
      std::vector<Cplx> x = oracle::random_point(rng, 3);
      std::vector<Cplx> lhs = apply_map(phi3, embed_pgl2(x, q2, q3));
      std::vector<Cplx> rhs = embed_pgl2(apply_map(phi2, x), q2, q3);
      for (int i = 0; i < 8; ++i)
        equi = equi && std::abs(lhs[i] - rhs[i]) <=
                           1e-9 * (1.0 + std::abs(rhs[i]));
    }
    ok = ok && equi;
    if (!equi) detail << "equivariance failed; ";
  }

  // (d) dual-number Jacobians against central differences, 100 pairs
  {
    Triangulation tri = Triangulation::once_punctured_torus();
    bool duals = true;
    int checked = 0;
    while (checked < 100) {
      std::string word;
      int len = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < len; ++i) word += "LR"[rng() % 2];
      int n = 2 + static_cast<int>(rng() % 2);
      ClusterMap m = mapping_class_map(tri, MappingWord::torus_word(word), n);
      std::vector<Cplx> y = oracle::random_point(rng, m.dim());
      try {
        Jacobian jd = jacobian_at(m, y);
        auto fd = oracle::fd_jacobian(m, y);
        for (int i = 0; i < m.dim(); ++i)
          for (int j = 0; j < m.dim(); ++j)
            duals = duals && std::abs(jd.matrix.at(i, j) - fd[i][j]) <=
                                 1e-5 * (1.0 + std::abs(fd[i][j]));
        ++checked;
      } catch (const SingularEvaluation&) {
      }
      if (!duals) break;
    }
    ok = ok && duals;
    if (!duals) detail << "dual vs finite differences failed; ";
  }

  // (e) double-flip numeric identity through the quad transport
  {
    bool dbl = true;
    for (Triangulation tri : {Triangulation::once_punctured_torus(),
                              Triangulation::four_punctured_sphere()}) {
      for (int n = 2; n <= 3; ++n) {
        for (int e = 0; e < tri.edge_count() && dbl; ++e) {
          Quiver q = Quiver::build(tri, n);
          ClusterMap f1 = flip_map(q, tri, e, n);
          auto [t2, rec1] = tri.flip(e);
          ClusterMap f2 = flip_map(f1.final_quiver(), t2, e, n);
          auto rec2 = t2.flip(e).second;
          std::vector<int> b1 =
              vertex_bijection(q, f1.final_quiver(), FlipCorrespondence{rec1, n});
          std::vector<int> b2 = vertex_bijection(
              f1.final_quiver(), f2.final_quiver(), FlipCorrespondence{rec2, n});
          std::vector<Cplx> p = oracle::random_point(rng, q.size());
          std::vector<Cplx> image = apply_map(f1.then(f2), p);
          for (int i = 0; i < q.size(); ++i)
            dbl = dbl && std::abs(image[b2[b1[i]]] - p[i]) <=
                             1e-9 * (1.0 + std::abs(p[i]));
        }
      }
    }
    ok = ok && dbl;
    if (!dbl) detail << "double-flip identity failed; ";
  }

  report(5, "property suites (involutivity, flips, embedding, duals)", ok,
         ok ? "a-e all green" : detail.str());
}

// ---------------------------------------------------------------------------
// 6. The rank-2 multistart finds the reference fixed point among 100 starts.
void criterion_6() {
  Triangulation tri = Triangulation::once_punctured_torus();
  ClusterMap phi2 = mapping_class_map(tri, MappingWord::torus_word("LR"), 2);
  auto cycles = rank2_cusp_cycles(tri, phi2.initial_quiver());
  std::vector<MultistartHit> hits =
      multistart_hits(phi2, 100, 20240401, {}, 1, &cycles);

  // target multiset {1, w, conj(w)}, up to coordinate labeling
  std::vector<Cplx> target = {Cplx(1, 0), kOmega, std::conj(kOmega)};
  auto sorted = [](std::vector<Cplx> v) {
    std::sort(v.begin(), v.end(), [](const Cplx& a, const Cplx& b) {
      if (std::abs(a.real() - b.real()) > 1e-7) return a.real() < b.real();
      return a.imag() < b.imag();
    });
    return v;
  };
  std::vector<Cplx> want = sorted(target);
  int found = 0;
  for (const auto& h : hits) {
    std::vector<Cplx> got = sorted(h.point);
    double err = 0;
    for (int i = 0; i < 3; ++i) err = std::max(err, std::abs(got[i] - want[i]));
    if (err < 1e-8) ++found;
  }
  report(6, "rank-2 multistart reproduces the reference seed point",
         found >= 1,
         std::to_string(found) + " of " + std::to_string(hits.size()) +
             " converged starts hit it");
}

}  // namespace

int main() {
  Triangulation tri = Triangulation::once_punctured_torus();
  PipelineOptions defaults;

  auto t0 = std::chrono::steady_clock::now();
  TorsionReport rep = full_pipeline(tri, MappingWord::torus_word("LR"), 3, defaults);
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  PipelineOptions exact_opts;
  exact_opts.exact_mode = true;
  exact_opts.discriminant = -3;
  TorsionReport exact =
      full_pipeline(tri, MappingWord::torus_word("LR"), 3, exact_opts);

  criterion_1(rep, seconds);
  criterion_2(rep, exact);
  criterion_3(rep);
  criterion_4();
  criterion_5();
  criterion_6();

  std::cout << (failures == 0 ? "all acceptance criteria passed"
                              : std::to_string(failures) + " criteria FAILED")
            << "\n";
  return failures;
}
