#include "clutor/torsion.hpp"

#include <cmath>
#include <future>
#include <random>
#include <sstream>

#include <json.hpp>

namespace clutor {

using nlohmann::json;

namespace {

double residual_of(const ClusterMap& m, const std::vector<Cplx>& p) {
  std::vector<Cplx> image = apply_map(m, p);
  double r = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    r = std::max(r, std::abs(image[i] - p[i]));
  return r;
}

// Gaussian elimination with partial pivoting; throws on numerically singular
// systems with a crude condition estimate.
std::vector<Cplx> solve_linear(std::vector<std::vector<Cplx>> a,
                               std::vector<Cplx> b) {
  const int n = static_cast<int>(b.size());
  double max_pivot = 0.0, min_pivot = 1e300;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    double mag = std::abs(a[col][col]);
    max_pivot = std::max(max_pivot, mag);
    min_pivot = std::min(min_pivot, mag);
    if (mag < 1e-14 * std::max(1.0, max_pivot)) {
      std::ostringstream msg;
      msg << "singular Newton system (J - I); pivot ratio "
          << (max_pivot > 0 ? min_pivot / max_pivot : 0.0);
      throw SolveFailure(msg.str());
    }
    for (int r = col + 1; r < n; ++r) {
      Cplx f = a[r][col] / a[col][col];
      if (f == Cplx(0.0, 0.0)) continue;
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Cplx> x(n);
  for (int r = n - 1; r >= 0; --r) {
    Cplx acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

std::vector<DualC> seeded_duals(const std::vector<Cplx>& p) {
  std::vector<DualC> d;
  d.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    d.push_back(DualC::seed(p[i], p.size(), i));
  return d;
}

double cusp_gap(const std::vector<Cplx>& y,
                const std::vector<std::vector<int>>& cycles) {
  double g = 0.0;
  for (const auto& cyc : cycles) {
    Cplx prod(1.0, 0.0);
    for (int v : cyc) prod *= y[v];
    g = std::max(g, std::abs(prod - Cplx(1.0, 0.0)));
  }
  return g;
}

double full_residual(const ClusterMap& m, const std::vector<Cplx>& p,
                     const std::vector<std::vector<int>>* cycles) {
  double r = residual_of(m, p);
  if (cycles) r = std::max(r, cusp_gap(p, *cycles));
  return r;
}

}  // namespace

std::vector<Cplx> solve_fixed_point(
    const ClusterMap& m, const std::vector<Cplx>& seed,
    const NewtonOptions& opts, NewtonTrace* trace,
    const std::vector<std::vector<int>>* cusp_cycles) {
  const int l = m.dim();
  if (static_cast<int>(seed.size()) != l)
    throw ValidationError("solve_fixed_point: seed dimension mismatch");
  const int extra = cusp_cycles ? static_cast<int>(cusp_cycles->size()) : 0;
  std::vector<Cplx> y = seed;
  double res = full_residual(m, y, cusp_cycles);
  if (res < opts.tolerance) {
    if (trace) {
      trace->iterations = 0;
      trace->residual = res;
      trace->degenerate_identity = m.steps().empty();
    }
    return y;
  }

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    // Stacked system: the fixed-point equations and, when requested, one
    // cusp product equation per puncture.
    std::vector<DualC> out = apply_map(m, seeded_duals(y));
    const int rows = l + extra;
    std::vector<std::vector<Cplx>> jac(rows, std::vector<Cplx>(l));
    std::vector<Cplx> fval(rows);
    for (int i = 0; i < l; ++i) {
      for (int j = 0; j < l; ++j) {
        jac[i][j] = out[i].grad_at(j);
        if (i == j) jac[i][j] -= 1.0;
      }
      fval[i] = out[i].value() - y[i];
    }
    for (int p = 0; p < extra; ++p) {
      const auto& cyc = (*cusp_cycles)[p];
      Cplx prod(1.0, 0.0);
      for (int v : cyc) prod *= y[v];
      fval[l + p] = prod - Cplx(1.0, 0.0);
      std::vector<int> mult(l, 0);
      for (int v : cyc) ++mult[v];
      for (int j = 0; j < l; ++j)
        jac[l + p][j] =
            mult[j] ? prod * Cplx(double(mult[j]), 0.0) / y[j] : Cplx(0.0, 0.0);
    }

    // Newton step, escalating through Levenberg-regularized least squares
    // when the plain system is singular (the fixed locus has positive
    // dimension) or the step is rejected.
    std::vector<std::vector<Cplx>> normal;
    std::vector<Cplx> normal_rhs;
    double diag_scale = 0.0;
    auto build_normal = [&]() {
      if (!normal.empty()) return;
      normal.assign(l, std::vector<Cplx>(l, Cplx(0, 0)));
      normal_rhs.assign(l, Cplx(0, 0));
      for (int i = 0; i < l; ++i) {
        for (int j = 0; j < l; ++j) {
          Cplx acc(0, 0);
          for (int r = 0; r < rows; ++r)
            acc += std::conj(jac[r][i]) * jac[r][j];
          normal[i][j] = acc;
        }
        Cplx acc(0, 0);
        for (int r = 0; r < rows; ++r) acc += std::conj(jac[r][i]) * fval[r];
        normal_rhs[i] = -acc;
        diag_scale = std::max(diag_scale, std::abs(normal[i][i]));
      }
      if (diag_scale == 0.0) diag_scale = 1.0;
    };

    bool accepted = false;
    double mu = 1e-12;
    for (int attempt = 0; attempt < 10 && !accepted; ++attempt) {
      std::vector<Cplx> delta;
      try {
        build_normal();
        auto a = normal;
        for (int i = 0; i < l; ++i) a[i][i] += mu * diag_scale;
        delta = solve_linear(std::move(a), normal_rhs);
      } catch (const SolveFailure&) {
        mu *= 100.0;
        continue;
      }

      double lambda = 1.0;
      for (int h = 0; h <= opts.max_halvings; ++h, lambda *= 0.5) {
        std::vector<Cplx> cand(l);
        bool in_torus = true;
        for (int i = 0; i < l; ++i) {
          cand[i] = y[i] + lambda * delta[i];
          if (std::abs(cand[i]) < 10 * kSingularTol) in_torus = false;
        }
        if (!in_torus) continue;
        double cand_res;
        try {
          cand_res = full_residual(m, cand, cusp_cycles);
        } catch (const SingularEvaluation&) {
          continue;
        }
        if (cand_res < res || cand_res < opts.tolerance) {
          y = std::move(cand);
          res = cand_res;
          accepted = true;
          break;
        }
      }
      if (!accepted) mu *= 100.0;
    }
    if (!accepted)
      throw SolveFailure(
          "Newton stalled: no damped step reduced the residual (residual " +
          std::to_string(res) + ")");
    if (res < opts.tolerance) {
      if (trace) {
        trace->iterations = iter;
        trace->residual = res;
      }
      return y;
    }
  }
  throw SolveFailure("Newton did not converge within " +
                     std::to_string(opts.max_iterations) +
                     " iterations (residual " + std::to_string(res) + ")");
}

std::vector<MultistartHit> multistart_hits(
    const ClusterMap& m, int starts, std::uint64_t rng_seed,
    const NewtonOptions& opts, int threads,
    const std::vector<std::vector<int>>* cusp_cycles) {
  const int l = m.dim();
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double lo = std::log(0.2), hi = std::log(5.0);
  std::vector<std::vector<Cplx>> seeds(starts, std::vector<Cplx>(l));
  for (auto& s : seeds)
    for (auto& c : s) {
      double r = std::exp(lo + unif(rng) * (hi - lo));
      double t = 2.0 * M_PI * unif(rng);
      c = std::polar(r, t);
    }

  auto run_range = [&](int begin, int end) {
    std::vector<MultistartHit> hits;
    for (int s = begin; s < end; ++s) {
      try {
        NewtonTrace tr;
        std::vector<Cplx> p =
            solve_fixed_point(m, seeds[s], opts, &tr, cusp_cycles);
        hits.push_back({std::move(p), tr.residual, s});
      } catch (const SolveFailure&) {
      } catch (const SingularEvaluation&) {
      }
    }
    return hits;
  };

  std::vector<MultistartHit> all;
  if (threads <= 1) {
    all = run_range(0, starts);
  } else {
    int chunk = (starts + threads - 1) / threads;
    std::vector<std::future<std::vector<MultistartHit>>> futures;
    for (int t = 0; t < threads; ++t) {
      int begin = t * chunk, end = std::min(starts, begin + chunk);
      if (begin >= end) break;
      futures.push_back(std::async(std::launch::async, run_range, begin, end));
    }
    for (auto& f : futures) {
      auto part = f.get();
      all.insert(all.end(), part.begin(), part.end());
    }
    std::sort(all.begin(), all.end(),
              [](const MultistartHit& a, const MultistartHit& b) {
                return a.seed_index < b.seed_index;
              });
  }
  return all;
}

namespace {

// At the geometric solution of a layered mapping-torus triangulation every
// layer is consistently oriented, which shows up as a constant sign of
// Im(y_k) at each mutated vertex along the program. Other boundary-unipotent
// solutions mix signs or degenerate to the real locus.
bool orientation_consistent(const ClusterMap& m, const std::vector<Cplx>& p) {
  std::vector<Cplx> cur = p;
  int sign = 0;
  try {
    for (const Step& s : m.steps()) {
      if (s.kind == Step::Kind::Mutate) {
        double im = cur[s.vertex].imag();
        int sg = im > 1e-8 ? 1 : (im < -1e-8 ? -1 : 0);
        if (sg == 0) return false;
        if (sign == 0) sign = sg;
        else if (sign != sg) return false;
        cur = mutate_x(cur, s.quiver_before, s.vertex);
      } else {
        std::vector<Cplx> next(cur.size());
        for (std::size_t i = 0; i < cur.size(); ++i) next[i] = cur[s.perm[i]];
        cur = std::move(next);
      }
    }
  } catch (const SingularEvaluation&) {
    return false;
  }
  return true;
}

double unit_product_gap(const std::vector<Cplx>& p) {
  Cplx prod(1.0, 0.0);
  for (const Cplx& c : p) prod *= c;
  return std::abs(prod - Cplx(1.0, 0.0));
}

bool same_solution(const std::vector<Cplx>& a, const std::vector<Cplx>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-6) return false;
  return true;
}

}  // namespace

MultistartResult multistart_fixed_point(
    const ClusterMap& m, int starts, std::uint64_t rng_seed,
    const NewtonOptions& opts, int threads,
    const std::vector<std::vector<int>>* cusp_cycles) {
  std::vector<MultistartHit> all =
      multistart_hits(m, starts, rng_seed, opts, threads, cusp_cycles);
  if (all.empty())
    throw SolveFailure("multistart: no converged fixed point in " +
                       std::to_string(starts) + " starts");

  std::vector<const MultistartHit*> reps;
  for (const MultistartHit& h : all) {
    bool merged = false;
    for (const MultistartHit*& r : reps)
      if (same_solution(h.point, r->point)) {
        if (h.residual < r->residual) r = &h;
        merged = true;
        break;
      }
    if (!merged) reps.push_back(&h);
  }

  // Rank candidates: unit coordinate product first, then orientation
  // consistency of the layers, then residual, then seed index.
  const MultistartHit* best = nullptr;
  double best_gap = 0.0;
  auto key = [&](const MultistartHit* r, double gap) {
    long gap_bucket = std::lround(std::min(gap, 1.0e3) * 1.0e6);
    return std::tuple<long, int, double, int>(
        gap_bucket, orientation_consistent(m, r->point) ? 0 : 1, r->residual,
        r->seed_index);
  };
  for (const MultistartHit* r : reps) {
    double gap = unit_product_gap(r->point);
    if (!best || key(r, gap) < key(best, best_gap)) {
      best = r;
      best_gap = gap;
    }
  }
  return {best->point, best->residual, best->seed_index, starts,
          static_cast<int>(reps.size()), best_gap};
}

bool conjugation_normalize(std::vector<Cplx>& point, double tol) {
  for (const Cplx& c : point) {
    if (std::abs(c.imag()) <= tol) continue;
    if (c.imag() > 0) return false;
    for (Cplx& x : point) x = std::conj(x);
    return true;
  }
  return false;
}

Jacobian jacobian_at(const ClusterMap& m, const std::vector<Cplx>& p) {
  std::vector<DualC> out = apply_map(m, seeded_duals(p));
  const int l = m.dim();
  Matrix<Cplx> J(l, Cplx(0.0, 0.0));
  for (int j = 0; j < l; ++j)
    for (int i = 0; i < l; ++i) J.at(i, j) = out[j].grad_at(i);
  return Jacobian{std::move(J), p};
}

Matrix<Quad> jacobian_at_exact(const ClusterMap& m,
                               const std::vector<Quad>& p) {
  std::vector<DualQ> duals;
  duals.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    duals.push_back(DualQ::seed(p[i], p.size(), i));
  std::vector<DualQ> out = apply_map(m, duals);
  const int l = m.dim();
  Matrix<Quad> J(l, Quad());
  for (int j = 0; j < l; ++j)
    for (int i = 0; i < l; ++i) J.at(i, j) = out[j].grad_at(i);
  return J;
}

namespace {

// Characteristic polynomial det(lambda I - J) by Faddeev-LeVerrier: exact in
// the coefficient field, no eigensolver.
template <class K>
std::vector<K> char_poly(const Matrix<K>& J, const K& model) {
  const int l = J.size();
  std::vector<K> c(l + 1, ScalarOps<K>::zero_like(model));
  c[l] = ScalarOps<K>::one_like(model);
  Matrix<K> M = Matrix<K>::identity_like(l, model);
  for (int k = 1; k <= l; ++k) {
    Matrix<K> AM = J * M;
    K t = AM.trace() * ScalarOps<K>::from_rat(rat(-1, k));
    c[l - k] = t;
    M = AM;
    for (int i = 0; i < l; ++i) M.at(i, i) = M.at(i, i) + t;
  }
  return c;
}

template <class K>
UniPoly<K> alexander_from_char(const std::vector<K>& c, const K& model) {
  const int l = static_cast<int>(c.size()) - 1;
  // det(tJ - I) = (-1)^l t^l det((1/t) I - J)
  std::vector<K> a(l + 1, ScalarOps<K>::zero_like(model));
  for (int mdeg = 0; mdeg <= l; ++mdeg) {
    a[mdeg] = c[l - mdeg];
    if (l % 2 == 1) a[mdeg] = -a[mdeg];
  }
  return UniPoly<K>(std::move(a));
}

}  // namespace

UniPoly<Cplx> alexander_poly(const Matrix<Cplx>& J) {
  Cplx model(0.0, 0.0);
  return alexander_from_char(char_poly(J, model), model);
}

UniPoly<Quad> alexander_poly_exact(const Matrix<Quad>& J) {
  Quad model;
  return alexander_from_char(char_poly(J, model), model);
}

std::optional<std::vector<long>> snap_coefficients(const UniPoly<Cplx>& p,
                                                   double tol) {
  std::vector<long> out;
  out.reserve(p.degree() + 1);
  for (int i = 0; i <= p.degree(); ++i) {
    auto v = snap_integer(p.coeff(i), tol);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

Cplx canonical_sign(const Cplx& z) {
  double tiny = 1e-12 * std::abs(z);
  if (z.real() < -tiny) return -z;
  if (std::abs(z.real()) <= tiny && z.imag() < 0) return -z;
  return z;
}

TorsionValue torsion_value(const UniPoly<Cplx>& p, int punctures, int rank,
                           double tol) {
  const int expected = punctures * (rank - 1);
  int mult = p.multiplicity_at(Cplx(1.0, 0.0), tol);
  if (mult != expected)
    throw MultiplicityMismatch(
        "t=1 root multiplicity " + std::to_string(mult) + " != m(n-1) = " +
        std::to_string(expected) +
        "; the underlying point violates the regularity hypotheses");
  UniPoly<Cplx> q =
      p.divided_by_linear_power(Cplx(1.0, 0.0), expected, tol);
  Cplx raw = q.eval(Cplx(1.0, 0.0));
  return TorsionValue{raw, canonical_sign(raw)};
}

Quad torsion_value_exact(const UniPoly<Quad>& p, int punctures, int rank) {
  const int expected = punctures * (rank - 1);
  int mult = p.multiplicity_at(Quad::integer(1), 0.0);
  if (mult != expected)
    throw MultiplicityMismatch("exact t=1 root multiplicity " +
                               std::to_string(mult) + " != m(n-1) = " +
                               std::to_string(expected));
  UniPoly<Quad> q = p.divided_by_linear_power(Quad::integer(1), expected, 0.0);
  return q.eval(Quad::integer(1));
}

namespace {

json cplx_json(const Cplx& z) { return json::array({z.real(), z.imag()}); }

json quad_json(const Quad& q) {
  return json{{"a", to_string(q.a())}, {"b", to_string(q.b())}, {"d", q.d()}};
}

std::string pretty_int_poly(const std::vector<long>& coeffs) {
  std::ostringstream out;
  bool first = true;
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
    long c = coeffs[i];
    if (c == 0) continue;
    if (first) {
      if (c < 0) out << "-";
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    long mag = std::abs(c);
    if (mag != 1 || i == 0) out << mag;
    if (i >= 1) {
      if (mag != 1) out << "*";
      out << "t";
      if (i > 1) out << "^" << i;
    }
  }
  if (first) out << "0";
  return out.str();
}

}  // namespace

std::string TorsionReport::to_json() const {
  json j;
  j["rank"] = rank;
  j["punctures"] = punctures;
  j["dim"] = dim;
  j["word"] = word;
  json fp = json::array();
  for (const Cplx& z : fixed_point) fp.push_back(cplx_json(z));
  j["fixed_point"] = fp;
  j["residual"] = residual;
  json alex = json::array();
  for (int i = 0; i <= alexander.degree(); ++i)
    alex.push_back(cplx_json(alexander.coeff(i)));
  j["alexander"] = alex;
  if (alexander_snapped)
    j["alexander_snapped"] = *alexander_snapped;
  else
    j["alexander_snapped"] = nullptr;
  j["t1_multiplicity"] = t1_multiplicity;
  j["normalization_exponent"] = normalization_exponent;
  if (torsion) {
    j["torsion"] = {{"raw", cplx_json(torsion->raw)},
                    {"canonical", cplx_json(torsion->canonical)}};
  } else {
    j["torsion"] = nullptr;
    j["diagnosis"] = diagnosis;
  }
  j["trace"] = trace;
  if (exact.attempted) {
    json e;
    e["discriminant"] = exact.discriminant;
    e["fixed_point_exact"] = exact.fixed_point_exact;
    if (!exact.failure.empty()) e["failure"] = exact.failure;
    json pt = json::array();
    for (const Quad& q : exact.point) pt.push_back(quad_json(q));
    e["fixed_point"] = pt;
    json alex_exact = json::array();
    for (const Quad& q : exact.alexander) alex_exact.push_back(quad_json(q));
    e["alexander"] = alex_exact;
    if (exact.torsion) e["torsion"] = quad_json(*exact.torsion);
    j["exact"] = e;
  }
  return j.dump(2);
}

std::string TorsionReport::to_text() const {
  std::ostringstream out;
  out << "mapping torus of word \"" << word << "\" at rank n = " << rank
      << " (punctures m = " << punctures << ", dim l = " << dim << ")\n";
  out << "fixed point (residual " << residual << "):\n";
  for (std::size_t i = 0; i < fixed_point.size(); ++i)
    out << "  y" << (i + 1) << " = " << fixed_point[i].real()
        << (fixed_point[i].imag() >= 0 ? " + " : " - ")
        << std::abs(fixed_point[i].imag()) << "i\n";
  out << "twisted Alexander polynomial det(tJ - I):\n";
  if (alexander_snapped) {
    out << "  " << pretty_int_poly(*alexander_snapped) << "\n";
  } else {
    out << "  "
        << alexander.to_string([](const Cplx& z) {
             std::ostringstream s;
             s << z.real() << (z.imag() >= 0 ? "+" : "-")
               << std::abs(z.imag()) << "i";
             return s.str();
           })
        << "\n";
  }
  out << "t=1 multiplicity: " << t1_multiplicity << " (expected m(n-1) = "
      << normalization_exponent << ")\n";
  if (torsion) {
    out << "torsion (limit): " << torsion->raw.real();
    if (std::abs(torsion->raw.imag()) > 1e-9)
      out << " + " << torsion->raw.imag() << "i";
    out << "   [defined up to sign]\n";
  } else {
    out << "torsion: not defined - " << diagnosis << "\n";
  }
  if (exact.attempted) {
    if (exact.fixed_point_exact) {
      out << "exact verification in Q(sqrt(" << exact.discriminant
          << ")): fixed point exact";
      if (exact.torsion)
        out << ", torsion = " << exact.torsion->to_string();
      out << "\n";
    } else {
      out << "exact verification failed: " << exact.failure << "\n";
    }
  }
  return out.str();
}

std::vector<std::vector<int>> rank2_cusp_cycles(const Triangulation& tri,
                                                const Quiver& q2) {
  std::vector<std::vector<int>> cycles;
  for (const auto& edges : tri.puncture_edge_cycles()) {
    std::vector<int> verts;
    verts.reserve(edges.size());
    for (int e : edges) verts.push_back(q2.index_of(VertexLoc::edge_vertex(e, 1)));
    cycles.push_back(std::move(verts));
  }
  return cycles;
}

TorsionReport full_pipeline(const Triangulation& tri, const MappingWord& word,
                            int rank, const PipelineOptions& opts) {
  tri.require_valid();
  if (rank < 2) throw ValidationError("rank must be at least 2");

  TorsionReport report;
  report.rank = rank;
  report.punctures = tri.puncture_count();
  report.word = word.is_generic() ? std::string("<generic>") : word.letters;
  report.normalization_exponent = report.punctures * (rank - 1);

  ClusterMap map = mapping_class_map(tri, word, rank);
  report.dim = map.dim();

  // Seed selection.
  std::vector<Cplx> seed;
  switch (opts.strategy) {
    case SeedStrategy::kExplicit:
      seed = opts.explicit_seed;
      report.trace.push_back("seed: explicit point");
      break;
    case SeedStrategy::kMultistart: {
      MultistartResult ms = multistart_fixed_point(
          map, opts.starts, opts.rng_seed, opts.newton, opts.threads);
      seed = ms.point;
      report.trace.push_back(
          "seed: multistart at rank " + std::to_string(rank) + ", start #" +
          std::to_string(ms.seed_index) + " of " + std::to_string(ms.starts_tried) +
          " (" + std::to_string(ms.distinct_solutions) +
          " distinct solutions, product gap " + std::to_string(ms.product_gap) +
          ")");
      break;
    }
    case SeedStrategy::kEmbedRank2: {
      if (rank == 2) {
        auto cycles = rank2_cusp_cycles(tri, map.initial_quiver());
        MultistartResult ms =
            multistart_fixed_point(map, opts.starts, opts.rng_seed,
                                   opts.newton, opts.threads, &cycles);
        seed = ms.point;
        report.trace.push_back(
            "seed: cusp-constrained multistart at rank 2, start #" +
            std::to_string(ms.seed_index) + " (" +
            std::to_string(ms.distinct_solutions) +
            " distinct boundary-unipotent solutions)");
      } else {
        ClusterMap map2 = mapping_class_map(tri, word, 2);
        auto cycles = rank2_cusp_cycles(tri, map2.initial_quiver());
        MultistartResult ms =
            multistart_fixed_point(map2, opts.starts, opts.rng_seed,
                                   opts.newton, opts.threads, &cycles);
        seed = embed_pgl2(ms.point, map2.initial_quiver(),
                          map.initial_quiver());
        report.trace.push_back(
            "seed: boundary-unipotent rank-2 fixed point (start #" +
            std::to_string(ms.seed_index) + " of " +
            std::to_string(ms.starts_tried) + ", " +
            std::to_string(ms.distinct_solutions) +
            " distinct) embedded to rank " + std::to_string(rank));
      }
      break;
    }
  }

  NewtonTrace tr;
  report.fixed_point = solve_fixed_point(map, seed, opts.newton, &tr);
  report.residual = tr.residual;
  report.trace.push_back("newton: " + std::to_string(tr.iterations) +
                         " iterations, residual " +
                         std::to_string(tr.residual));
  if (tr.degenerate_identity)
    report.trace.push_back("degenerate: identity map, every point is fixed");
  // Conjugate fixed points are interchangeable for these real-coefficient
  // maps; normalize the reported one unless the caller pinned a seed.
  if (opts.strategy != SeedStrategy::kExplicit &&
      conjugation_normalize(report.fixed_point))
    report.trace.push_back("normalized: conjugate representative chosen");

  Jacobian jac = jacobian_at(map, report.fixed_point);
  report.alexander = alexander_poly(jac.matrix);
  report.alexander_snapped = snap_coefficients(report.alexander);
  report.t1_multiplicity =
      report.alexander.multiplicity_at(Cplx(1.0, 0.0), 1e-6);

  try {
    report.torsion = torsion_value(report.alexander, report.punctures, rank);
  } catch (const MultiplicityMismatch& e) {
    report.diagnosis = e.what();
  }

  if (opts.exact_mode) {
    report.exact.attempted = true;
    report.exact.discriminant = opts.discriminant;
    std::vector<Quad> qpoint;
    bool snapped = true;
    for (const Cplx& z : report.fixed_point) {
      auto q = snap_quad(z, opts.discriminant, 1e-9);
      if (!q) {
        snapped = false;
        break;
      }
      qpoint.push_back(*q);
    }
    if (!snapped) {
      report.exact.failure =
          "fixed point does not lie in Q(sqrt(d)) within snapping tolerance";
    } else {
      report.exact.point = qpoint;
      try {
        std::vector<Quad> image = apply_map(map, qpoint);
        bool exact_fixed = true;
        for (std::size_t i = 0; i < qpoint.size(); ++i)
          if (!(image[i] == qpoint[i])) exact_fixed = false;
        report.exact.fixed_point_exact = exact_fixed;
        if (!exact_fixed) {
          report.exact.failure = "snapped point is not exactly fixed";
        } else {
          Matrix<Quad> J = jacobian_at_exact(map, qpoint);
          UniPoly<Quad> alex = alexander_poly_exact(J);
          for (int i = 0; i <= alex.degree(); ++i)
            report.exact.alexander.push_back(alex.coeff(i));
          double worst = 0.0;
          for (int i = 0; i <= alex.degree(); ++i)
            worst = std::max(worst, std::abs(alex.coeff(i).to_complex() -
                                             report.alexander.coeff(i)));
          report.trace.push_back(
              "exact mode: max |exact - numeric| coefficient gap " +
              std::to_string(worst));
          try {
            report.exact.torsion =
                torsion_value_exact(alex, report.punctures, rank);
            // Exact coefficients supersede the numeric route, which loses
            // precision once the polynomial's coefficients outgrow doubles.
            std::vector<long> ints;
            bool integral = true;
            for (const Quad& c : report.exact.alexander) {
              if (!c.is_rational() || c.a().get_den() != 1 ||
                  !c.a().get_num().fits_slong_p()) {
                integral = false;
                break;
              }
              ints.push_back(c.a().get_num().get_si());
            }
            if (integral) report.alexander_snapped = ints;
            report.t1_multiplicity = report.normalization_exponent;
            Cplx raw = report.exact.torsion->to_complex();
            report.torsion = TorsionValue{raw, canonical_sign(raw)};
            report.diagnosis.clear();
          } catch (const MultiplicityMismatch& e) {
            report.exact.failure = e.what();
          }
        }
      } catch (const SingularEvaluation& e) {
        report.exact.fixed_point_exact = false;
        report.exact.failure = std::string("exact evaluation singular: ") +
                               e.what();
      }
    }
  }
  return report;
}

}  // namespace clutor
