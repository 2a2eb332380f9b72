#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clutor/cluster.hpp"
#include "clutor/unipoly.hpp"

namespace clutor {

// Small dense matrix, enough for the Jacobian work here.
template <class K>
class Matrix {
 public:
  Matrix(int n, K fill) : n_(n), a_(static_cast<std::size_t>(n) * n, fill) {}
  static Matrix identity_like(int n, const K& model) {
    Matrix m(n, ScalarOps<K>::zero_like(model));
    for (int i = 0; i < n; ++i) m.at(i, i) = ScalarOps<K>::one_like(model);
    return m;
  }
  int size() const { return n_; }
  K& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const K& at(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * n_ + j];
  }
  Matrix operator*(const Matrix& b) const {
    Matrix r(n_, ScalarOps<K>::zero_like(a_[0]));
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) {
        const K& aik = at(i, k);
        if (ScalarOps<K>::exact_zero(aik)) continue;
        for (int j = 0; j < n_; ++j)
          r.at(i, j) = r.at(i, j) + aik * b.at(k, j);
      }
    return r;
  }
  K trace() const {
    K t = ScalarOps<K>::zero_like(a_[0]);
    for (int i = 0; i < n_; ++i) t = t + at(i, i);
    return t;
  }

 private:
  int n_;
  std::vector<K> a_;
};

// J_ij = d phi_j / d y_i at the basepoint.
struct Jacobian {
  Matrix<Cplx> matrix;
  std::vector<Cplx> basepoint;
};

struct NewtonOptions {
  double tolerance = 1e-12;
  int max_iterations = 100;
  int max_halvings = 20;
};

struct NewtonTrace {
  int iterations = 0;
  double residual = 0.0;
  bool degenerate_identity = false;  // the seed was already fixed
};

// Damped Newton iteration on G(y) = phi(y) - y from one seed. Because the
// fixed locus of a mapping-class action is m(n-1)-dimensional, an optional
// set of cusp constraints (one product of coordinates per puncture, required
// to equal 1) cuts out the boundary-unipotent points; with them the solve is
// Gauss-Newton on the stacked system. cusp_cycles lists, per puncture, the
// quiver vertex indices whose coordinates the product runs over.
std::vector<Cplx> solve_fixed_point(
    const ClusterMap& m, const std::vector<Cplx>& seed,
    const NewtonOptions& opts = {}, NewtonTrace* trace = nullptr,
    const std::vector<std::vector<int>>* cusp_cycles = nullptr);

struct MultistartHit {
  std::vector<Cplx> point;
  double residual = 0.0;
  int seed_index = -1;
};

// All converged multistart solutions in seed order. Seeds are drawn in the
// annulus 0.2 < |y| < 5 from the given RNG seed, so the output is a pure
// function of (map, starts, rng_seed).
std::vector<MultistartHit> multistart_hits(
    const ClusterMap& m, int starts, std::uint64_t rng_seed,
    const NewtonOptions& opts = {}, int threads = 1,
    const std::vector<std::vector<int>>* cusp_cycles = nullptr);

struct MultistartResult {
  std::vector<Cplx> point;
  double residual = 0.0;
  int seed_index = -1;
  int starts_tried = 0;
  int distinct_solutions = 0;
  double product_gap = 0.0;
};

// Deterministic merge of the hits: cluster coincident solutions, then pick
// the cluster whose coordinate product is closest to 1 (fixed points coming
// from unipotent-boundary characters satisfy prod y_i = 1; other components
// generically do not). Ties fall back to residual, then seed index.
MultistartResult multistart_fixed_point(
    const ClusterMap& m, int starts, std::uint64_t rng_seed,
    const NewtonOptions& opts = {}, int threads = 1,
    const std::vector<std::vector<int>>* cusp_cycles = nullptr);

// Quiver vertex indices of the rank-2 cusp products, one list per puncture.
std::vector<std::vector<int>> rank2_cusp_cycles(const Triangulation& tri,
                                                const Quiver& q2);

// Fixed points of these integer-coefficient maps come in conjugate pairs;
// reports use the representative whose first non-real coordinate has
// positive imaginary part. Returns true when it conjugated.
bool conjugation_normalize(std::vector<Cplx>& point, double tol = 1e-8);

Jacobian jacobian_at(const ClusterMap& m, const std::vector<Cplx>& p);
Matrix<Quad> jacobian_at_exact(const ClusterMap& m,
                               const std::vector<Quad>& p);

// det(tJ - I) with exact coefficient arithmetic in t: Faddeev-LeVerrier on J
// gives the characteristic polynomial, reindexed so that the coefficient of
// t^k is (-1)^(l-k) times the sum of the k x k principal minors.
UniPoly<Cplx> alexander_poly(const Matrix<Cplx>& J);
UniPoly<Quad> alexander_poly_exact(const Matrix<Quad>& J);

// Coefficients snapped to integers; empty when some coefficient is not
// within snapping distance of an integer.
std::optional<std::vector<long>> snap_coefficients(const UniPoly<Cplx>& p,
                                                   double tol = kIntegerSnapTol);

struct TorsionValue {
  Cplx raw;        // limit value of p(t)/(t-1)^k at t = 1
  Cplx canonical;  // sign-normalized representative in C* / {+-1}
};

// Requires t=1 to be a root of multiplicity exactly m(n-1).
TorsionValue torsion_value(const UniPoly<Cplx>& p, int punctures, int rank,
                           double tol = 1e-6);
Quad torsion_value_exact(const UniPoly<Quad>& p, int punctures, int rank);

Cplx canonical_sign(const Cplx& z);

enum class SeedStrategy {
  kEmbedRank2,   // multistart at n=2, then embed (default for n > 2)
  kMultistart,   // multistart at the requested rank
  kExplicit,     // caller-provided point
};

struct PipelineOptions {
  SeedStrategy strategy = SeedStrategy::kEmbedRank2;
  std::vector<Cplx> explicit_seed;
  int starts = 100;
  std::uint64_t rng_seed = 20240401;
  NewtonOptions newton;
  bool exact_mode = false;
  long discriminant = -3;
  int threads = 1;
};

struct ExactCheck {
  bool attempted = false;
  long discriminant = 0;
  bool fixed_point_exact = false;
  std::vector<Quad> point;
  std::vector<Quad> alexander;  // coefficients, index = power of t
  std::optional<Quad> torsion;
  std::string failure;
};

struct TorsionReport {
  int rank = 0;
  int punctures = 0;
  int dim = 0;
  std::string word;
  std::vector<Cplx> fixed_point;
  double residual = 0.0;
  UniPoly<Cplx> alexander;
  std::optional<std::vector<long>> alexander_snapped;
  int t1_multiplicity = 0;
  int normalization_exponent = 0;
  std::optional<TorsionValue> torsion;
  std::string diagnosis;  // empty when torsion is populated
  std::vector<std::string> trace;
  ExactCheck exact;

  bool ok() const { return torsion.has_value(); }
  std::string to_json() const;
  std::string to_text() const;
};

TorsionReport full_pipeline(const Triangulation& tri, const MappingWord& word,
                            int rank, const PipelineOptions& opts = {});

}  // namespace clutor
