#pragma once

#include <string>
#include <vector>

#include "clutor/dual.hpp"
#include "clutor/quiver.hpp"
#include "clutor/ratfun.hpp"

namespace clutor {

// One step of a cluster program. A Mutate step carries the quiver in force
// just before it fires; a Permute step reassigns coordinate slots, with
// perm[i] naming the source slot of the new slot i.
struct Step {
  enum class Kind { Mutate, Permute };
  Kind kind = Kind::Mutate;
  int vertex = -1;
  Quiver quiver_before;  // Mutate only
  std::vector<int> perm;

  static Step mutate(int k, Quiver q) {
    Step s;
    s.kind = Kind::Mutate;
    s.vertex = k;
    s.quiver_before = std::move(q);
    return s;
  }
  static Step permute(std::vector<int> p) {
    Step s;
    s.kind = Kind::Permute;
    s.perm = std::move(p);
    return s;
  }
};

// A composable rational self-map of (C*)^l stored as a mutation/permutation
// program rather than as symbolic component functions.
class ClusterMap {
 public:
  ClusterMap(Quiver initial, Quiver final_quiver, std::vector<Step> steps)
      : initial_(std::move(initial)), final_(std::move(final_quiver)),
        steps_(std::move(steps)) {}

  static ClusterMap identity(Quiver q) { return ClusterMap(q, q, {}); }

  int dim() const { return initial_.size(); }
  const Quiver& initial_quiver() const { return initial_; }
  const Quiver& final_quiver() const { return final_; }
  const std::vector<Step>& steps() const { return steps_; }

  ClusterMap then(const ClusterMap& next) const;

  // Internal coherence: each Mutate step's quiver is the previous one
  // mutated, permutes are bijections, and the chain ends at final_quiver.
  void verify() const;

  std::string to_json() const;

 private:
  Quiver initial_, final_;
  std::vector<Step> steps_;
};

// The coordinate change companion to quiver mutation at vertex k:
//   y_k -> 1/y_k,
//   y_i -> y_i (1 + y_k^{-1})^{-eps_ik}   (eps_ik >= 0)
//   y_i -> y_i (1 + y_k)^{-eps_ik}        (eps_ik <= 0).
// Works over any scalar kind, symbolic coordinates included.
template <class K>
std::vector<K> mutate_x(const std::vector<K>& p, const Quiver& q, int k) {
  const int l = q.size();
  if (k < 0 || k >= l) throw ValidationError("mutate_x: index out of range");
  if (static_cast<int>(p.size()) != l)
    throw ValidationError("mutate_x: point dimension mismatch");
  const K& yk = p[k];
  if (ScalarOps<K>::near_zero(yk))
    throw SingularEvaluation("mutate_x: coordinate y_k vanishes");
  bool has_neighbor = false;
  for (int i = 0; i < l; ++i)
    if (i != k && q.eps(i, k) != 0) has_neighbor = true;
  K one = ScalarOps<K>::one_like(yk);
  K one_plus = one + yk;
  if (has_neighbor && ScalarOps<K>::near_zero(one_plus))
    throw SingularEvaluation("mutate_x: 1 + y_k vanishes");

  std::vector<K> out = p;
  out[k] = one / yk;
  K one_plus_inv = one + one / yk;
  for (int i = 0; i < l; ++i) {
    if (i == k) continue;
    int e = q.eps(i, k);
    if (e == 0) continue;
    if (e > 0)
      out[i] = p[i] / scalar_pow(one_plus_inv, static_cast<long>(e));
    else
      out[i] = p[i] * scalar_pow(one_plus, static_cast<long>(-e));
  }
  return out;
}

template <class K>
std::vector<K> apply_map(const ClusterMap& m, const std::vector<K>& point) {
  if (static_cast<int>(point.size()) != m.dim())
    throw ValidationError("apply_map: point dimension mismatch");
  std::vector<K> cur = point;
  int index = 0;
  for (const Step& s : m.steps()) {
    try {
      if (s.kind == Step::Kind::Mutate) {
        cur = mutate_x(cur, s.quiver_before, s.vertex);
      } else {
        std::vector<K> next;
        next.reserve(cur.size());
        for (std::size_t i = 0; i < cur.size(); ++i)
          next.push_back(cur[s.perm[i]]);
        cur = std::move(next);
      }
    } catch (const SingularEvaluation& e) {
      throw SingularEvaluation("step " + std::to_string(index) + ": " +
                               e.what());
    }
    ++index;
  }
  return cur;
}

// The flip at edge e as a cluster program: (n-1)^2 mutations (the edge line,
// then both triangles' interior lines) followed by the quadrilateral
// re-indexing. The final quiver is rebuilt from the flipped triangulation
// and checked against the mutated one.
ClusterMap flip_map(const Quiver& q, const Triangulation& tri, int edge,
                    int rank);

// The action of a mapping word as a self-map of the cluster torus.
ClusterMap mapping_class_map(const Triangulation& tri, const MappingWord& word,
                             int rank);

struct SymbolicMap {
  std::vector<RationalFunction> components;
  bool fully_reduced = true;
  bool aborted = false;  // expansion hit the term cap; components are seeds
};

// Runs the program over symbolic coordinates, reducing at every step.
SymbolicMap symbolic_map(const ClusterMap& m);

// Copies each rank-2 edge value to every vertex on the same edge and sets
// interior coordinates to 1.
template <class K>
std::vector<K> embed_pgl2(const std::vector<K>& p2, const Quiver& q2,
                          const Quiver& qn) {
  if (static_cast<int>(p2.size()) != q2.size())
    throw ValidationError("embed_pgl2: point dimension mismatch");
  std::vector<K> out(qn.size(), ScalarOps<K>::one_like(p2.at(0)));
  for (int i = 0; i < qn.size(); ++i) {
    const VertexLoc& v = qn.vertex(i);
    if (v.on_edge)
      out[i] = p2[q2.index_of(VertexLoc::edge_vertex(v.edge, 1))];
  }
  return out;
}

}  // namespace clutor
