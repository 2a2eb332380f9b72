#pragma once

#include <array>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "clutor/surface.hpp"

namespace clutor {

// A quiver vertex sits either at position p of an edge (p = 1..n-1 along the
// edge's intrinsic direction) or at an interior lattice point of a triangle
// (barycentric coordinates summing to n, all positive).
struct VertexLoc {
  bool on_edge = true;
  int edge = -1;
  int pos = 0;
  int tri = -1;
  std::array<int, 3> bary{0, 0, 0};

  static VertexLoc edge_vertex(int e, int p) {
    VertexLoc v;
    v.on_edge = true;
    v.edge = e;
    v.pos = p;
    return v;
  }
  static VertexLoc interior_vertex(int t, std::array<int, 3> b) {
    VertexLoc v;
    v.on_edge = false;
    v.tri = t;
    v.bary = b;
    return v;
  }
  bool operator==(const VertexLoc&) const = default;
  std::string to_string() const;
};

// How two quivers' vertex sets correspond: directly by labels, through the
// quadrilateral of a flip, or through a mapping-class relabeling.
struct IdentityCorrespondence {};
struct FlipCorrespondence {
  FlipRecord record;
  int rank = 2;
};
struct RelabelCorrespondence {
  Relabeling relabel;
};
using Correspondence = std::variant<IdentityCorrespondence, FlipCorrespondence,
                                    RelabelCorrespondence>;

class Quiver {
 public:
  Quiver() = default;  // empty; filled by build()

  static Quiver build(const Triangulation& tri, int rank);
  // Ad-hoc quiver from explicit labels and exchange matrix; entries may be
  // any integers, but the matrix must be skew-symmetric.
  static Quiver from_matrix(std::vector<VertexLoc> vertices,
                            std::vector<std::vector<int>> eps, int rank = 2);

  int size() const { return static_cast<int>(verts_.size()); }
  int rank() const { return rank_; }
  const std::vector<VertexLoc>& vertices() const { return verts_; }
  const VertexLoc& vertex(int i) const { return verts_.at(i); }
  int eps(int i, int j) const { return eps_.at(i).at(j); }
  const std::vector<std::vector<int>>& eps_matrix() const { return eps_; }

  int index_of(const VertexLoc& loc) const;

  Quiver mutated(int k) const;

  // Permute vertex slots: slot i of the result holds vertex perm[i].
  Quiver permuted(const std::vector<int>& perm) const;

  bool operator==(const Quiver& o) const {
    return verts_ == o.verts_ && eps_ == o.eps_;
  }

  // Violated structural invariants (skew-symmetry, entry range, vertex
  // count); empty when healthy.
  std::vector<std::string> check(const Triangulation& tri) const;

  std::string to_json() const;
  std::string to_text() const;  // arrow list

 private:
  int rank_ = 0;
  std::vector<VertexLoc> verts_;
  std::vector<std::vector<int>> eps_;
  std::map<std::pair<int, int>, int> edge_index_;
  std::map<std::pair<int, std::array<int, 3>>, int> tri_index_;

  void rebuild_lookup();
};

// Matches q's vertices to q2's through the given correspondence, returning
// the map q-index -> q2-index.
std::vector<int> vertex_bijection(const Quiver& q, const Quiver& q2,
                                  const Correspondence& corr);

}  // namespace clutor
